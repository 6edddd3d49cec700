#pragma once

#include <stdexcept>
#include <string>

namespace wiltscan {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    Internal = 1,
    Config = 2,
    Io = 3,
    Data = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(std::string message) : Error(ErrorKind::Config, std::move(message)) {}
};

struct IoError : Error {
    explicit IoError(std::string message) : Error(ErrorKind::Io, std::move(message)) {}
};

struct DataError : Error {
    explicit DataError(std::string message) : Error(ErrorKind::Data, std::move(message)) {}
};

struct InternalError : Error {
    explicit InternalError(std::string message) : Error(ErrorKind::Internal, std::move(message)) {}
};

} // namespace wiltscan
