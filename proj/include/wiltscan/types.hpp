#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"

namespace wiltscan {

// One 2-D single-band raster: reflectance fraction in [0,1] or temperature in
// degrees C for thermal. Row-major f32 storage matching the on-disk container.
struct BandRaster {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<float> values; // row-major, width * height entries

    std::size_t size() const { return values.size(); }
    float at(std::uint32_t x, std::uint32_t y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }

    void validate() const {
        if (width == 0 || height == 0)
            throw DataError("raster dimensions must be positive");
        if (values.size() != static_cast<std::size_t>(width) * height)
            throw DataError("raster payload length does not match dimensions");
        for (float v : values)
            if (std::isnan(v)) throw DataError("raster contains NaN values");
    }
};

struct BandDefinition {
    double center_nm = 0.0;
    double width_nm = 0.0;
};

enum class SensorKind { Rgb, Multispectral, Hyperspectral, Thermal };

inline std::string to_string(SensorKind k) {
    switch (k) {
        case SensorKind::Rgb: return "rgb";
        case SensorKind::Multispectral: return "multispectral";
        case SensorKind::Hyperspectral: return "hyperspectral";
        case SensorKind::Thermal: return "thermal";
    }
    return "unknown";
}

inline SensorKind sensor_kind_from_string(const std::string& s) {
    if (s == "rgb") return SensorKind::Rgb;
    if (s == "multispectral") return SensorKind::Multispectral;
    if (s == "hyperspectral") return SensorKind::Hyperspectral;
    if (s == "thermal") return SensorKind::Thermal;
    throw ConfigError("unknown sensor kind: " + s);
}

struct SensorProfile {
    std::string name;
    SensorKind kind = SensorKind::Multispectral;
    std::vector<BandDefinition> bands;

    void validate() const {
        if (bands.empty()) throw ConfigError("sensor profile '" + name + "' has no bands");
        for (const auto& b : bands) {
            if (b.center_nm <= 0 || b.width_nm <= 0)
                throw ConfigError("sensor profile '" + name + "' has non-positive band definition");
        }
        for (std::size_t i = 1; i < bands.size(); ++i) {
            if (bands[i].center_nm <= bands[i - 1].center_nm)
                throw ConfigError("sensor profile '" + name + "' band centers not strictly increasing");
        }
        if (kind == SensorKind::Rgb && bands.size() != 3)
            throw ConfigError("rgb profile must have exactly 3 bands");
        if (kind == SensorKind::Thermal && bands.size() != 1)
            throw ConfigError("thermal profile must have exactly 1 band");
    }
};

// The 10-band Micasense-style multispectral camera: center(width) in nm.
inline SensorProfile multispectral_profile() {
    SensorProfile p;
    p.name = "multispectral";
    p.kind = SensorKind::Multispectral;
    p.bands = {{444, 28}, {475, 32}, {531, 14}, {560, 27}, {650, 16},
               {668, 14}, {705, 10}, {717, 12}, {740, 18}, {842, 57}};
    return p;
}

// Full-range field spectrometer: 350-2500 nm at 1 nm steps, 2151 bands.
inline SensorProfile hyperspectral_profile() {
    SensorProfile p;
    p.name = "hyperspectral";
    p.kind = SensorKind::Hyperspectral;
    p.bands.reserve(2151);
    for (int nm = 350; nm <= 2500; ++nm) p.bands.push_back({static_cast<double>(nm), 1.0});
    return p;
}

inline SensorProfile thermal_profile() {
    SensorProfile p;
    p.name = "thermal";
    p.kind = SensorKind::Thermal;
    p.bands = {{10500, 6000}}; // single LWIR band
    return p;
}

// Boolean vegetation mask aligned with a raster.
struct PixelMask {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> kept; // row-major, 0/1

    std::size_t kept_count() const {
        std::size_t n = 0;
        for (auto k : kept) n += k ? 1 : 0;
        return n;
    }
};

// Per-plot mean reflectance, ordered as the profile's bands.
struct Spectrum {
    std::string sensor;
    std::vector<double> values;
};

enum class TimePoint { T1, T2, T3 };

inline std::string to_string(TimePoint tp) {
    switch (tp) {
        case TimePoint::T1: return "T1";
        case TimePoint::T2: return "T2";
        case TimePoint::T3: return "T3";
    }
    return "?";
}

inline TimePoint time_point_from_string(const std::string& s) {
    if (s == "T1") return TimePoint::T1;
    if (s == "T2") return TimePoint::T2;
    if (s == "T3") return TimePoint::T3;
    throw DataError("unknown time point: " + s);
}

inline int days_after_planting(TimePoint tp) {
    switch (tp) {
        case TimePoint::T1: return 46;
        case TimePoint::T2: return 65;
        case TimePoint::T3: return 81;
    }
    return 0;
}

// Rows = plots, columns = named features, row-major.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::size_t rows = 0;
    std::vector<double> data; // rows * names.size()

    std::size_t cols() const { return names.size(); }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols(); }

    void validate() const {
        if (data.size() != rows * names.size())
            throw InternalError("feature matrix storage does not match dimensions");
    }
};

inline FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::size_t>& cols) {
    FeatureMatrix out;
    out.rows = m.rows;
    out.names.reserve(cols.size());
    for (auto c : cols) out.names.push_back(m.names[c]);
    out.data.resize(m.rows * cols.size());
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t i = 0; i < cols.size(); ++i)
            out.data[r * cols.size() + i] = m.at(r, cols[i]);
    return out;
}

inline FeatureMatrix select_rows(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
    FeatureMatrix out;
    out.names = m.names;
    out.rows = rows.size();
    out.data.resize(rows.size() * m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out.data[i * m.cols() + c] = m.at(rows[i], c);
    return out;
}

} // namespace wiltscan
