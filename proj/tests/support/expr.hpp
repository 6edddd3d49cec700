#pragma once

// Tiny arithmetic-expression interpreter used as an independent oracle for
// the vegetation-index formulas. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := pow (('*'|'/') pow)*
//   pow    := unary ('^' unary)?
//   unary  := '-' unary | primary
//   primary:= number | 'sqrt' '(' expr ')' | 'log10' '(' expr ')'
//           | 'p' digits | '(' expr ')'
// The pNNN variables resolve through a wavelength-indexed callback.

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace testsupport {

class ExprParser {
public:
    using Lookup = std::function<double(double)>;

    static double eval(const std::string& text, const Lookup& lookup) {
        ExprParser p{text, 0, lookup};
        double v = p.expr();
        p.skip_ws();
        if (p.pos_ != text.size()) throw std::runtime_error("trailing input in: " + text);
        return v;
    }

private:
    const std::string& text_;
    std::size_t pos_;
    const Lookup& lookup_;

    ExprParser(const std::string& t, std::size_t p, const Lookup& l)
        : text_(t), pos_(p), lookup_(l) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    double expr() {
        double v = term();
        for (;;) {
            if (consume('+')) v += term();
            else if (consume('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = pow_();
        for (;;) {
            if (consume('*')) v *= pow_();
            else if (consume('/')) v /= pow_();
            else return v;
        }
    }

    double pow_() {
        double v = unary();
        if (consume('^')) return std::pow(v, unary());
        return v;
    }

    double unary() {
        if (consume('-')) return -unary();
        return primary();
    }

    double primary() {
        skip_ws();
        if (consume('(')) {
            double v = expr();
            if (!consume(')')) throw std::runtime_error("missing ')' in: " + text_);
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(peek()))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalnum(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string word = text_.substr(start, pos_ - start);
            if (word == "sqrt" || word == "log10") {
                if (!consume('(')) throw std::runtime_error("expected '(' after " + word);
                double v = expr();
                if (!consume(')')) throw std::runtime_error("missing ')' after " + word);
                return word == "sqrt" ? std::sqrt(v) : std::log10(v);
            }
            if (word.size() > 1 && word[0] == 'p')
                return lookup_(std::stod(word.substr(1)));
            throw std::runtime_error("unknown identifier '" + word + "' in: " + text_);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) throw std::runtime_error("parse error in: " + text_);
        return std::stod(text_.substr(start, pos_ - start));
    }
};

} // namespace testsupport
