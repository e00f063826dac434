#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "hbc/errors.hpp"

namespace hbc {

/// Exact nonnegative rational. All budget arithmetic goes through this type;
/// floating point would silently break floor/ceil boundaries.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) {
        require(d > 0 && n >= 0, ErrorKind::Input, "rational: expected p/q with p >= 0, q > 0");
        int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }

    /// floor(this * x) in exact integer arithmetic.
    int64_t floor_scale(int64_t x) const { return (num * x) / den; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text), 1);
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
        fail(ErrorKind::Input, "rational: cannot parse '" + text + "'");
    }
}

/// ceil(a * x / b) for a >= 0, b > 0.
inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

}  // namespace hbc
