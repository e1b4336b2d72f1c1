#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asymvol {

// Exact arithmetic for coefficient generation. Double factorials and the
// eta recursion overflow int64 almost immediately, so everything exact runs
// on an arbitrary-precision rational and converts to double at the boundary.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
constexpr double to_double(double x) { return x; }

inline Rational rational_pow(Rational base, unsigned n) {
    Rational out = 1;
    while (n > 0) {
        if (n & 1u) out *= base;
        base *= base;
        n >>= 1u;
    }
    return out;
}

// Accepts "p/q", plain integers, and decimal literals ("-3", "7/6", "0.25").
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] {
        return std::invalid_argument("cannot parse rational: '" + std::string(text) + "'");
    };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw bad();

    const auto parse_int = [&](std::string_view part) -> BigInt {
        if (part.empty()) throw bad();
        std::size_t i = (part[0] == '+' || part[0] == '-') ? 1 : 0;
        if (i == part.size()) throw bad();
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) throw bad();
        return BigInt(std::string(part));
    };

    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const BigInt num = parse_int(std::string_view(s).substr(0, slash));
        const BigInt den = parse_int(std::string_view(s).substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const std::size_t frac_len = s.size() - dot - 1;
        if (frac_len == 0) throw bad();
        const BigInt num = parse_int(digits);
        BigInt den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(num, den);
    }
    return Rational(parse_int(s));
}

} // namespace asymvol
