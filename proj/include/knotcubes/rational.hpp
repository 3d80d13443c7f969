#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <string>

#include "knotcubes/errors.hpp"

namespace knotcubes {

// Exact rational scalar. All operad and cube arithmetic runs on these so the
// algebraic laws hold bit-exactly, not just within floating tolerance.
using Scalar = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Scalar& x) { return x.convert_to<double>(); }

// Doubles are binary rationals; the conversion is exact.
inline Scalar exact(double x) {
    if (!std::isfinite(x)) throw ValidationError("exact(): non-finite input");
    return Scalar(x);
}

// Accepts "p/q" or "p" with optional sign. Canonical form is automatic.
inline Scalar parse_rational(const std::string& s) {
    if (s.empty()) throw ValidationError("parse_rational: empty string");
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw ValidationError("parse_rational: bad character in '" + s + "'");
    }
    auto slash = s.find('/');
    if (slash == std::string::npos) return Scalar(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw ValidationError("parse_rational: zero denominator in '" + s + "'");
    return Scalar(num) / Scalar(den);
}

inline std::string format_rational(const Scalar& x) { return x.str(); }

inline Scalar rat(long long num, long long den) {
    if (den == 0) throw ValidationError("rat: zero denominator");
    return Scalar(num) / Scalar(den);
}

inline Scalar abs_rat(const Scalar& x) { return x < 0 ? Scalar(-x) : x; }

} // namespace knotcubes
