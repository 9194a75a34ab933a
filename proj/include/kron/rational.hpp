#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace kron {

// Exact arithmetic used throughout: arbitrary-precision integers for
// character sums and dimensions, rationals for normalized diagrams and
// polytope geometry.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int factorial(long long n) {
    Int f = 1;
    for (long long i = 2; i <= n; ++i)
        f *= i;
    return f;
}

inline double to_double(const Int& v) { return v.convert_to<double>(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

/// Canonical text form "p/q" with the fraction reduced and q > 0.
inline std::string to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string_view::npos)
            return Rational(Int(std::string(s)));
        Int num(std::string(s.substr(0, slash)));
        Int den(std::string(s.substr(slash + 1)));
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid rational: '" + std::string(s) + "'");
    }
}

} // namespace kron
