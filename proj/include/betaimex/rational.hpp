#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace betaimex {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Every finite double is a dyadic rational, so this conversion is exact.
inline Rational to_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("to_rational: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
    const auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    BigInt num(m);
    if (exp >= 0) return Rational(num << exp);
    BigInt den(1);
    den <<= -exp;
    return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace betaimex
