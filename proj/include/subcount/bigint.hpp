#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace subcount {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Natural log of a positive BigInt, accurate to double precision even when
/// the value itself does not fit in a double.
inline double log_big(const BigInt &v) {
    if (v <= 0)
        throw std::invalid_argument("log_big: value must be positive");
    const auto bits = msb(v); // index of highest set bit
    if (bits <= 960) {
        return std::log(v.convert_to<double>());
    }
    // v = m * 2^shift with m in a safe double range
    const unsigned shift = static_cast<unsigned>(bits - 512);
    const BigInt m = v >> shift;
    return std::log(m.convert_to<double>()) + shift * std::log(2.0);
}

inline BigInt pow_big(const BigInt &base, std::uint64_t e) {
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline double rat_to_double(const BigRat &r) {
    return r.convert_to<double>();
}

} // namespace subcount
