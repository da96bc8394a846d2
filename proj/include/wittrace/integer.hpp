#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace wittrace {

/// Arbitrary-precision integer. All arithmetic in this library is exact;
/// intermediate Smith-normal-form entries overflow machine words even on
/// small inputs.
using Int = boost::multiprecision::cpp_int;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int abs(const Int& a) { return boost::multiprecision::abs(a); }

/// Quotient with remainder of minimal absolute value: a = q*b + r, |r| <= |b|/2.
inline Int rounded_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (2 * abs(r) > abs(b)) q += (r < 0) == (b < 0) ? 1 : -1;
    return q;
}

/// Floor quotient (rounds toward negative infinity); b > 0 assumed.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && (a < 0) != (b < 0)) --q;
    return q;
}

/// Canonical residue in [0, m) for m > 0; identity for m == 0.
inline Int mod_reduce(const Int& a, const Int& m) {
    if (m == 0) return a;
    Int r = a % m;
    if (r < 0) r += abs(m);
    return r;
}

inline Int div_exact(const Int& a, const Int& b, const char* what = "exact division") {
    if (b == 0 || a % b != 0)
        throw std::runtime_error(std::string(what) + ": " + a.str() + " not divisible by " + b.str());
    return a / b;
}

}  // namespace wittrace
