#pragma once
// The two fixed enumerations: ordered pairs by diagonals, unordered pairs by
// the combinatorial number system.

#include "katetov/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace katetov {

namespace detail {
inline Nat checked_add(Nat a, Nat b) {
    Nat r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("natural overflow");
    return r;
}
inline Nat checked_mul(Nat a, Nat b) {
    Nat r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("natural overflow");
    return r;
}
} // namespace detail

// Diagonal n = i + b, walked with b increasing: (n,0), (n-1,1), ..., (0,n).
inline Nat pair_diag(Nat i, Nat b) {
    Nat n = detail::checked_add(i, b);
    Nat tri = (n % 2 == 0) ? detail::checked_mul(n / 2, n + 1) : detail::checked_mul(n, (n + 1) / 2);
    return detail::checked_add(tri, b);
}

inline std::pair<Nat, Nat> unpair_diag(Nat k) {
    // largest n with n(n+1)/2 <= k
    auto tri = [](Nat m) { return (m % 2 == 0) ? (m / 2) * (m + 1) : m * ((m + 1) / 2); };
    Nat n = static_cast<Nat>((std::sqrt(8.0L * k + 1) - 1) / 2);
    while (n > 0 && tri(n) > k) --n;
    while (tri(n + 1) <= k) ++n;
    Nat b = k - tri(n);
    return {n - b, b};
}

// {min, max} -> max(max-1)/2 + min
inline Nat code_unordered(Nat a, Nat b) {
    if (a == b) throw std::invalid_argument("code_unordered: pairs {a,a} are excluded");
    Nat lo = a < b ? a : b, hi = a < b ? b : a;
    Nat tri = (hi % 2 == 0) ? detail::checked_mul(hi / 2, hi - 1) : detail::checked_mul(hi, (hi - 1) / 2);
    return detail::checked_add(tri, lo);
}

inline std::pair<Nat, Nat> decode_unordered(Nat code) {
    // largest hi with hi(hi-1)/2 <= code
    auto tri = [](Nat m) { return (m % 2 == 0) ? (m / 2) * (m - 1) : m * ((m - 1) / 2); };
    Nat hi = static_cast<Nat>((1 + std::sqrt(1.0L + 8.0L * code)) / 2);
    if (hi < 1) hi = 1;
    while (hi > 1 && tri(hi) > code) --hi;
    while (tri(hi + 1) <= code) ++hi;
    return {code - tri(hi), hi};
}

} // namespace katetov
