#pragma once
// Exact arithmetic on top of GMP. Rational is mpq_class, which keeps itself
// canonical after every arithmetic operation; the helpers below make sure the
// values built by hand are canonical too.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace katetov {

using Nat = std::uint64_t;
using BigNat = mpz_class;
using Rational = mpq_class;

inline BigNat big(Nat n) {
    BigNat r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(Nat), 0, 0, &n);
    return r;
}

inline bool fits_nat(const BigNat& b) {
    return sgn(b) >= 0 && mpz_sizeinbase(b.get_mpz_t(), 2) <= 64;
}

inline Nat to_nat(const BigNat& b) {
    if (!fits_nat(b)) throw std::overflow_error("value does not fit in 64 bits");
    Nat out = 0;
    mpz_export(&out, nullptr, -1, sizeof(Nat), 0, 0, b.get_mpz_t());
    return out;
}

inline Rational make_rational(const BigNat& num, const BigNat& den) {
    if (sgn(den) == 0) throw std::domain_error("zero denominator");
    Rational q;
    mpz_set(q.get_num_mpz_t(), num.get_mpz_t());
    mpz_set(q.get_den_mpz_t(), den.get_mpz_t());
    q.canonicalize();
    return q;
}

inline Rational make_rational(Nat num, Nat den = 1) { return make_rational(big(num), big(den)); }

// 2^-e
inline Rational pow2_inv(Nat e) {
    BigNat d;
    mpz_ui_pow_ui(d.get_mpz_t(), 2, e);
    return make_rational(BigNat(1), d);
}

inline BigNat pow2(Nat e) {
    BigNat d;
    mpz_ui_pow_ui(d.get_mpz_t(), 2, e);
    return d;
}

inline Rational harmonic_term(Nat n) { return make_rational(BigNat(1), big(n) + 1); }

// "p/q" (or "p" when q == 1). Certificates store rationals in this form.
inline std::string to_string(const Rational& q) { return q.get_str(10); }
inline std::string to_string(const BigNat& n) { return n.get_str(10); }

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    auto digits_ok = [](const std::string& t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = (allow_sign && t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw std::invalid_argument("malformed rational: " + s);
    Rational q = make_rational(BigNat(num, 10), BigNat(den, 10));
    // Only canonical spellings are accepted, so a stored value has one textual form.
    if (to_string(q) != s) throw std::invalid_argument("rational not in lowest terms: " + s);
    return q;
}

inline BigNat parse_bignat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty natural");
    for (char c : s)
        if (c < '0' || c > '9') throw std::invalid_argument("malformed natural: " + s);
    if (s.size() > 1 && s[0] == '0') throw std::invalid_argument("leading zero in natural: " + s);
    return BigNat(s, 10);
}

} // namespace katetov
