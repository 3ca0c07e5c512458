#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace germcalc {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "p/q" with optional sign. Throws on malformed input.
inline Rational rat_from_string(const std::string& in) {
    std::string s = in;
    if (!s.empty() && s[0] == '+') s.erase(0, 1); // mpq rejects a leading '+'
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw std::domain_error("bad rational literal: " + in);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rational& r) { return r.get_str(); }

inline bool rat_is_int(const Rational& r) { return r.get_den() == 1; }

// Exact integer k-th root of a rational if one exists.
inline bool rat_kth_root(const Rational& r, unsigned long k, Rational& out) {
    if (k == 0) throw std::domain_error("0th root");
    if (k == 1) { out = r; return true; }
    if (r == 0) { out = 0; return true; }
    if (r < 0 && k % 2 == 0) return false;
    mpz_class num = r.get_num(), den = r.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return false;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k)) return false;
    out = Rational(neg ? -rn : rn, rd);
    out.canonicalize();
    return true;
}

} // namespace germcalc
