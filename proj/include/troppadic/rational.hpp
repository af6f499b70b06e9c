#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "troppadic/errors.hpp"

namespace troppadic {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_q(const Rational& r) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

inline Integer ceil_q(const Rational& r) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw Error("integer does not fit in a machine word: " + z.get_str());
    return z.get_si();
}

inline Integer ipow(long base, unsigned long e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), e);
    return out;
}

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Rational qpow(const Rational& base, long e) {
    Rational out(1);
    Rational b = base;
    if (e < 0) {
        if (b == 0) throw DivisionByZero();
        b = 1 / b;
        e = -e;
    }
    for (long i = 0; i < e; ++i) out *= b;
    return out;
}

// Exponent of p in a nonzero integer.
inline long padic_order(const Integer& z, long p) {
    if (z == 0) throw Error("padic_order of zero");
    Integer t = z;
    Integer pp = p;
    long k = 0;
    while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t());
        ++k;
    }
    return k;
}

inline long padic_order(const Rational& q, long p) {
    return padic_order(Integer(q.get_num()), p) - padic_order(Integer(q.get_den()), p);
}

// Residue of a rational with p-free denominator modulo m = p^N.
inline Integer residue_mod(const Rational& q, const Integer& modulus) {
    Integer den_inv;
    Integer den = q.get_den();
    if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw Error("denominator not invertible modulo " + modulus.get_str());
    Integer r = Integer(q.get_num()) * den_inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw InputError("empty rational literal");
    Rational q;
    if (q.set_str(text, 10) != 0) throw InputError("bad rational literal '" + text + "'");
    if (q.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

inline Integer parse_integer(const std::string& text) {
    Integer z;
    if (text.empty() || z.set_str(text, 10) != 0) throw InputError("bad integer literal '" + text + "'");
    return z;
}

inline Rational factorial(long n) {
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(out);
}

inline Integer binomial(long n, long k) {
    Integer out;
    if (k < 0 || k > n) return 0;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

// Falling factorial n (n-1) ... (n-k+1).
inline Integer falling_factorial(long n, long k) {
    Integer out = 1;
    for (long i = 0; i < k; ++i) out *= (n - i);
    return out;
}

using QVector = std::vector<Rational>;

inline Rational dot(const QVector& a, const QVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline QVector operator+(const QVector& a, const QVector& b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline QVector operator-(const QVector& a, const QVector& b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline QVector operator*(const Rational& s, const QVector& a) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

inline bool is_zero(const QVector& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

inline std::strong_ordering compare(const QVector& a, const QVector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return std::strong_ordering::less;
        if (a[i] > b[i]) return std::strong_ordering::greater;
    }
    return a.size() <=> b.size();
}

struct QVectorLess {
    bool operator()(const QVector& a, const QVector& b) const { return compare(a, b) < 0; }
};

// Scale a direction to its primitive integer representative (gcd 1).
inline QVector primitive(const QVector& v) {
    Integer l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> ints;
    Integer g = 0;
    for (const auto& x : v) {
        Integer z = Integer(x * l);
        ints.push_back(z);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    }
    QVector out(v.size());
    if (g == 0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
    return out;
}

inline std::string to_string(const QVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].get_str();
    }
    return s + ")";
}

}  // namespace troppadic
