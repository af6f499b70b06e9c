#pragma once

#include <cstdint>
#include <vector>

#include "troppadic/series.hpp"

namespace troppadic {

// Precision p^N and total-degree budget D: identities hold modulo
// (p^N, monomials of total degree >= D).
struct Budget {
    long precision = 12;
    long degree = 10;
};

struct WeierstrassDivision {
    long order = 0;
    RestrictedSeries Q;
    std::vector<RestrictedSeries> A;  // A[j] in the first n-1 variables
};

struct WeierstrassPreparation {
    long order = 0;
    std::vector<RestrictedSeries> A;  // distinguished polynomial Y^d + sum A_j Y^j
    RestrictedSeries U;               // unit
};

namespace detail {

// Arithmetic modulo m < 2^62 in machine words.
struct ModWord {
    using T = std::uint64_t;
    T m;
    explicit ModWord(const Integer& mod) : m(mod.get_ui()) {}
    T from(const Integer& z) const {
        Integer r;
        mpz_mod(r.get_mpz_t(), z.get_mpz_t(), Integer(static_cast<unsigned long>(m)).get_mpz_t());
        return r.get_ui();
    }
    Integer to(T x) const { return Integer(static_cast<unsigned long>(x)); }
    T add(T a, T b) const { return (a + b) % m; }
    T sub(T a, T b) const { return (a + m - b) % m; }
    T mul(T a, T b) const { return static_cast<T>((static_cast<unsigned __int128>(a) * b) % m); }
    T inv(T a) const {
        Integer r;
        Integer mm(static_cast<unsigned long>(m));
        if (mpz_invert(r.get_mpz_t(), Integer(static_cast<unsigned long>(a)).get_mpz_t(), mm.get_mpz_t()) == 0)
            throw NotRegular("leading coefficient is not a unit");
        return r.get_ui();
    }
    static T zero() { return 0; }
    static bool is_zero(T a) { return a == 0; }
};

// Arithmetic modulo an arbitrary modulus with GMP integers.
struct ModBig {
    using T = Integer;
    Integer m;
    explicit ModBig(const Integer& mod) : m(mod) {}
    T from(const Integer& z) const {
        Integer r;
        mpz_mod(r.get_mpz_t(), z.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    Integer to(const T& x) const { return x; }
    T add(const T& a, const T& b) const {
        Integer r = a + b;
        if (r >= m) r -= m;
        return r;
    }
    T sub(const T& a, const T& b) const {
        Integer r = a - b;
        if (r < 0) r += m;
        return r;
    }
    T mul(const T& a, const T& b) const {
        Integer r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    T inv(const T& a) const {
        Integer r;
        if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
            throw NotRegular("leading coefficient is not a unit");
        return r;
    }
    static T zero() { return 0; }
    static bool is_zero(const T& a) { return a == 0; }
};

// Elements of (Z/p^N)[X']/(X')^D [[Y]] truncated in Y, stored densely as
// coef[a * W + j] for X'-monomial index a and Y-degree j < W.
template <class Mod>
class DenseRing {
public:
    using T = typename Mod::T;
    using Elem = std::vector<T>;

    DenseRing(const Mod& mod, int mvars, long xdeg, long width) : mod_(mod), W_(width) {
        if (xdeg > 0) {
            if (mvars == 0) mons_.push_back(Exponent{});
            else for_each_exponent(mvars, 0, xdeg - 1, [&](const Exponent& e) { mons_.push_back(e); });
        }
        for (std::size_t a = 0; a < mons_.size(); ++a) index_[mons_[a]] = static_cast<long>(a);
        by_target_.resize(mons_.size());
        for (std::size_t a = 0; a < mons_.size(); ++a)
            for (std::size_t b = 0; b < mons_.size(); ++b) {
                auto it = index_.find(mons_[a] + mons_[b]);
                if (it == index_.end()) continue;
                Triple t{static_cast<long>(a), static_cast<long>(b), it->second};
                pairs_.push_back(t);
                by_target_[it->second].push_back(t);
            }
    }

    long width() const { return W_; }
    std::size_t nmons() const { return mons_.size(); }
    const Exponent& mon(std::size_t a) const { return mons_[a]; }
    long index(const Exponent& e) const {
        auto it = index_.find(e);
        return it == index_.end() ? -1 : it->second;
    }
    Elem zero() const { return Elem(mons_.size() * W_, Mod::zero()); }
    T& at(Elem& x, long a, long j) const { return x[a * W_ + j]; }
    const T& at(const Elem& x, long a, long j) const { return x[a * W_ + j]; }

    // Product truncated to Y-degree < lim.
    Elem mul(const Elem& x, const Elem& y, long lim) const {
        Elem z = zero();
        for (const auto& [a, b, c] : pairs_)
            for (long i = 0; i < lim; ++i) {
                const T& xi = at(x, a, i);
                if (Mod::is_zero(xi)) continue;
                for (long j = 0; i + j < lim; ++j) {
                    const T& yj = at(y, b, j);
                    if (Mod::is_zero(yj)) continue;
                    at(z, c, i + j) = mod_.add(at(z, c, i + j), mod_.mul(xi, yj));
                }
            }
        return z;
    }

    // Inverse of an element with unit constant term, truncated to Y-degree < lim.
    Elem inverse(const Elem& u, long lim) const {
        Elem v = zero();
        T c0 = mod_.inv(at(u, 0, 0));
        for (long j = 0; j < lim; ++j)
            for (std::size_t c = 0; c < mons_.size(); ++c) {
                T acc = Mod::zero();
                for (const auto& [a, b, cc] : by_target_[c]) {
                    for (long i = 0; i <= j; ++i) {
                        if (a == 0 && i == 0) continue;
                        const T& ua = at(u, a, i);
                        if (Mod::is_zero(ua)) continue;
                        acc = mod_.add(acc, mod_.mul(ua, at(v, b, j - i)));
                    }
                }
                T target = (c == 0 && j == 0) ? T(1) : Mod::zero();
                at(v, static_cast<long>(c), j) = mod_.mul(c0, mod_.sub(target, acc));
            }
        return v;
    }

    Elem sub(const Elem& x, const Elem& y) const {
        Elem z = zero();
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = mod_.sub(x[k], y[k]);
        return z;
    }

    // Y-degree >= d part divided by Y^d, truncated to Y-degree < lim.
    Elem quo(const Elem& x, long d, long lim) const {
        Elem z = zero();
        for (std::size_t a = 0; a < mons_.size(); ++a)
            for (long j = 0; j < lim && j + d < W_; ++j) at(z, a, j) = at(x, a, j + d);
        return z;
    }

    // Y-degree < d part.
    Elem rem(const Elem& x, long d) const {
        Elem z = zero();
        for (std::size_t a = 0; a < mons_.size(); ++a)
            for (long j = 0; j < d && j < W_; ++j) at(z, a, j) = at(x, a, j);
        return z;
    }

    bool equal(const Elem& x, const Elem& y, long lim) const {
        for (std::size_t a = 0; a < mons_.size(); ++a)
            for (long j = 0; j < lim; ++j)
                if (at(x, a, j) != at(y, a, j)) return false;
        return true;
    }

    const Mod& mod() const { return mod_; }

private:
    struct Triple {
        long a, b, c;
    };
    Mod mod_;
    long W_;
    std::vector<Exponent> mons_;
    std::map<Exponent, long> index_;
    std::vector<Triple> pairs_;
    std::vector<std::vector<Triple>> by_target_;
};

inline void check_budget(const Budget& b) {
    if (b.precision < 1 || b.degree < 1) throw InputError("budgets must be positive");
}

// Reads the coefficients of f into the dense ring; everything not certified
// to vanish modulo p^N must be stored.
template <class Mod>
typename DenseRing<Mod>::Elem load(const DenseRing<Mod>& R, const RestrictedSeries& f, long N) {
    int n = f.nvars();
    auto x = R.zero();
    if (!f.is_polynomial()) {
        ValuationQ beyond = f.tail().at(f.cutoff() + 1);
        if (f.tail().slope < 0 || beyond < ValuationQ(N))
            throw BudgetExceeded("tail bound does not certify precision p^" + std::to_string(N) +
                                 " beyond degree " + std::to_string(f.cutoff()));
    }
    if (f.noise() < ValuationQ(N))
        throw BudgetExceeded("input coefficients are known only modulo p^" + f.noise().str());
    for (const auto& [e, c] : f.terms()) {
        Exponent xe(e.begin(), e.end() - 1);
        long a = R.index(xe);
        long j = e[n - 1];
        if (a < 0 || j >= R.width()) continue;
        if (c.valuation_lower_bound() < ValuationQ(0)) throw InputError("coefficient is not in Z_p");
        R.at(x, a, j) = R.mod().from(c.residue(N));
    }
    return x;
}

template <class Mod>
RestrictedSeries unload(const DenseRing<Mod>& R, const typename DenseRing<Mod>::Elem& x, long p, int n,
                        long N, long D, long jlo, long jhi, bool with_y) {
    int nv = with_y ? n : n - 1;
    RestrictedSeries out(p, nv);
    TailBound t;
    t.cutoff = std::max(0L, D - 1 - (with_y ? 0 : jlo));
    t.slope = 0;
    t.offset = ValuationQ(0);
    out.set_tail(t);
    for (std::size_t a = 0; a < R.nmons(); ++a)
        for (long j = jlo; j < jhi; ++j) {
            const auto& v = R.at(x, static_cast<long>(a), j);
            if (Mod::is_zero(v)) continue;
            Exponent e = R.mon(a);
            long deg = degree(e) + j;
            if (deg >= D) continue;
            if (with_y) e.push_back(static_cast<int>(j));
            out.set_term(e, PadicScaled::from_integer(p, R.mod().to(v)).capped(ValuationQ(N)));
        }
    out.set_noise(ValuationQ(N));
    return out;
}

template <class Mod>
WeierstrassDivision divide_impl(const Mod& mod, const RestrictedSeries& f, const RestrictedSeries& g,
                                const Budget& budget, long d) {
    int n = f.nvars();
    long p = f.prime();
    long N = budget.precision, D = budget.degree;
    long K = N + D - 1;
    long base = std::max(D, d);
    long W0 = base + d * K;
    DenseRing<Mod> R(mod, n - 1, D, W0 + d);
    auto F = load(R, f, N);
    auto G = load(R, g, N);
    auto qf = R.quo(F, d, W0);
    auto rf = R.rem(F, d);
    auto qinv = R.inverse(qf, W0);
    auto E = R.mul(rf, qinv, W0);
    auto Qp = R.zero();
    long W = W0;
    for (long k = 0; k < K; ++k) {
        long Wn = W - d;
        auto T = R.sub(G, R.mul(Qp, E, W));
        auto next = R.quo(T, d, Wn);
        bool fixed = R.equal(next, Qp, Wn);
        Qp = next;
        W = Wn;
        if (fixed) break;
    }
    auto T = R.sub(G, R.mul(Qp, E, base));
    auto Rm = R.rem(T, d);
    auto Q = R.mul(Qp, qinv, base);
    WeierstrassDivision out;
    out.order = d;
    out.Q = unload(R, Q, p, n, N, D, 0, base, true);
    for (long j = 0; j < d; ++j) {
        RestrictedSeries a = unload(R, Rm, p, n, N, D, j, j + 1, false);
        out.A.push_back(a);
    }
    return out;
}

}  // namespace detail

// g = Q f + sum_{j<d} A_j(X') Y^j modulo (p^N, total degree >= D), Y the
// last variable, f regular of order d in Y.
inline WeierstrassDivision weierstrass_divide(const RestrictedSeries& f, const RestrictedSeries& g,
                                              const Budget& budget) {
    detail::check_compatible(f, g);
    detail::check_budget(budget);
    long d = regular_order(f);
    if (f.gauss_lower_bound() < ValuationQ(0)) throw NotRegular("divisor is not in Z_p[[X]]");
    Integer mod = ipow(f.prime(), static_cast<unsigned long>(budget.precision));
    if (mod < (Integer(1) << 62)) return detail::divide_impl(detail::ModWord(mod), f, g, budget, d);
    return detail::divide_impl(detail::ModBig(mod), f, g, budget, d);
}

// A_j(X') * Y^j as a series in all n variables.
inline RestrictedSeries times_last_power(const RestrictedSeries& a, long j) {
    int n = a.nvars() + 1;
    RestrictedSeries out(a.prime(), n);
    TailBound t = a.tail();
    t.cutoff += j;
    if (!t.polynomial()) t.offset = ValuationQ(t.offset.value() - t.slope * j);
    out.set_tail(t);
    for (const auto& [e, c] : a.terms()) {
        Exponent e2 = e;
        e2.push_back(static_cast<int>(j));
        out.set_term(e2, c);
    }
    out.set_noise(a.noise());
    return out;
}

// Minimum certified valuation of g - Q f - sum A_j Y^j over total degrees < D.
inline ValuationQ weierstrass_residue(const RestrictedSeries& f, const RestrictedSeries& g,
                                      const WeierstrassDivision& w, long D) {
    RestrictedSeries r = g - w.Q * f;
    for (std::size_t j = 0; j < w.A.size(); ++j) r = r - times_last_power(w.A[j], static_cast<long>(j));
    ValuationQ out = ValuationQ::infinity();
    for_each_exponent(f.nvars(), 0, D - 1, [&](const Exponent& e) {
        out = vmin(out, r.coefficient(e).valuation_lower_bound());
    });
    return out;
}

// f = (Y^d + sum A_j Y^j) * U modulo the budget.
inline WeierstrassPreparation weierstrass_prepare(const RestrictedSeries& f, const Budget& budget) {
    long d = regular_order(f);
    int n = f.nvars();
    RestrictedSeries yd = RestrictedSeries::polynomial_z(f.prime(), n, {{unit_exponent(n, n - 1, static_cast<int>(d)), 1}});
    WeierstrassDivision w = weierstrass_divide(f, yd, budget);
    WeierstrassPreparation out;
    out.order = d;
    for (auto& a : w.A) out.A.push_back(PadicScaled::from_long(f.prime(), -1) * a);
    // U = Q^{-1}: invert the unit Q in the dense ring.
    long N = budget.precision, D = budget.degree;
    Integer mod = ipow(f.prime(), static_cast<unsigned long>(N));
    auto invert = [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        detail::DenseRing<M> R(m, n - 1, D, D);
        RestrictedSeries q = w.Q;
        q.set_noise(ValuationQ::infinity());
        q.set_tail(TailBound{q.cutoff(), 0, ValuationQ::infinity()});
        auto Qd = detail::load(R, q, N);
        auto Ud = R.inverse(Qd, D);
        return detail::unload(R, Ud, f.prime(), n, N, D, 0, D, true);
    };
    if (mod < (Integer(1) << 62)) out.U = invert(detail::ModWord(mod));
    else out.U = invert(detail::ModBig(mod));
    return out;
}

// Y^d + sum A_j Y^j.
inline RestrictedSeries distinguished_polynomial(const WeierstrassPreparation& w, long p, int n) {
    RestrictedSeries out = RestrictedSeries::polynomial_z(p, n, {{unit_exponent(n, n - 1, static_cast<int>(w.order)), 1}});
    for (std::size_t j = 0; j < w.A.size(); ++j) out = out + times_last_power(w.A[j], static_cast<long>(j));
    return out;
}

}  // namespace troppadic
