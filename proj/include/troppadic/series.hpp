#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "troppadic/padic.hpp"

namespace troppadic {

using Exponent = std::vector<int>;

inline long degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0L); }

inline Exponent unit_exponent(int n, int i, int k = 1) {
    Exponent e(n, 0);
    e[i] = k;
    return e;
}

inline Exponent operator+(const Exponent& a, const Exponent& b) {
    Exponent c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

inline bool divides(const Exponent& a, const Exponent& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline QVector to_qvector(const Exponent& e) {
    QVector v(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) v[i] = e[i];
    return v;
}

// Calls fn on every exponent in n variables with lo <= |I| <= hi.
inline void for_each_exponent(int n, long lo, long hi, const std::function<void(const Exponent&)>& fn) {
    Exponent e(n, 0);
    std::function<void(int, long)> rec = [&](int i, long left) {
        if (i == n - 1) {
            e[i] = static_cast<int>(left);
            fn(e);
            return;
        }
        for (long k = left; k >= 0; --k) {
            e[i] = static_cast<int>(k);
            rec(i + 1, left - k);
        }
    };
    if (n == 0) {
        if (lo <= 0 && 0 <= hi) fn(e);
        return;
    }
    for (long d = std::max(0L, lo); d <= hi; ++d) rec(0, d);
}

// Certifies v(a_I) >= slope*|I| + offset for every |I| > cutoff; an infinite
// offset means there are no terms beyond the cutoff (a polynomial).
struct TailBound {
    long cutoff = 0;
    Rational slope = 1;
    ValuationQ offset = ValuationQ::infinity();

    bool polynomial() const { return offset.is_infinite(); }
    ValuationQ at(long deg) const {
        if (polynomial()) return ValuationQ::infinity();
        return ValuationQ(slope * deg + offset.value());
    }
    friend bool operator==(const TailBound& a, const TailBound& b) {
        return a.cutoff == b.cutoff && a.slope == b.slope && a.offset == b.offset;
    }
};

// A lower bound r_i of the valuation domain [r_i, inf); nullopt is -inf.
using DomainBound = std::optional<Rational>;

// A power series over Z_p (or Q_p) stored as finitely many coefficients up to
// total degree tail.cutoff plus a certified linear tail bound. Entries absent
// from the map with |I| <= cutoff are exact zeros, except that every stored or
// absent coefficient additionally carries an unknown error of valuation >=
// noise (infinite for exactly known series).
class RestrictedSeries {
public:
    RestrictedSeries() = default;
    RestrictedSeries(long p, int n) : p_(p), n_(n), domain_(n, Rational(0)) {
        PadicScaled::zero(p);  // validates p
    }

    static RestrictedSeries polynomial(long p, int n, const std::vector<std::pair<Exponent, PadicScaled>>& terms) {
        RestrictedSeries f(p, n);
        long d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, degree(e));
        f.tail_.cutoff = d;
        for (const auto& [e, c] : terms) f.add_to_term(e, c);
        return f;
    }

    static RestrictedSeries polynomial_z(long p, int n, const std::vector<std::pair<Exponent, long>>& terms) {
        std::vector<std::pair<Exponent, PadicScaled>> t;
        for (const auto& [e, c] : terms) t.emplace_back(e, PadicScaled::from_long(p, c));
        return polynomial(p, n, t);
    }

    static RestrictedSeries constant(long p, int n, const PadicScaled& c) {
        return polynomial(p, n, {{Exponent(n, 0), c}});
    }

    long prime() const { return p_; }
    int nvars() const { return n_; }
    const TailBound& tail() const { return tail_; }
    long cutoff() const { return tail_.cutoff; }
    const std::vector<DomainBound>& domain() const { return domain_; }
    const ValuationQ& noise() const { return noise_; }
    const std::map<Exponent, PadicScaled>& terms() const { return terms_; }
    bool is_polynomial() const { return tail_.polynomial(); }

    void set_tail(const TailBound& t) {
        for (const auto& [e, c] : terms_)
            if (degree(e) > t.cutoff) throw InputError("stored term beyond the tail cutoff");
        tail_ = t;
        check_domain();
    }
    void set_domain(const std::vector<DomainBound>& d) {
        if (static_cast<int>(d.size()) != n_) throw InputError("domain dimension mismatch");
        domain_ = d;
        check_domain();
    }
    void set_noise(const ValuationQ& k) { noise_ = k; }

    void set_term(const Exponent& e, const PadicScaled& c) {
        check_exponent(e);
        if (c.is_zero()) terms_.erase(e);
        else terms_[e] = c;
    }
    void add_to_term(const Exponent& e, const PadicScaled& c) {
        check_exponent(e);
        auto it = terms_.find(e);
        if (it == terms_.end()) set_term(e, c);
        else set_term(e, it->second + c);
    }

    // Coefficient with all certified error attached.
    PadicScaled coefficient(const Exponent& e) const {
        if (static_cast<int>(e.size()) != n_) throw InputError("exponent length mismatch");
        long d = degree(e);
        if (d > tail_.cutoff) {
            if (tail_.polynomial()) return PadicScaled::zero(p_);
            return PadicScaled::indeterminate(p_, tail_.at(d).value());
        }
        auto it = terms_.find(e);
        PadicScaled c = it == terms_.end() ? PadicScaled::zero(p_) : it->second;
        return c.capped(noise_);
    }

    // Lower bound of min_I v(a_I) - slope*|I| over all I (stored, noise, tail).
    ValuationQ linear_floor(const Rational& slope) const {
        ValuationQ out = ValuationQ::infinity();
        for (const auto& [e, c] : terms_) out = vmin(out, c.valuation_lower_bound() - slope * degree(e));
        if (!noise_.is_infinite()) out = vmin(out, noise_ - slope * (slope >= 0 ? tail_.cutoff : 0));
        if (!tail_.polynomial()) {
            if (slope > tail_.slope) throw Error("linear_floor slope exceeds the tail slope");
            out = vmin(out, ValuationQ((tail_.slope - slope) * (tail_.cutoff + 1) + tail_.offset.value()));
        }
        return out;
    }

    // Certified lower bound for the Gauss valuation min_I v(a_I).
    ValuationQ gauss_lower_bound() const {
        if (!tail_.polynomial() && tail_.slope < 0) throw Error("tail does not bound the Gauss valuation");
        return linear_floor(0);
    }

    // True when every coefficient is certified exactly zero.
    bool is_exact_zero() const { return terms_.empty() && tail_.polynomial() && noise_.is_infinite(); }

    long max_stored_degree() const {
        long d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, degree(e));
        return d;
    }

    // Raises the cutoff, materializing the tail bound as explicit errors.
    RestrictedSeries extended(long new_cutoff) const {
        if (new_cutoff <= tail_.cutoff) return *this;
        RestrictedSeries out = *this;
        if (!tail_.polynomial()) {
            for_each_exponent(n_, tail_.cutoff + 1, new_cutoff, [&](const Exponent& e) {
                out.terms_[e] = PadicScaled::indeterminate(p_, tail_.at(degree(e)).value());
            });
        }
        out.tail_.cutoff = new_cutoff;
        return out;
    }

    // Identity of stored data (bit-exact round trips).
    friend bool operator==(const RestrictedSeries& a, const RestrictedSeries& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.terms_ == b.terms_ && a.tail_ == b.tail_ &&
               a.domain_ == b.domain_ && a.noise_ == b.noise_;
    }

private:
    void check_exponent(const Exponent& e) const {
        if (static_cast<int>(e.size()) != n_) throw InputError("exponent length mismatch");
        for (int k : e)
            if (k < 0) throw InputError("negative exponent");
        if (degree(e) > tail_.cutoff) throw InputError("term of degree " + std::to_string(degree(e)) +
                                                       " beyond cutoff " + std::to_string(tail_.cutoff));
    }
    void check_domain() const {
        if (tail_.polynomial()) return;
        for (const auto& r : domain_)
            if (!r) throw InputError("an unbounded domain requires a polynomial");
    }

    long p_ = 2;
    int n_ = 0;
    std::map<Exponent, PadicScaled> terms_;
    TailBound tail_;
    std::vector<DomainBound> domain_;
    ValuationQ noise_ = ValuationQ::infinity();
};

namespace detail {

inline void check_compatible(const RestrictedSeries& f, const RestrictedSeries& g) {
    if (f.prime() != g.prime()) throw InputError("series over different primes");
    if (f.nvars() != g.nvars()) throw InputError("series in different numbers of variables");
}

// Intersection of two valuation domains.
inline std::vector<DomainBound> meet(const std::vector<DomainBound>& a, const std::vector<DomainBound>& b) {
    std::vector<DomainBound> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) out[i] = b[i];
        else if (!b[i]) out[i] = a[i];
        else out[i] = *a[i] > *b[i] ? *a[i] : *b[i];
    }
    return out;
}

inline Rational min_slope(const RestrictedSeries& f, const RestrictedSeries& g) {
    if (f.is_polynomial()) return g.tail().slope;
    if (g.is_polynomial()) return f.tail().slope;
    return std::min(f.tail().slope, g.tail().slope);
}

}  // namespace detail

inline RestrictedSeries operator-(const RestrictedSeries& f) {
    RestrictedSeries out = f;
    for (const auto& [e, c] : f.terms()) out.set_term(e, -c);
    return out;
}

inline RestrictedSeries operator+(const RestrictedSeries& f0, const RestrictedSeries& g0) {
    detail::check_compatible(f0, g0);
    long cut = std::max(f0.cutoff(), g0.cutoff());
    RestrictedSeries f = f0.extended(cut), g = g0.extended(cut);
    RestrictedSeries out(f.prime(), f.nvars());
    TailBound t;
    t.cutoff = cut;
    if (f.is_polynomial() && g.is_polynomial()) {
        t.offset = ValuationQ::infinity();
    } else {
        t.slope = detail::min_slope(f, g);
        ValuationQ b = ValuationQ::infinity();
        for (const RestrictedSeries* h : {&f, &g})
            if (!h->is_polynomial())
                b = vmin(b, ValuationQ((h->tail().slope - t.slope) * (cut + 1) + h->tail().offset.value()));
        t.offset = b;
    }
    out.set_tail(t);
    out.set_domain(detail::meet(f.domain(), g.domain()));
    for (const auto& [e, c] : f.terms()) out.add_to_term(e, c);
    for (const auto& [e, c] : g.terms()) out.add_to_term(e, c);
    out.set_noise(vmin(f.noise(), g.noise()));
    return out;
}

inline RestrictedSeries operator-(const RestrictedSeries& f, const RestrictedSeries& g) { return f + (-g); }

inline RestrictedSeries operator*(const PadicScaled& s, const RestrictedSeries& f) {
    if (s.prime() != f.prime()) throw InputError("scalar over a different prime");
    RestrictedSeries out(f.prime(), f.nvars());
    TailBound t = f.tail();
    if (s.is_zero()) {
        t.offset = ValuationQ::infinity();
        out.set_tail(t);
        out.set_domain(f.domain());
        return out;
    }
    ValuationQ vs = s.valuation_lower_bound();
    if (!t.polynomial()) t.offset = t.offset + vs;
    out.set_tail(t);
    out.set_domain(f.domain());
    for (const auto& [e, c] : f.terms()) out.set_term(e, s * c);
    if (!f.noise().is_infinite()) out.set_noise(f.noise() + vs);
    if (s.is_indeterminate()) {
        // Every coefficient becomes O(p^(v_s + v(a_I))).
        ValuationQ floor = f.gauss_lower_bound() + vs;
        out.set_noise(vmin(out.noise(), floor));
    }
    return out;
}

inline RestrictedSeries operator*(const RestrictedSeries& f, const RestrictedSeries& g) {
    detail::check_compatible(f, g);
    long p = f.prime();
    RestrictedSeries out(p, f.nvars());
    TailBound t;
    if (f.is_polynomial() && g.is_polynomial()) {
        t.cutoff = f.cutoff() + g.cutoff();
        t.offset = ValuationQ::infinity();
    } else {
        if (f.is_polynomial()) t.cutoff = g.cutoff();
        else if (g.is_polynomial()) t.cutoff = f.cutoff();
        else t.cutoff = std::min(f.cutoff(), g.cutoff());
        t.slope = detail::min_slope(f, g);
        t.offset = f.linear_floor(t.slope) + g.linear_floor(t.slope);
    }
    out.set_tail(t);
    out.set_domain(detail::meet(f.domain(), g.domain()));
    std::map<Exponent, PadicScaled> acc;
    for (const auto& [e1, c1] : f.terms()) {
        if (degree(e1) > t.cutoff) continue;
        for (const auto& [e2, c2] : g.terms()) {
            Exponent e = e1 + e2;
            if (degree(e) > t.cutoff) continue;
            auto it = acc.find(e);
            if (it == acc.end()) acc.emplace(e, c1 * c2);
            else it->second += c1 * c2;
        }
    }
    for (const auto& [e, c] : acc) out.set_term(e, c);
    ValuationQ noise = ValuationQ::infinity();
    if (!f.noise().is_infinite()) noise = vmin(noise, f.noise() + g.linear_floor(0));
    if (!g.noise().is_infinite()) noise = vmin(noise, g.noise() + f.linear_floor(0));
    out.set_noise(noise);
    return out;
}

// Formal k-th partial derivative in variable i.
inline RestrictedSeries derivative(const RestrictedSeries& f, int i, long k) {
    if (k < 0) throw InputError("negative derivative order");
    if (i < 0 || i >= f.nvars()) throw InputError("derivative variable out of range");
    RestrictedSeries out(f.prime(), f.nvars());
    TailBound t = f.tail();
    t.cutoff = std::max(0L, f.cutoff() - k);
    if (!t.polynomial()) t.offset = ValuationQ(t.offset.value() - k * t.slope);
    out.set_tail(t);
    out.set_domain(f.domain());
    for (const auto& [e, c] : f.terms()) {
        if (e[i] < k) continue;
        Exponent e2 = e;
        e2[i] -= static_cast<int>(k);
        out.set_term(e2, PadicScaled::from_integer(f.prime(), falling_factorial(e[i], k)) * c);
    }
    if (f.cutoff() - k < 0 && !f.tail().polynomial())
        out.set_term(Exponent(f.nvars(), 0), PadicScaled::indeterminate(f.prime(), t.offset.value()));
    out.set_noise(f.noise());
    return out;
}

// Sum of the stored terms at x plus the certified tail error.
inline PadicScaled evaluate(const RestrictedSeries& f, const std::vector<PadicScaled>& x) {
    long p = f.prime();
    if (static_cast<int>(x.size()) != f.nvars()) throw InputError("point dimension mismatch");
    std::optional<Rational> minv;
    for (int i = 0; i < f.nvars(); ++i) {
        if (x[i].prime() != p) throw InputError("point over a different prime");
        ValuationQ v = x[i].valuation_lower_bound();
        const auto& r = f.domain()[i];
        if (r && v < ValuationQ(*r))
            throw DomainViolation("coordinate " + std::to_string(i) + " outside the domain");
        if (!v.is_infinite() && (!minv || v.value() < *minv)) minv = v.value();
    }
    PadicScaled sum = PadicScaled::zero(p);
    for (const auto& [e, c] : f.terms()) {
        PadicScaled term = c;
        for (int i = 0; i < f.nvars(); ++i)
            if (e[i] > 0) term *= x[i].pow(e[i]);
        sum += term;
    }
    if (!f.noise().is_infinite()) {
        Rational m = minv && *minv < 0 ? *minv : Rational(0);
        sum = sum.capped(f.noise() + ValuationQ(m * f.cutoff()));
    }
    if (!f.is_polynomial()) {
        if (!minv) return sum;  // every monomial beyond the cutoff vanishes
        Rational rate = f.tail().slope + *minv;
        if (rate <= 0) throw DomainViolation("tail bound does not converge at the point");
        sum = sum.capped(ValuationQ(rate * (f.cutoff() + 1) + f.tail().offset.value()));
    }
    return sum;
}

// X_i -> X_i - c.
inline RestrictedSeries substitute_shift(const RestrictedSeries& f, int i, const PadicScaled& c) {
    long p = f.prime();
    if (i < 0 || i >= f.nvars()) throw InputError("variable out of range");
    ValuationQ vc = c.valuation_lower_bound();
    if (!f.is_polynomial()) {
        if (vc < ValuationQ(0) || (f.domain()[i] && vc < ValuationQ(*f.domain()[i])))
            throw DomainViolation("shift leaves the convergence domain");
    }
    RestrictedSeries out(p, f.nvars());
    TailBound t = f.tail();
    if (t.polynomial()) t.cutoff = f.cutoff();
    out.set_tail(t);
    out.set_domain(f.domain());
    PadicScaled mc = -c;
    for (const auto& [e, a] : f.terms()) {
        int m = e[i];
        PadicScaled pw = PadicScaled::from_long(p, 1);
        for (int k = m; k >= 0; --k) {
            Exponent e2 = e;
            e2[i] = k;
            out.add_to_term(e2, PadicScaled::from_integer(p, binomial(m, k)) * a * pw);
            pw *= mc;
        }
    }
    ValuationQ noise = f.noise();
    if (!f.is_polynomial()) noise = vmin(noise, t.at(t.cutoff + 1));
    out.set_noise(noise);
    return out;
}

// X_i -> X_i * xi_i^{-1} with v(xi_i) = t_i: valuation bookkeeping only.
inline RestrictedSeries substitute_scale(const RestrictedSeries& f, const QVector& t) {
    if (static_cast<int>(t.size()) != f.nvars()) throw InputError("scale vector dimension mismatch");
    RestrictedSeries out(f.prime(), f.nvars());
    TailBound tb = f.tail();
    Rational tmax = 0;
    for (const auto& x : t) tmax = std::max(tmax, x);
    std::vector<DomainBound> dom = f.domain();
    for (int i = 0; i < f.nvars(); ++i)
        if (dom[i]) dom[i] = *dom[i] + t[i];
    if (!tb.polynomial()) {
        tb.slope -= tmax;
        Rational rmin = *dom[0];
        for (const auto& r : dom) rmin = std::min(rmin, *r);
        if (tb.slope + rmin <= 0) throw DomainViolation("scaled series no longer converges on the shifted domain");
    }
    out.set_tail(tb);
    out.set_domain(dom);
    for (const auto& [e, a] : f.terms()) out.set_term(e, a.shifted(-dot(to_qvector(e), t)));
    if (!f.noise().is_infinite()) out.set_noise(f.noise() - tmax * f.cutoff());
    return out;
}

// X_i -> Z_i - Z_n^(d^(n-i)) for i < n (1-based), X_n -> Z_n. The result is
// stored up to total degree `budget`.
inline RestrictedSeries substitute_monomial(const RestrictedSeries& f, long d, long budget) {
    long p = f.prime();
    int n = f.nvars();
    if (d < 1) throw InputError("monomial substitution needs d >= 1");
    std::vector<long> pw(n);
    for (int i = 0; i < n; ++i) {
        Integer e = ipow(Integer(d), static_cast<unsigned long>(n - 1 - i));
        pw[i] = to_long(e);
    }
    long maxdeg = 0;
    for (const auto& [e, a] : f.terms()) {
        long s = 0;
        for (int i = 0; i < n; ++i) s += static_cast<long>(e[i]) * pw[i];
        maxdeg = std::max(maxdeg, s);
    }
    if (maxdeg > budget)
        throw BudgetExceeded("monomial substitution reaches degree " + std::to_string(maxdeg) + " > budget " +
                             std::to_string(budget));
    RestrictedSeries out(p, n);
    TailBound t;
    t.cutoff = f.is_polynomial() ? maxdeg : budget;
    if (!f.is_polynomial()) {
        if (f.tail().slope < 0) throw DomainViolation("negative tail slope");
        t.slope = f.tail().slope / Rational(pw[0]);
        t.offset = f.tail().offset;
    }
    out.set_tail(t);
    out.set_domain(std::vector<DomainBound>(n, Rational(0)));
    for (const auto& [e, a] : f.terms()) {
        // Expand prod_{i<n} (Z_i - Z_n^{pw_i})^{e_i} * Z_n^{e_n}.
        Exponent base(n, 0);
        base[n - 1] = e[n - 1];
        std::map<Exponent, Integer> poly{{base, Integer(1)}};
        for (int i = 0; i + 1 < n; ++i) {
            for (int rep = 0; rep < e[i]; ++rep) {
                std::map<Exponent, Integer> next;
                for (const auto& [m, c] : poly) {
                    Exponent a1 = m;
                    a1[i] += 1;
                    next[a1] += c;
                    Exponent a2 = m;
                    a2[n - 1] += static_cast<int>(pw[i]);
                    next[a2] -= c;
                }
                poly.clear();
                for (auto& [m, c] : next)
                    if (c != 0) poly.emplace(m, c);
            }
        }
        for (const auto& [m, c] : poly) out.add_to_term(m, PadicScaled::from_integer(p, c) * a);
    }
    ValuationQ noise = f.noise();
    if (!f.is_polynomial()) {
        // Tail terms |I| > D land in degrees >= |I| >= D+1.
        for_each_exponent(n, f.cutoff() + 1, budget, [&](const Exponent& e) {
            long lo = std::max(f.cutoff() + 1, (degree(e) + pw[0] - 1) / pw[0]);
            out.add_to_term(e, PadicScaled::indeterminate(p, f.tail().at(lo).value()));
        });
    }
    out.set_noise(noise);
    return out;
}

// Restriction f(0, ..., 0, Y) as a univariate series.
inline RestrictedSeries last_variable_slice(const RestrictedSeries& f) {
    int n = f.nvars();
    RestrictedSeries out(f.prime(), 1);
    TailBound t = f.tail();
    out.set_tail(t);
    out.set_domain({f.domain()[n - 1]});
    for (const auto& [e, a] : f.terms()) {
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i) ok = ok && e[i] == 0;
        if (ok) out.set_term({e[n - 1]}, a);
    }
    out.set_noise(f.noise());
    return out;
}

// Smallest d with f(0,...,0,Y) = sum b_i Y^i, v(b_i) > 0 for i < d, b_d a unit.
inline long regular_order(const RestrictedSeries& f) {
    int n = f.nvars();
    if (n < 1) throw InputError("regular_order needs at least one variable");
    if (f.is_exact_zero()) throw ZeroSeries();
    for (long i = 0; i <= f.cutoff(); ++i) {
        Exponent e(n, 0);
        e[n - 1] = static_cast<int>(i);
        PadicScaled b = f.coefficient(e);
        ValuationQ lb = b.valuation_lower_bound();
        if (lb > ValuationQ(0)) continue;
        if (b.is_indeterminate())
            throw NotRegular("coefficient of Y^" + std::to_string(i) + " is not certified");
        if (b.valuation() == ValuationQ(0)) return i;
        throw NotRegular("coefficient of Y^" + std::to_string(i) + " has negative valuation");
    }
    throw NotRegular("no unit coefficient certified within the cutoff");
}

// Largest index attaining min_k v(a_k) + k*r over the closed ball v(x) >= r
// (r = domain bound, default 0): the number of zeros of f in that ball of C_p,
// with multiplicity.
inline long strassmann_count(const RestrictedSeries& f) {
    if (f.nvars() != 1) throw InputError("strassmann_count needs a univariate series");
    Rational r = f.domain()[0] ? *f.domain()[0] : Rational(0);
    if (!f.domain()[0] && !f.is_polynomial()) throw InputError("unbounded domain");
    std::optional<Rational> best;
    long idx = -1;
    std::vector<std::pair<long, PadicScaled>> coeffs;
    for (long k = 0; k <= f.cutoff(); ++k) {
        PadicScaled c = f.coefficient({static_cast<int>(k)});
        if (c.is_zero()) continue;
        coeffs.emplace_back(k, c);
        if (c.is_indeterminate()) continue;
        Rational w = c.valuation().value() + k * r;
        if (!best || w <= *best) {
            best = w;
            idx = k;
        }
    }
    if (!best) {
        if (coeffs.empty() && f.is_polynomial()) throw ZeroSeries();
        throw PrecisionExhausted("no coefficient with certified valuation");
    }
    for (const auto& [k, c] : coeffs) {
        if (!c.is_indeterminate()) continue;
        if (c.valuation_lower_bound() + ValuationQ(Rational(k * r)) <= ValuationQ(*best))
            throw PrecisionExhausted("coefficient of x^" + std::to_string(k) + " may attain the minimum");
    }
    if (!f.is_polynomial()) {
        Rational rate = f.tail().slope + r;
        if (rate <= 0 || Rational(rate * (f.cutoff() + 1) + f.tail().offset.value()) <= *best)
            throw PrecisionExhausted("tail bound cannot exclude the minimum beyond the cutoff");
    }
    return idx;
}

}  // namespace troppadic
