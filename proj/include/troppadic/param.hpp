#pragma once

#include <set>
#include <vector>

#include "troppadic/series.hpp"

namespace troppadic {

// f(X, Y) = sum_I a_I(Y) X^I, stored as one series in n + m variables whose
// last m variables are the parameters Y (ranging over O_p).
class ParamSeries {
public:
    ParamSeries() = default;
    ParamSeries(RestrictedSeries joint, int nparams) : joint_(std::move(joint)), m_(nparams) {
        if (m_ < 0 || m_ > joint_.nvars()) throw InputError("parameter count out of range");
        for (int j = nvars(); j < joint_.nvars(); ++j)
            if (!joint_.domain()[j] || *joint_.domain()[j] < 0)
                throw InputError("parameters must range over O_p");
    }
    static ParamSeries constant_coefficients(const RestrictedSeries& f) { return ParamSeries(f, 0); }

    long prime() const { return joint_.prime(); }
    int nvars() const { return joint_.nvars() - m_; }
    int nparams() const { return m_; }
    const RestrictedSeries& joint() const { return joint_; }

    std::vector<DomainBound> x_domain() const {
        return std::vector<DomainBound>(joint_.domain().begin(), joint_.domain().begin() + nvars());
    }

    // Exponents I with a stored term X^I Y^K for some K.
    std::set<Exponent> x_support() const {
        std::set<Exponent> out;
        for (const auto& [e, c] : joint_.terms()) out.insert(Exponent(e.begin(), e.begin() + nvars()));
        return out;
    }

    // a_I(Y) with its certified Y-tail and noise.
    RestrictedSeries coefficient_series(const Exponent& x) const {
        int n = nvars();
        long p = prime();
        long di = degree(x);
        RestrictedSeries out(p, m_);
        TailBound t = joint_.tail();
        if (di > joint_.cutoff()) {
            if (!t.polynomial()) out.set_term(Exponent(m_, 0), PadicScaled::indeterminate(p, t.at(di).value()));
            return out;
        }
        t.cutoff = m_ == 0 ? 0 : joint_.cutoff() - di;
        if (m_ == 0) t.offset = ValuationQ::infinity();
        else if (!t.polynomial()) t.offset = ValuationQ(t.offset.value() + t.slope * di);
        out.set_tail(t);
        std::vector<DomainBound> dom(joint_.domain().begin() + n, joint_.domain().end());
        out.set_domain(dom);
        for (const auto& [e, c] : joint_.terms()) {
            if (!std::equal(x.begin(), x.end(), e.begin())) continue;
            out.set_term(Exponent(e.begin() + n, e.end()), c);
        }
        out.set_noise(joint_.noise());
        return out;
    }

    // f_ybar as a series in X.
    RestrictedSeries specialize(const std::vector<PadicScaled>& y) const {
        if (static_cast<int>(y.size()) != m_) throw InputError("parameter count mismatch");
        int n = nvars();
        long p = prime();
        RestrictedSeries out(p, n);
        TailBound t = joint_.tail();
        out.set_tail(t);
        out.set_domain(x_domain());
        for (const auto& x : x_support()) {
            RestrictedSeries a = coefficient_series(x);
            PadicScaled v = m_ == 0 ? a.coefficient({}) : evaluate(a, y);
            if (!v.is_zero()) out.set_term(x, v);
        }
        out.set_noise(joint_.noise());
        return out;
    }

    // Coefficient of X_k^s as a parameterized series in the other variables.
    ParamSeries slice(int k, long s) const {
        int n = nvars();
        if (k < 0 || k >= n) throw InputError("slice variable out of range");
        int total = joint_.nvars();
        RestrictedSeries out(prime(), total - 1);
        TailBound t = joint_.tail();
        t.cutoff = std::max(0L, joint_.cutoff() - s);
        if (!t.polynomial()) t.offset = ValuationQ(t.offset.value() + t.slope * s);
        out.set_tail(t);
        std::vector<DomainBound> dom = joint_.domain();
        dom.erase(dom.begin() + k);
        out.set_domain(dom);
        for (const auto& [e, c] : joint_.terms()) {
            if (e[k] != s) continue;
            Exponent e2 = e;
            e2.erase(e2.begin() + k);
            out.set_term(e2, c);
        }
        if (joint_.cutoff() - s < 0 && !joint_.tail().polynomial())
            out.set_term(Exponent(total - 1, 0), PadicScaled::indeterminate(prime(), t.offset.value()));
        out.set_noise(joint_.noise());
        return ParamSeries(out, m_);
    }

private:
    RestrictedSeries joint_;
    int m_ = 0;
};

// Exact e with a = p^e * (unit of Z_p{Y}), when certified.
inline std::optional<Rational> scaled_unit_valuation(const RestrictedSeries& a) {
    PadicScaled c0 = a.coefficient(Exponent(a.nvars(), 0));
    if (!c0.is_normal()) return std::nullopt;
    Rational e = c0.valuation().value();
    RestrictedSeries rest = a;
    rest.set_term(Exponent(a.nvars(), 0), PadicScaled::zero(a.prime()));
    if (a.nvars() == 0) return e;
    if (!(rest.gauss_lower_bound() > ValuationQ(e))) return std::nullopt;
    return e;
}

// Exact Gauss valuation min_K v(c_K) of a coefficient series, when certified.
inline std::optional<Rational> exact_gauss_valuation(const RestrictedSeries& a) {
    std::optional<Rational> best;
    for (const auto& [k, c0] : a.terms()) {
        PadicScaled c = c0.capped(a.noise());
        if (c.is_normal() && (!best || c.valuation().value() < *best)) best = c.valuation().value();
    }
    if (!best) return std::nullopt;
    for (const auto& [k, c0] : a.terms()) {
        PadicScaled c = c0.capped(a.noise());
        if (c.is_indeterminate() && !(c.valuation_lower_bound() > ValuationQ(*best))) return std::nullopt;
    }
    if (!a.noise().is_infinite() && !(a.noise() > ValuationQ(*best))) return std::nullopt;
    if (!a.is_polynomial() && !(ValuationQ(a.tail().slope * (a.cutoff() + 1)) + a.tail().offset > ValuationQ(*best)))
        return std::nullopt;
    return best;
}

// The series in X whose coefficients carry the generic valuations ||a_I||.
inline RestrictedSeries generic_series(const ParamSeries& f) {
    if (f.nparams() == 0) return f.joint();
    long p = f.prime();
    RestrictedSeries out(p, f.nvars());
    out.set_tail(f.joint().tail());
    out.set_domain(f.x_domain());
    for (const auto& x : f.x_support()) {
        RestrictedSeries a = f.coefficient_series(x);
        if (a.is_exact_zero()) continue;
        auto g = exact_gauss_valuation(a);
        if (g) out.set_term(x, PadicScaled::from_unit(p, Rational(1), *g));
        else out.set_term(x, PadicScaled::indeterminate(p, a.gauss_lower_bound().value()));
    }
    out.set_noise(f.joint().noise());
    return out;
}

}  // namespace troppadic
