#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "troppadic/linalg.hpp"
#include "troppadic/polyhedra.hpp"

namespace oracle {

using troppadic::Integer;
using troppadic::QMatrix;
using troppadic::QVector;
using troppadic::Rational;

using Poly1 = std::vector<Rational>;  // coefficient of x^k at index k
using Poly2 = std::map<std::pair<int, int>, Integer>;

inline void trim(Poly1& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly1 rem(Poly1 a, const Poly1& b) {
    trim(a);
    while (a.size() >= b.size()) {
        Rational f = a.back() / b.back();
        std::size_t s = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= f * b[i];
        trim(a);
    }
    return a;
}

inline Poly1 gcd(Poly1 a, Poly1 b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly1 r = rem(a, b);
        a = b;
        b = r;
    }
    return a;
}

// Number of roots in C_p^* (or any algebraically closed field of
// characteristic 0) counted with multiplicity: the horizontal length of the
// Newton polygon, deg - ord_0.
inline long nonzero_root_count(Poly1 a) {
    trim(a);
    if (a.empty()) return -1;
    long ord = 0;
    while (a[ord] == 0) ++ord;
    return static_cast<long>(a.size()) - 1 - ord;
}

inline int deg_y(const Poly2& f) {
    int d = 0;
    for (const auto& [e, c] : f) d = std::max(d, e.second);
    return d;
}
inline int deg_x(const Poly2& f) {
    int d = 0;
    for (const auto& [e, c] : f) d = std::max(d, e.first);
    return d;
}

// Coefficients in y of f at x = x0.
inline QVector at_x(const Poly2& f, const Rational& x0) {
    QVector out(deg_y(f) + 1, Rational(0));
    for (const auto& [e, c] : f) {
        Rational t = c;
        for (int i = 0; i < e.first; ++i) t *= x0;
        out[e.second] += t;
    }
    return out;
}

// Coefficient polynomial in x of y^k.
inline Poly1 y_coefficient(const Poly2& f, int k) {
    Poly1 out(deg_x(f) + 1, Rational(0));
    for (const auto& [e, c] : f)
        if (e.second == k) out[e.first] += c;
    trim(out);
    return out;
}

inline Rational sylvester(const QVector& a, const QVector& b) {
    int m = static_cast<int>(a.size()) - 1, n = static_cast<int>(b.size()) - 1;
    int size = m + n;
    if (size == 0) return 1;
    QMatrix s(size, QVector(size, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[i][i + j] = a[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[n + i][i + j] = b[n - j];
    return troppadic::determinant(s);
}

// Res_y(f, g) as a polynomial in x, by evaluation and interpolation.
inline Poly1 resultant_y(const Poly2& f, const Poly2& g) {
    int bound = deg_x(f) * deg_y(g) + deg_x(g) * deg_y(f);
    std::vector<Rational> xs, ys;
    for (int k = 0; k <= bound; ++k) {
        xs.push_back(Rational(k + 1));
        ys.push_back(sylvester(at_x(f, xs.back()), at_x(g, xs.back())));
    }
    // Newton divided differences, then expansion.
    std::vector<Rational> dd = ys;
    int n = static_cast<int>(xs.size());
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    Poly1 out{dd[n - 1]};
    for (int i = n - 2; i >= 0; --i) {
        Poly1 next(out.size() + 1, Rational(0));
        for (std::size_t k = 0; k < out.size(); ++k) {
            next[k + 1] += out[k];
            next[k] -= xs[i] * out[k];
        }
        next[0] += dd[i];
        out = next;
    }
    trim(out);
    return out;
}

inline bool has_nonzero_root(const Poly1& a) {
    Poly1 b = a;
    trim(b);
    return nonzero_root_count(b) > 0;
}

// Solutions of f = g = 0 in the torus, with multiplicity; nullopt when a
// guard fails (common factor, common root on y = 0 or at y = infinity).
inline std::optional<long> torus_root_count(const Poly2& f, const Poly2& g) {
    Poly1 r = resultant_y(f, g);
    if (r.empty()) return std::nullopt;
    if (has_nonzero_root(gcd(y_coefficient(f, 0), y_coefficient(g, 0)))) return std::nullopt;
    if (has_nonzero_root(gcd(y_coefficient(f, deg_y(f)), y_coefficient(g, deg_y(g))))) return std::nullopt;
    if (y_coefficient(f, 0).empty() || y_coefficient(g, 0).empty()) return std::nullopt;
    return nonzero_root_count(r);
}

inline troppadic::QPolyhedron scaled(const troppadic::QPolyhedron& p, const Rational& s) {
    std::vector<QVector> v;
    for (const auto& x : p.vertices()) v.push_back(troppadic::operator*(s, x));
    return troppadic::convex_hull(p.ambient(), v);
}

// Oracle: interpolate vol(sum lambda_i P_i) on a lambda grid and read off the
// coefficient of lambda_1 ... lambda_n.
inline Rational mv_by_interpolation(const std::vector<troppadic::QPolyhedron>& ps) {
    int n = static_cast<int>(ps.size());
    std::vector<std::vector<int>> mons;
    std::function<void(int, int, std::vector<int>&)> rec = [&](int i, int left, std::vector<int>& e) {
        if (i == n - 1) {
            e[i] = left;
            mons.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k, e);
        }
    };
    std::vector<int> e(n, 0);
    rec(0, n, e);
    QMatrix rows;
    QVector rhs;
    std::vector<std::vector<long>> grid;
    std::function<void(int, std::vector<long>&)> g = [&](int i, std::vector<long>& l) {
        if (i == n) {
            grid.push_back(l);
            return;
        }
        for (long x = 1; x <= n + 1; ++x) {
            l[i] = x;
            g(i + 1, l);
        }
    };
    std::vector<long> l(n);
    g(0, l);
    for (const auto& lam : grid) {
        troppadic::QPolyhedron sum = scaled(ps[0], Rational(lam[0]));
        for (int i = 1; i < n; ++i) sum = troppadic::minkowski_sum(sum, scaled(ps[i], Rational(lam[i])));
        QVector row;
        for (const auto& m : mons) {
            Rational v = 1;
            for (int i = 0; i < n; ++i) v *= troppadic::qpow(Rational(lam[i]), m[i]);
            row.push_back(v);
        }
        rows.push_back(row);
        rhs.push_back(troppadic::volume(sum));
    }
    QVector coef = *troppadic::solve(rows, rhs, static_cast<int>(mons.size()));
    for (std::size_t k = 0; k < mons.size(); ++k)
        if (std::all_of(mons[k].begin(), mons[k].end(), [](int x) { return x == 1; })) return coef[k];
    return -1;
}

}  // namespace oracle
