#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "troppadic/linalg.hpp"

namespace troppadic {

// <a, x> <= b (or = b for equalities), a a primitive integer vector.
struct Halfspace {
    QVector a;
    Rational b;
    friend bool operator==(const Halfspace& x, const Halfspace& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator<(const Halfspace& x, const Halfspace& y) {
        auto c = compare(x.a, y.a);
        if (c != 0) return c < 0;
        return x.b < y.b;
    }
};

namespace detail {

// Scales (a, b) so that a is a primitive integer vector.
inline Halfspace normalize(const QVector& a, const Rational& b) {
    Integer l = 1;
    for (const auto& x : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    Integer g = 0;
    for (const auto& x : a) {
        Integer z = Integer(x * Rational(l));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    }
    if (g == 0) return {a, b};
    Rational s = Rational(l) / Rational(g);
    return {s * a, s * b};
}

// Canonical form of an equality system: the reduced echelon basis with each
// row scaled to a primitive integer vector whose leading entry is positive.
inline std::vector<Halfspace> canonical_equalities(const QMatrix& normals, const QVector& base, int n) {
    QMatrix g = span_basis(normals, n);
    std::vector<Halfspace> out;
    for (const auto& row : g) out.push_back(normalize(row, dot(row, base)));
    return out;
}

// Removes from a the component in span(eq normals) (orthogonal projection).
inline QVector project_out(const QVector& a, const std::vector<Halfspace>& eqs, int n) {
    if (eqs.empty()) return a;
    QMatrix g;
    for (const auto& e : eqs) g.push_back(e.a);
    // Solve (G G^T) y = G a.
    int m = static_cast<int>(g.size());
    QMatrix ggt(m, QVector(m));
    QVector rhs(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) ggt[i][j] = dot(g[i], g[j]);
        rhs[i] = dot(g[i], a);
    }
    QVector y = *solve(ggt, rhs, m);
    QVector out = a;
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) out[k] -= y[i] * g[i][k];
    return out;
}

struct Simplex {
    std::vector<int> verts;
    QVector a;
    Rational b;
};

// Beneath-beyond hull of full-dimensional points in Q^k (k >= 1). Returns the
// boundary triangulation with outward normals.
inline std::vector<Simplex> boundary_triangulation(const std::vector<QVector>& pts, int k) {
    std::vector<int> init;
    {
        QMatrix dirs;
        for (int i = 0; i < static_cast<int>(pts.size()) && static_cast<int>(init.size()) < k + 1; ++i) {
            if (init.empty()) {
                init.push_back(i);
                continue;
            }
            QMatrix trial = dirs;
            trial.push_back(pts[i] - pts[init[0]]);
            if (rank(trial, k) == static_cast<int>(trial.size())) {
                dirs = trial;
                init.push_back(i);
            }
        }
    }
    if (static_cast<int>(init.size()) != k + 1) throw Error("points are not full-dimensional");
    QVector c(k, Rational(0));
    for (int i : init) c = c + pts[i];
    c = Rational(1, k + 1) * c;
    auto make = [&](std::vector<int> vs) {
        std::sort(vs.begin(), vs.end());
        QMatrix m;
        for (std::size_t i = 1; i < vs.size(); ++i) m.push_back(pts[vs[i]] - pts[vs[0]]);
        QMatrix ns = nullspace(m, k);
        if (ns.size() != 1) throw Error("degenerate simplex in hull construction");
        QVector a = ns[0];
        Rational b = dot(a, pts[vs[0]]);
        if (dot(a, c) > b) {
            a = Rational(-1) * a;
            b = -b;
        }
        return Simplex{vs, a, b};
    };
    std::vector<Simplex> facets;
    for (int drop = 0; drop <= k; ++drop) {
        std::vector<int> vs;
        for (int j = 0; j <= k; ++j)
            if (j != drop) vs.push_back(init[j]);
        facets.push_back(make(vs));
    }
    std::set<int> used(init.begin(), init.end());
    for (int q = 0; q < static_cast<int>(pts.size()); ++q) {
        if (used.count(q)) continue;
        std::vector<Simplex> keep;
        std::map<std::vector<int>, int> ridges;
        bool any = false;
        for (auto& f : facets) {
            if (dot(f.a, pts[q]) > f.b) {
                any = true;
                for (std::size_t drop = 0; drop < f.verts.size(); ++drop) {
                    std::vector<int> r;
                    for (std::size_t j = 0; j < f.verts.size(); ++j)
                        if (j != drop) r.push_back(f.verts[j]);
                    ++ridges[r];
                }
            } else {
                keep.push_back(std::move(f));
            }
        }
        if (!any) {
            facets = std::move(keep);
            continue;
        }
        for (const auto& [r, cnt] : ridges) {
            if (cnt != 1) continue;
            std::vector<int> vs = r;
            vs.push_back(q);
            keep.push_back(make(vs));
        }
        facets = std::move(keep);
    }
    return facets;
}

inline std::vector<QVector> dedupe(std::vector<QVector> pts) {
    std::sort(pts.begin(), pts.end(), QVectorLess());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace detail

// An exact rational polyhedron with both representations: equalities and
// irredundant facet inequalities; vertices, extreme rays and a lineality basis.
class QPolyhedron {
public:
    QPolyhedron() = default;

    static QPolyhedron empty(int n) {
        QPolyhedron p;
        p.n_ = n;
        p.dim_ = -1;
        return p;
    }

    // Convex hull of finitely many points.
    static QPolyhedron hull(int n, std::vector<QVector> pts) {
        for (const auto& x : pts)
            if (static_cast<int>(x.size()) != n) throw InputError("point dimension mismatch");
        pts = detail::dedupe(std::move(pts));
        if (pts.empty()) return empty(n);
        QPolyhedron p;
        p.n_ = n;
        AffineHull ah = affine_hull(pts, n);
        int k = ah.dim();
        p.dim_ = k;
        p.eqs_ = detail::canonical_equalities(orthogonal_complement(ah.directions, n), ah.base, n);
        if (k == 0) {
            p.vertices_ = {pts[0]};
            return p;
        }
        std::vector<QVector> proj;
        for (const auto& x : pts) {
            QVector y(k);
            for (int i = 0; i < k; ++i) y[i] = x[ah.pivots[i]];
            proj.push_back(y);
        }
        auto simplices = detail::boundary_triangulation(proj, k);
        std::set<Halfspace> facets;
        for (const auto& s : simplices) {
            QVector a(n, Rational(0));
            for (int i = 0; i < k; ++i) a[ah.pivots[i]] = s.a[i];
            a = detail::project_out(a, p.eqs_, n);
            facets.insert(detail::normalize(a, dot(a, pts[s.verts[0]])));
        }
        p.facets_.assign(facets.begin(), facets.end());
        for (const auto& x : pts) {
            QMatrix tight;
            for (const auto& f : p.facets_)
                if (dot(f.a, x) == f.b) tight.push_back(f.a);
            for (const auto& e : p.eqs_) tight.push_back(e.a);
            if (rank(tight, n) == n) p.vertices_.push_back(x);
        }
        return p;
    }

    // {x : <a_i, x> <= b_i, <c_j, x> = d_j}.
    static QPolyhedron from_h(int n, const std::vector<Halfspace>& ineqs, const std::vector<Halfspace>& eqs = {}) {
        std::vector<Halfspace> in, eq;
        for (const auto& h : ineqs) {
            if (static_cast<int>(h.a.size()) != n) throw InputError("constraint dimension mismatch");
            if (is_zero(h.a)) {
                if (h.b < 0) return empty(n);
                continue;
            }
            in.push_back(detail::normalize(h.a, h.b));
        }
        for (const auto& h : eqs) {
            if (static_cast<int>(h.a.size()) != n) throw InputError("constraint dimension mismatch");
            if (is_zero(h.a)) {
                if (h.b != 0) return empty(n);
                continue;
            }
            eq.push_back(detail::normalize(h.a, h.b));
        }
        std::sort(in.begin(), in.end());
        in.erase(std::unique(in.begin(), in.end()), in.end());
        QMatrix normals;
        for (const auto& h : in) normals.push_back(h.a);
        for (const auto& h : eq) normals.push_back(h.a);
        QMatrix lines = nullspace(normals, n);
        QMatrix base_rows;
        QVector base_rhs;
        for (const auto& h : eq) {
            base_rows.push_back(h.a);
            base_rhs.push_back(h.b);
        }
        for (const auto& l : lines) {
            base_rows.push_back(l);
            base_rhs.push_back(0);
        }
        if (!solve(base_rows, base_rhs, n)) return empty(n);
        int r0 = rank(base_rows, n);
        int t = n - r0;
        auto feasible = [&](const QVector& x) {
            for (const auto& h : in)
                if (dot(h.a, x) > h.b) return false;
            return true;
        };
        std::vector<QVector> verts, rays;
        // Enumerate t-subsets of the inequalities.
        std::function<void(int, int, std::vector<int>&, int, const std::function<void(const std::vector<int>&)>&)> choose =
            [&](int start, int need, std::vector<int>& cur, int total, const std::function<void(const std::vector<int>&)>& fn) {
                if (need == 0) {
                    fn(cur);
                    return;
                }
                for (int i = start; i <= total - need; ++i) {
                    cur.push_back(i);
                    choose(i + 1, need - 1, cur, total, fn);
                    cur.pop_back();
                }
            };
        int m = static_cast<int>(in.size());
        std::vector<int> cur;
        if (t <= m) {
            choose(0, t, cur, m, [&](const std::vector<int>& s) {
                QMatrix rows = base_rows;
                QVector rhs = base_rhs;
                for (int i : s) {
                    rows.push_back(in[i].a);
                    rhs.push_back(in[i].b);
                }
                if (rank(rows, n) != n) return;
                auto x = solve(rows, rhs, n);
                if (x && feasible(*x)) verts.push_back(*x);
            });
        }
        if (t >= 1 && t - 1 <= m) {
            choose(0, t - 1, cur, m, [&](const std::vector<int>& s) {
                QMatrix rows = base_rows;
                for (int i : s) rows.push_back(in[i].a);
                QMatrix ns = nullspace(rows, n);
                if (ns.size() != 1) return;
                for (int sign : {1, -1}) {
                    QVector r = Rational(sign) * ns[0];
                    bool ok = true;
                    for (const auto& h : in)
                        if (dot(h.a, r) > 0) ok = false;
                    if (ok) rays.push_back(primitive(r));
                }
            });
        }
        verts = detail::dedupe(verts);
        if (verts.empty()) return empty(n);
        rays = detail::dedupe(rays);
        return from_generators(n, verts, rays, lines, in);
    }

    // Polyhedron conv(verts) + cone(rays) + span(lines) given a superset of
    // valid inequalities containing every facet (used by from_h).
    static QPolyhedron from_generators(int n, const std::vector<QVector>& verts, const std::vector<QVector>& rays,
                                       const QMatrix& lines, const std::vector<Halfspace>& candidates) {
        QPolyhedron p;
        p.n_ = n;
        p.vertices_ = verts;
        p.rays_ = rays;
        for (const auto& l : lines) p.lines_.push_back(primitive(l));
        std::sort(p.lines_.begin(), p.lines_.end(), QVectorLess());
        QMatrix dirs;
        for (std::size_t i = 1; i < verts.size(); ++i) dirs.push_back(verts[i] - verts[0]);
        for (const auto& r : rays) dirs.push_back(r);
        for (const auto& l : lines) dirs.push_back(l);
        dirs = span_basis(dirs, n);
        p.dim_ = static_cast<int>(dirs.size());
        p.eqs_ = detail::canonical_equalities(orthogonal_complement(dirs, n), verts[0], n);
        std::map<std::pair<std::vector<int>, std::vector<int>>, Halfspace> by_face;
        for (const auto& h : candidates) {
            std::vector<int> tv, tr;
            for (std::size_t i = 0; i < verts.size(); ++i)
                if (dot(h.a, verts[i]) == h.b) tv.push_back(static_cast<int>(i));
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (dot(h.a, rays[i]) == 0) tr.push_back(static_cast<int>(i));
            if (tv.size() == verts.size() && tr.size() == rays.size()) continue;  // implicit equality
            if (tv.empty()) continue;
            QMatrix fd;
            for (std::size_t i = 1; i < tv.size(); ++i) fd.push_back(verts[tv[i]] - verts[tv[0]]);
            for (int i : tr) fd.push_back(rays[i]);
            for (const auto& l : lines) fd.push_back(l);
            if (rank(fd, n) != p.dim_ - 1) continue;
            QVector a = detail::project_out(h.a, p.eqs_, n);
            by_face.emplace(std::make_pair(tv, tr), detail::normalize(a, dot(a, verts[tv[0]])));
        }
        std::set<Halfspace> fs;
        for (const auto& [k, h] : by_face) fs.insert(h);
        p.facets_.assign(fs.begin(), fs.end());
        return p;
    }

    int ambient() const { return n_; }
    int dim() const { return dim_; }
    bool is_empty() const { return dim_ < 0; }
    bool is_bounded() const { return rays_.empty() && lines_.empty(); }
    const std::vector<QVector>& vertices() const { return vertices_; }
    const std::vector<QVector>& rays() const { return rays_; }
    const QMatrix& lines() const { return lines_; }
    const std::vector<Halfspace>& facets() const { return facets_; }
    const std::vector<Halfspace>& equalities() const { return eqs_; }

    bool contains(const QVector& x) const {
        if (is_empty()) return false;
        for (const auto& e : eqs_)
            if (dot(e.a, x) != e.b) return false;
        for (const auto& f : facets_)
            if (dot(f.a, x) > f.b) return false;
        return true;
    }

    bool contains_direction(const QVector& r) const {
        for (const auto& e : eqs_)
            if (dot(e.a, r) != 0) return false;
        for (const auto& f : facets_)
            if (dot(f.a, r) > 0) return false;
        return true;
    }

    // Q subset of this.
    bool contains(const QPolyhedron& q) const {
        if (q.is_empty()) return true;
        for (const auto& v : q.vertices_)
            if (!contains(v)) return false;
        for (const auto& r : q.rays_)
            if (!contains_direction(r)) return false;
        for (const auto& l : q.lines_)
            if (!contains_direction(l) || !contains_direction(Rational(-1) * l)) return false;
        return true;
    }

    friend bool operator==(const QPolyhedron& a, const QPolyhedron& b) {
        if (a.n_ != b.n_ || a.dim_ != b.dim_) return false;
        return a.contains(b) && b.contains(a);
    }

    QVector relative_interior_point() const {
        if (is_empty()) throw Error("empty polyhedron has no interior point");
        QVector x(n_, Rational(0));
        for (const auto& v : vertices_) x = x + v;
        x = Rational(1, static_cast<long>(vertices_.size())) * x;
        for (const auto& r : rays_) x = x + r;
        return x;
    }

    // Basis of the direction space of the affine hull.
    QMatrix direction_space() const {
        QMatrix dirs;
        for (std::size_t i = 1; i < vertices_.size(); ++i) dirs.push_back(vertices_[i] - vertices_[0]);
        for (const auto& r : rays_) dirs.push_back(r);
        for (const auto& l : lines_) dirs.push_back(l);
        return span_basis(dirs, n_);
    }

    // Smallest face containing x (x must lie in the polyhedron).
    QPolyhedron minimal_face(const QVector& x) const {
        std::vector<Halfspace> in, eq = eqs_;
        for (const auto& f : facets_) {
            if (dot(f.a, x) == f.b) eq.push_back(f);
            else in.push_back(f);
        }
        return from_h(n_, in, eq);
    }

private:
    int n_ = 0;
    int dim_ = -1;
    std::vector<QVector> vertices_, rays_;
    QMatrix lines_;
    std::vector<Halfspace> facets_, eqs_;
};

inline QPolyhedron intersect(const QPolyhedron& a, const QPolyhedron& b) {
    if (a.ambient() != b.ambient()) throw InputError("ambient dimension mismatch");
    if (a.is_empty() || b.is_empty()) return QPolyhedron::empty(a.ambient());
    std::vector<Halfspace> in = a.facets(), eq = a.equalities();
    in.insert(in.end(), b.facets().begin(), b.facets().end());
    eq.insert(eq.end(), b.equalities().begin(), b.equalities().end());
    return QPolyhedron::from_h(a.ambient(), in, eq);
}

// True when F is a face of P (the empty set counts as a face).
inline bool is_face_of(const QPolyhedron& f, const QPolyhedron& p) {
    if (f.is_empty()) return true;
    if (!p.contains(f)) return false;
    QPolyhedron g = p.minimal_face(f.relative_interior_point());
    return f.contains(g);
}

inline QPolyhedron convex_hull(int n, const std::vector<QVector>& pts) {
    if (pts.empty()) throw InputError("convex hull of no points");
    return QPolyhedron::hull(n, pts);
}

inline QPolyhedron minkowski_sum(const QPolyhedron& a, const QPolyhedron& b) {
    if (a.ambient() != b.ambient()) throw InputError("ambient dimension mismatch");
    if (a.is_empty() || b.is_empty()) return QPolyhedron::empty(a.ambient());
    if (!a.is_bounded() || !b.is_bounded()) throw Unbounded();
    std::vector<QVector> pts;
    for (const auto& u : a.vertices())
        for (const auto& v : b.vertices()) pts.push_back(u + v);
    return QPolyhedron::hull(a.ambient(), pts);
}

// Euclidean volume; 0 for lower-dimensional polytopes.
inline Rational volume(const QPolyhedron& p) {
    if (p.is_empty()) return 0;
    if (!p.is_bounded()) throw Unbounded();
    int n = p.ambient();
    if (p.dim() < n) return 0;
    const auto& v = p.vertices();
    auto simplices = detail::boundary_triangulation(v, n);
    QVector c(n, Rational(0));
    for (const auto& x : v) c = c + x;
    c = Rational(1, static_cast<long>(v.size())) * c;
    Rational total = 0;
    for (const auto& s : simplices) {
        QMatrix m;
        for (int i : s.verts) m.push_back(v[i] - c);
        Rational d = determinant(m);
        total += d < 0 ? Rational(-d) : d;
    }
    return total / factorial(n);
}

enum class Normalization { Coefficient, Normalized };

// lambda_1...lambda_n coefficient of vol(sum lambda_i P_i) by inclusion-exclusion;
// normalized mode divides by n!.
inline Rational mixed_volume(const std::vector<QPolyhedron>& ps, Normalization mode = Normalization::Coefficient) {
    int n = static_cast<int>(ps.size());
    if (n == 0) throw InputError("mixed volume of no polytopes");
    for (const auto& p : ps) {
        if (p.ambient() != n) throw InputError("mixed volume needs n polytopes in dimension n");
        if (p.is_empty()) throw InputError("mixed volume of an empty polytope");
        if (!p.is_bounded()) throw Unbounded();
    }
    Rational total = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        QPolyhedron sum;
        bool first = true;
        int size = 0;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            ++size;
            sum = first ? ps[i] : minkowski_sum(sum, ps[i]);
            first = false;
        }
        Rational v = volume(sum);
        total += ((n - size) % 2 == 0) ? v : Rational(-v);
    }
    if (mode == Normalization::Normalized) total /= factorial(n);
    return total;
}

inline QPolyhedron epsilon_thicken(const QPolyhedron& p, const Rational& eps) {
    if (eps <= 0) throw InputError("thickening needs eps > 0");
    if (p.is_empty()) return p;
    std::vector<Halfspace> in;
    for (const auto& f : p.facets()) in.push_back({f.a, f.b + eps});
    for (const auto& e : p.equalities()) {
        in.push_back({e.a, e.b + eps});
        in.push_back({Rational(-1) * e.a, -e.b + eps});
    }
    return QPolyhedron::from_h(p.ambient(), in);
}

// A finite collection of polyhedra (closure under faces is not enforced).
struct PolyComplex {
    int ambient = 0;
    std::vector<QPolyhedron> cells;

    bool contains(const QVector& x) const {
        for (const auto& c : cells)
            if (c.contains(x)) return true;
        return false;
    }
};

inline PolyComplex epsilon_thicken(const PolyComplex& c, const Rational& eps) {
    PolyComplex out{c.ambient, {}};
    for (const auto& cell : c.cells) out.cells.push_back(epsilon_thicken(cell, eps));
    return out;
}

// A lifted point (exponent, height) and lower faces of the lifted set.
struct LiftedPoint {
    QVector point;
    Rational height;
};

struct LowerFace {
    int dim = 0;                // dimension of the projected face
    std::vector<int> indices;   // lifted points on the face (sorted)
    QVector witness;            // nu minimizing <nu, I> + h exactly on indices
};

// Closed cell {nu : every index in `on` attains min_i <nu, I_i> + h_i}.
inline QPolyhedron lower_face_cell(const std::vector<LiftedPoint>& pts, const std::vector<int>& on, int n,
                                   const std::vector<Halfspace>& extra = {}) {
    std::vector<Halfspace> in = extra, eq;
    std::set<int> s(on.begin(), on.end());
    int i0 = on.front();
    for (int i : on)
        if (i != i0) eq.push_back({pts[i].point - pts[i0].point, pts[i0].height - pts[i].height});
    for (int k = 0; k < static_cast<int>(pts.size()); ++k)
        if (!s.count(k)) in.push_back({pts[i0].point - pts[k].point, pts[k].height - pts[i0].height});
    return QPolyhedron::from_h(n, in, eq);
}

namespace detail {

// Indices of lifted points on each facet of conv(subset) that is lower
// (outward normal pointing down). `all_facets` returns every facet instead
// (used once the subset already lies on a non-vertical hyperplane).
inline std::vector<std::vector<int>> lifted_facets(const std::vector<LiftedPoint>& pts, const std::vector<int>& subset,
                                                   int n, bool lower_only) {
    std::vector<QVector> lifted;
    for (int i : subset) {
        QVector q = pts[i].point;
        q.push_back(pts[i].height);
        lifted.push_back(q);
    }
    std::vector<QVector> cloud = lifted;
    if (lower_only)
        for (const auto& q : lifted) {
            QVector up = q;
            up.back() += 1;
            cloud.push_back(up);
        }
    QPolyhedron h = QPolyhedron::hull(n + 1, cloud);
    std::vector<std::vector<int>> out;
    for (const auto& f : h.facets()) {
        if (lower_only && !(f.a.back() < 0)) continue;
        std::vector<int> on;
        for (std::size_t j = 0; j < lifted.size(); ++j)
            if (dot(f.a, lifted[j]) == f.b) on.push_back(subset[j]);
        if (!on.empty()) out.push_back(on);
    }
    return out;
}

inline int projected_dim(const std::vector<LiftedPoint>& pts, const std::vector<int>& on, int n) {
    std::vector<QVector> v;
    for (int i : on) v.push_back(pts[i].point);
    return affine_hull(v, n).dim();
}

}  // namespace detail

// All faces of the lower hull of a lifted point set (every dimension), each
// with its full set of lifted points and a witness nu. Lower facets are the
// faces of maximal dimension.
inline std::vector<LowerFace> lower_hull_faces(const std::vector<LiftedPoint>& pts) {
    if (pts.empty()) return {};
    int n = static_cast<int>(pts[0].point.size());
    std::vector<int> all(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<int>(i);
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    int top = detail::projected_dim(pts, all, n);
    if (top == 0) {
        // All exponents coincide: the lowest heights form the only face.
        Rational m = pts[0].height;
        for (const auto& q : pts) m = std::min(m, q.height);
        std::vector<int> on;
        for (int i : all)
            if (pts[i].height == m) on.push_back(i);
        queue.push_back(on);
    } else {
        for (auto& f : detail::lifted_facets(pts, all, n, true)) queue.push_back(f);
    }
    std::vector<LowerFace> out;
    while (!queue.empty()) {
        std::vector<int> on = queue.back();
        queue.pop_back();
        if (!seen.insert(on).second) continue;
        LowerFace face;
        face.indices = on;
        face.dim = detail::projected_dim(pts, on, n);
        face.witness = lower_face_cell(pts, on, n).relative_interior_point();
        if (face.dim > 0)
            for (auto& sub : detail::lifted_facets(pts, on, n, false)) queue.push_back(sub);
        out.push_back(face);
    }
    std::sort(out.begin(), out.end(), [](const LowerFace& a, const LowerFace& b) {
        if (a.dim != b.dim) return a.dim > b.dim;
        return a.indices < b.indices;
    });
    return out;
}

// Lower facets only (faces of maximal dimension).
inline std::vector<LowerFace> lower_hull(const std::vector<LiftedPoint>& pts) {
    auto faces = lower_hull_faces(pts);
    if (faces.empty()) return faces;
    int top = faces.front().dim;
    std::vector<LowerFace> out;
    for (auto& f : faces)
        if (f.dim == top) out.push_back(f);
    return out;
}

}  // namespace troppadic
