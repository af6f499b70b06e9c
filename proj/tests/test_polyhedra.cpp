#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "troppadic/polyhedra.hpp"

using namespace troppadic;

namespace {

QVector qv(std::initializer_list<long> xs) {
    QVector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

std::vector<QVector> random_points(std::mt19937_64& rng, int n, int count, long range) {
    std::vector<QVector> pts;
    for (int i = 0; i < count; ++i) {
        QVector v(n);
        for (int j = 0; j < n; ++j) v[j] = Rational(static_cast<long>(rng() % (2 * range + 1)) - range);
        pts.push_back(v);
    }
    return pts;
}

QPolyhedron random_polytope(std::mt19937_64& rng, int n, int count, long range) {
    for (;;) {
        QPolyhedron p = convex_hull(n, random_points(rng, n, count, range));
        if (p.dim() == n) return p;
    }
}

QPolyhedron scaled(const QPolyhedron& p, const Rational& s) {
    std::vector<QVector> v;
    for (const auto& x : p.vertices()) v.push_back(s * x);
    return convex_hull(p.ambient(), v);
}

Rational support(const QPolyhedron& p, const QVector& u) {
    Rational best = dot(p.vertices()[0], u);
    for (const auto& v : p.vertices()) best = std::max(best, dot(v, u));
    return best;
}

// Oracle: every triple of points whose plane leaves all points on one side.
std::set<Halfspace> brute_force_facets(const std::vector<QVector>& pts) {
    std::set<Halfspace> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                QVector u = pts[j] - pts[i], w = pts[k] - pts[i];
                QVector a{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
                if (is_zero(a)) continue;
                Rational b = dot(a, pts[i]);
                bool le = true, ge = true;
                for (const auto& q : pts) {
                    if (dot(a, q) > b) le = false;
                    if (dot(a, q) < b) ge = false;
                }
                if (le) out.insert(detail::normalize(a, b));
                if (ge) out.insert(detail::normalize(Rational(-1) * a, -b));
            }
    return out;
}

}  // namespace

TEST(Polyhedra, HullRemovesInteriorPoint) {
    QPolyhedron p = convex_hull(2, {qv({0, 0}), qv({4, 0}), qv({0, 4}), qv({1, 1})});
    EXPECT_EQ(p.vertices().size(), 3u);
    EXPECT_EQ(p.facets().size(), 3u);
    EXPECT_EQ(p.dim(), 2);
}

TEST(Polyhedra, CollinearSegment) {
    QPolyhedron p = convex_hull(3, {qv({0, 0, 0}), qv({1, 1, 1}), qv({3, 3, 3}), qv({2, 2, 2})});
    EXPECT_EQ(p.dim(), 1);
    EXPECT_EQ(p.vertices().size(), 2u);
    EXPECT_EQ(p.equalities().size(), 2u);
}

TEST(Polyhedra, RandomHullMatchesBruteForce) {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 5; ++it) {
        auto pts = random_points(rng, 3, 40, 20);
        QPolyhedron p = convex_hull(3, pts);
        std::set<Halfspace> ours(p.facets().begin(), p.facets().end());
        EXPECT_EQ(ours, brute_force_facets(pts));
        for (const auto& q : pts) EXPECT_TRUE(p.contains(q));
    }
}

TEST(Polyhedra, HVRoundTrip) {
    std::mt19937_64 rng(2);
    for (int it = 0; it < 10; ++it) {
        QPolyhedron p = random_polytope(rng, 3, 12, 9);
        QPolyhedron q = QPolyhedron::from_h(3, p.facets(), p.equalities());
        EXPECT_EQ(p.vertices(), q.vertices());
        EXPECT_EQ(p.facets(), q.facets());
        EXPECT_EQ(convex_hull(3, q.vertices()), p);
    }
}

TEST(Polyhedra, UnboundedFromInequalities) {
    // Quadrant shifted: x >= 1, y >= 2.
    QPolyhedron p = QPolyhedron::from_h(2, {{qv({-1, 0}), -1}, {qv({0, -1}), -2}});
    EXPECT_EQ(p.vertices(), std::vector<QVector>{qv({1, 2})});
    EXPECT_EQ(p.rays().size(), 2u);
    EXPECT_FALSE(p.is_bounded());
    // Half-plane has a line.
    QPolyhedron h = QPolyhedron::from_h(2, {{qv({0, 1}), 3}});
    EXPECT_EQ(h.lines().size(), 1u);
    EXPECT_EQ(h.dim(), 2);
    EXPECT_THROW(volume(h), Unbounded);
    EXPECT_TRUE(QPolyhedron::from_h(1, {{qv({1}), 0}, {qv({-1}), -1}}).is_empty());
}

TEST(Polyhedra, MinkowskiExamples) {
    QPolyhedron sx = convex_hull(2, {qv({0, 0}), qv({1, 0})});
    QPolyhedron sy = convex_hull(2, {qv({0, 0}), qv({0, 1})});
    QPolyhedron sq = minkowski_sum(sx, sy);
    EXPECT_EQ(sq, convex_hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})}));
    QPolyhedron t = minkowski_sum(sq, convex_hull(2, {qv({3, -2})}));
    EXPECT_EQ(t, convex_hull(2, {qv({3, -2}), qv({4, -2}), qv({3, -1}), qv({4, -1})}));
}

TEST(Polyhedra, MinkowskiSupportFunction) {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 20; ++it) {
        QPolyhedron a = random_polytope(rng, 2, 7, 10), b = random_polytope(rng, 2, 7, 10);
        QPolyhedron s = minkowski_sum(a, b);
        for (int k = 0; k < 100; ++k) {
            QVector u = random_points(rng, 2, 1, 50)[0];
            EXPECT_EQ(support(s, u), support(a, u) + support(b, u));
        }
    }
}

TEST(Polyhedra, VolumeBasics) {
    for (int n = 1; n <= 4; ++n) {
        std::vector<QVector> cube, simplex;
        for (unsigned m = 0; m < (1u << n); ++m) {
            QVector v(n);
            for (int i = 0; i < n; ++i) v[i] = (m >> i) & 1u;
            cube.push_back(v);
        }
        simplex.push_back(QVector(n, Rational(0)));
        for (int i = 0; i < n; ++i) {
            QVector v(n, Rational(0));
            v[i] = 1;
            simplex.push_back(v);
        }
        EXPECT_EQ(volume(convex_hull(n, cube)), Rational(1));
        EXPECT_EQ(volume(convex_hull(n, simplex)), 1 / factorial(n));
    }
    EXPECT_EQ(volume(convex_hull(3, {qv({0, 0, 0}), qv({1, 0, 0}), qv({0, 1, 0})})), Rational(0));
}

TEST(Polyhedra, VolumeMatchesOtherTriangulation) {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 10; ++it) {
        QPolyhedron p = random_polytope(rng, 3, 15, 12);
        // Oracle: cone from the first vertex over a triangulation built with
        // the vertices inserted in reverse order.
        std::vector<QVector> v(p.vertices().rbegin(), p.vertices().rend());
        auto simplices = detail::boundary_triangulation(v, 3);
        Rational total = 0;
        for (const auto& s : simplices) {
            QMatrix m;
            for (int i : s.verts) m.push_back(v[i] - v.back());
            Rational d = determinant(m);
            total += d < 0 ? Rational(-d) : d;
        }
        EXPECT_EQ(volume(p), total / 6);
    }
}

TEST(Polyhedra, MixedVolumeExamples) {
    QPolyhedron d2 = convex_hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})});
    EXPECT_EQ(mixed_volume({d2, d2}), Rational(1));
    EXPECT_EQ(mixed_volume({d2, d2}, Normalization::Normalized), Rational(1, 2));
    QPolyhedron sx = convex_hull(2, {qv({0, 0}), qv({1, 0})});
    QPolyhedron sy = convex_hull(2, {qv({0, 0}), qv({0, 1})});
    EXPECT_EQ(mixed_volume({sx, sy}), Rational(1));
}

TEST(Polyhedra, MixedVolumeProperties) {
    std::mt19937_64 rng(4);
    for (int it = 0; it < 10; ++it) {
        int n = 2 + it % 2;
        std::vector<QPolyhedron> ps;
        for (int i = 0; i < n; ++i) ps.push_back(random_polytope(rng, n, 5, 4));
        Rational mv = mixed_volume(ps);
        EXPECT_EQ(mv, oracle::mv_by_interpolation(ps));
        std::vector<QPolyhedron> rev(ps.rbegin(), ps.rend());
        EXPECT_EQ(mixed_volume(rev), mv);
        std::vector<QPolyhedron> same(n, ps[0]);
        EXPECT_EQ(mixed_volume(same), factorial(n) * volume(ps[0]));
        EXPECT_EQ(mixed_volume(same, Normalization::Normalized), volume(ps[0]));
    }
}

TEST(Polyhedra, Thickening) {
    QPolyhedron sq = convex_hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})});
    QPolyhedron t = epsilon_thicken(sq, Rational(1, 2));
    QVector lo{Rational(-1, 2), Rational(-1, 2)};
    EXPECT_EQ(t, convex_hull(2, {lo, QVector{Rational(3, 2), Rational(-1, 2)}, QVector{Rational(-1, 2), Rational(3, 2)},
                                 QVector{Rational(3, 2), Rational(3, 2)}}));
    QPolyhedron half = QPolyhedron::from_h(1, {{qv({-1}), -2}});
    QPolyhedron th = epsilon_thicken(half, Rational(1, 3));
    EXPECT_EQ(th.vertices(), std::vector<QVector>{QVector{Rational(5, 3)}});
}

TEST(Polyhedra, ThickeningContainsNeighbourhood) {
    std::mt19937_64 rng(12);
    for (int it = 0; it < 10; ++it) {
        QPolyhedron p = random_polytope(rng, 2, 6, 8);
        Rational eps(1, 3);
        QPolyhedron t = epsilon_thicken(p, eps);
        EXPECT_TRUE(t.contains(p));
        Rational maxnorm = 0;
        for (const auto& f : p.facets())
            for (const auto& x : f.a) maxnorm = std::max(maxnorm, Rational(abs(x)));
        // Points within eps/(2 max|u|) in the sup metric of any vertex.
        for (const auto& v : p.vertices())
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    Rational r = eps / (2 * maxnorm);
                    EXPECT_TRUE(t.contains(QVector{v[0] + dx * r, v[1] + dy * r}));
                }
    }
}

TEST(Polyhedra, FacesAndMonotonicity) {
    QPolyhedron sq = convex_hull(2, {qv({0, 0}), qv({2, 0}), qv({0, 2}), qv({2, 2})});
    EXPECT_TRUE(is_face_of(convex_hull(2, {qv({0, 0}), qv({2, 0})}), sq));
    EXPECT_FALSE(is_face_of(convex_hull(2, {qv({0, 0}), qv({1, 0})}), sq));
    EXPECT_TRUE(is_face_of(convex_hull(2, {qv({2, 2})}), sq));
    EXPECT_TRUE(is_face_of(sq, sq));
    std::mt19937_64 rng(31);
    for (int it = 0; it < 10; ++it) {
        QPolyhedron a = random_polytope(rng, 2, 5, 5), b = random_polytope(rng, 2, 5, 5);
        std::vector<QVector> va = a.vertices(), vb = b.vertices();
        auto extra = random_points(rng, 2, 3, 8);
        va.insert(va.end(), extra.begin(), extra.end());
        vb.insert(vb.end(), extra.begin(), extra.end());
        EXPECT_LE(mixed_volume({a, b}), mixed_volume({convex_hull(2, va), convex_hull(2, vb)}));
    }
}

TEST(Polyhedra, LowerHullQuintic) {
    std::vector<LiftedPoint> pts{{qv({1, 0}), 1}, {qv({5, 0}), 0}, {qv({0, 5}), 0}};
    auto faces = lower_hull_faces(pts);
    int counts[3] = {0, 0, 0};
    for (const auto& f : faces) ++counts[f.dim];
    EXPECT_EQ(counts[2], 1);
    EXPECT_EQ(counts[1], 3);
    EXPECT_EQ(counts[0], 3);
    auto facets = lower_hull(pts);
    ASSERT_EQ(facets.size(), 1u);
    EXPECT_EQ(facets[0].witness, (QVector{Rational(1, 4), Rational(1, 4)}));
}

TEST(Polyhedra, LowerHullIgnoresHighPoint) {
    std::vector<LiftedPoint> pts{{qv({0, 0}), 0}, {qv({2, 0}), 0}, {qv({0, 2}), 0}, {qv({1, 0}), 5}};
    for (const auto& f : lower_hull_faces(pts))
        EXPECT_EQ(std::count(f.indices.begin(), f.indices.end(), 3), 0);
}

TEST(Polyhedra, LowerHullGridOracle) {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 10; ++it) {
        std::vector<LiftedPoint> pts;
        std::set<QVector, QVectorLess> used;
        while (pts.size() < 7) {
            QVector e = random_points(rng, 2, 1, 3)[0];
            e[0] = Rational(abs(e[0]));
            e[1] = Rational(abs(e[1]));
            if (!used.insert(e).second) continue;
            pts.push_back({e, Rational(static_cast<long>(rng() % 7))});
        }
        auto faces = lower_hull_faces(pts);
        std::set<std::vector<int>> sets;
        for (const auto& f : faces) {
            sets.insert(f.indices);
            // The witness attains the minimum exactly on the face.
            Rational m = dot(f.witness, pts[0].point) + pts[0].height;
            for (const auto& q : pts) m = std::min(m, Rational(dot(f.witness, q.point) + q.height));
            std::vector<int> arg;
            for (int i = 0; i < 7; ++i)
                if (dot(f.witness, pts[i].point) + pts[i].height == m) arg.push_back(i);
            EXPECT_EQ(arg, f.indices);
        }
        for (int a = -12; a <= 12; ++a)
            for (int b = -12; b <= 12; ++b) {
                QVector nu{Rational(a) / 4, Rational(b) / 4};
                Rational m = dot(nu, pts[0].point) + pts[0].height;
                for (const auto& q : pts) m = std::min(m, Rational(dot(nu, q.point) + q.height));
                std::vector<int> arg;
                for (int i = 0; i < 7; ++i)
                    if (dot(nu, pts[i].point) + pts[i].height == m) arg.push_back(i);
                if (!sets.count(arg)) {
                    std::string msg;
                    for (const auto& q : pts) msg += to_string(q.point) + ":" + q.height.get_str() + " ";
                    msg += " arg:";
                    for (int i : arg) msg += std::to_string(i) + ",";
                    msg += " faces:";
                    for (const auto& s : sets) {
                        for (int i : s) msg += std::to_string(i) + ",";
                        msg += "|";
                    }
                    ADD_FAILURE() << msg;
                }
            }
    }
}
