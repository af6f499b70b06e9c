#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "troppadic/rational.hpp"

namespace troppadic {

using QMatrix = std::vector<QVector>;  // row-major

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<int> rref(QMatrix& m, int ncols) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < ncols && r < static_cast<int>(m.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        Rational inv = 1 / m[r][c];
        for (int j = c; j < ncols; ++j) m[r][j] *= inv;
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (int j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

inline int rank(QMatrix m, int ncols) { return static_cast<int>(rref(m, ncols).size()); }

// Basis of {x : m x = 0}.
inline QMatrix nullspace(QMatrix m, int ncols) {
    std::vector<int> piv = rref(m, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (int c : piv) is_piv[c] = true;
    QMatrix out;
    for (int f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        QVector x(ncols, Rational(0));
        x[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m[r][f];
        out.push_back(x);
    }
    return out;
}

// Some solution of a x = b, or nullopt when inconsistent.
inline std::optional<QVector> solve(const QMatrix& a, const QVector& b, int ncols) {
    QMatrix aug;
    for (std::size_t i = 0; i < a.size(); ++i) {
        QVector row = a[i];
        row.push_back(b[i]);
        aug.push_back(row);
    }
    std::vector<int> piv = rref(aug, ncols + 1);
    if (!piv.empty() && piv.back() == ncols) return std::nullopt;
    QVector x(ncols, Rational(0));
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][ncols];
    return x;
}

inline Rational determinant(QMatrix m) {
    int n = static_cast<int>(m.size());
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// Affine hull of a point set: a base point, a basis of the direction space
// (in reduced echelon form) and its pivot coordinates.
struct AffineHull {
    QVector base;
    QMatrix directions;
    std::vector<int> pivots;
    int dim() const { return static_cast<int>(directions.size()); }
};

inline AffineHull affine_hull(const std::vector<QVector>& pts, int n) {
    AffineHull h;
    if (pts.empty()) return h;
    h.base = pts[0];
    QMatrix d;
    for (std::size_t i = 1; i < pts.size(); ++i) d.push_back(pts[i] - pts[0]);
    h.pivots = rref(d, n);
    h.directions = d;
    return h;
}

// Span of vectors, in reduced echelon form.
inline QMatrix span_basis(QMatrix vs, int n) {
    rref(vs, n);
    return vs;
}

// Basis of the orthogonal complement of span(vs).
inline QMatrix orthogonal_complement(const QMatrix& vs, int n) { return nullspace(vs, n); }

}  // namespace troppadic
