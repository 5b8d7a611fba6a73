#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/ifs.hpp"

namespace ifsmod {

/// Ordered control triangle {A, B, C}. Non-collinearity is checked where it matters.
struct AffineBasis {
    Point2 a;
    Point2 b;
    Point2 c;

    friend constexpr bool operator==(const AffineBasis&, const AffineBasis&) = default;

    constexpr Point2& operator[](std::size_t i) { return i == 0 ? a : (i == 1 ? b : c); }
    constexpr const Point2& operator[](std::size_t i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

/// Barycentric (affine) coordinates; a + b + c = 1.
struct BaryCoord {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    friend constexpr bool operator==(const BaryCoord&, const BaryCoord&) = default;
};

using BarySet = std::vector<BaryCoord>;

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// T = [[a1 b1 c1], [a2 b2 c2], [1 1 1]]: barycentric -> homogeneous rectangular.
constexpr Matrix3 basis_matrix(const AffineBasis& basis) {
    return {{{basis.a.x, basis.b.x, basis.c.x},
             {basis.a.y, basis.b.y, basis.c.y},
             {1.0, 1.0, 1.0}}};
}

/// det T = a1 b2 - b1 a2 + b1 c2 - c1 b2 + c1 a2 - a1 c2 (twice the signed area of ABC).
constexpr double basis_determinant(const AffineBasis& basis) {
    const auto& [a1, a2] = basis.a;
    const auto& [b1, b2] = basis.b;
    const auto& [c1, c2] = basis.c;
    return a1 * b2 - b1 * a2 + b1 * c2 - c1 * b2 + c1 * a2 - a1 * c2;
}

/// Scale-aware collinearity threshold: 1e-9 * max(1, L^2), L the longest side.
inline double degeneracy_tolerance(const AffineBasis& basis) {
    const double longest =
        std::max({distance(basis.a, basis.b), distance(basis.b, basis.c), distance(basis.c, basis.a)});
    return 1e-9 * std::max(1.0, longest * longest);
}

inline bool is_degenerate(const AffineBasis& basis) {
    return !(std::abs(basis_determinant(basis)) > degeneracy_tolerance(basis));
}

inline void require_nondegenerate(const AffineBasis& basis) {
    const double det = basis_determinant(basis);
    const double tol = degeneracy_tolerance(basis);
    if (!(std::abs(det) > tol)) throw DegenerateBasis(det, tol);
}

/**
 * Rectangular -> barycentric conversion for one fixed basis. Holds T^-1 written out as
 * the adjugate of T over det T, so each point costs six multiply-adds and three scalings.
 */
class BarycentricFrame {
public:
    explicit BarycentricFrame(const AffineBasis& basis) {
        require_nondegenerate(basis);
        const auto& [a1, a2] = basis.a;
        const auto& [b1, b2] = basis.b;
        const auto& [c1, c2] = basis.c;
        const double inv = 1.0 / basis_determinant(basis);
        inverse_ = {{{(b2 - c2) * inv, (c1 - b1) * inv, (b1 * c2 - b2 * c1) * inv},
                     {(c2 - a2) * inv, (a1 - c1) * inv, (a2 * c1 - a1 * c2) * inv},
                     {(a2 - b2) * inv, (b1 - a1) * inv, (a1 * b2 - a2 * b1) * inv}}};
    }

    /// T^-1.
    const Matrix3& inverse() const { return inverse_; }

    BaryCoord operator()(const Point2& p) const {
        const auto row = [&](std::size_t i) {
            return inverse_[i][0] * p.x + inverse_[i][1] * p.y + inverse_[i][2];
        };
        return {row(0), row(1), row(2)};
    }

private:
    Matrix3 inverse_{};
};

inline BaryCoord to_barycentric(const AffineBasis& basis, const Point2& p) {
    return BarycentricFrame(basis)(p);
}

constexpr Point2 from_barycentric(const AffineBasis& basis, const BaryCoord& q) {
    return {q.a * basis.a.x + q.b * basis.b.x + q.c * basis.c.x,
            q.a * basis.a.y + q.b * basis.b.y + q.c * basis.c.y};
}

inline BarySet to_barycentric_set(const AffineBasis& basis, std::span<const Point2> points) {
    const BarycentricFrame frame(basis);
    BarySet out(points.size());
    std::transform(points.begin(), points.end(), out.begin(), frame);
    return out;
}

inline PointSet from_barycentric_set(const AffineBasis& basis, std::span<const BaryCoord> coords) {
    PointSet out(coords.size());
    std::transform(coords.begin(), coords.end(), out.begin(),
                   [&basis](const BaryCoord& q) { return from_barycentric(basis, q); });
    return out;
}

/**
 * The unique affine map sending old.a, old.b, old.c to next.a, next.b, next.c: the top
 * two rows of T_next * T_old^-1. `next` may be degenerate (the map is then singular).
 */
inline AffineMap2 retarget_map(const AffineBasis& old, const AffineBasis& next) {
    const Matrix3 inv = BarycentricFrame(old).inverse();
    const Matrix3 t = basis_matrix(next);
    const auto entry = [&](std::size_t i, std::size_t j) {
        return t[i][0] * inv[0][j] + t[i][1] * inv[1][j] + t[i][2] * inv[2][j];
    };
    return {entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1), entry(0, 2), entry(1, 2)};
}

inline AffineBasis transform(const AffineMap2& map, const AffineBasis& basis) {
    return {map(basis.a), map(basis.b), map(basis.c)};
}

}  // namespace ifsmod
