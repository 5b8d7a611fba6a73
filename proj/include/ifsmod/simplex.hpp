#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "ifsmod/barycentric.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/ifs.hpp"

namespace ifsmod {

struct Box2 {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    friend constexpr bool operator==(const Box2&, const Box2&) = default;

    constexpr double width() const { return xmax - xmin; }
    constexpr double height() const { return ymax - ymin; }
    constexpr Point2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }

    constexpr bool contains(const Point2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }

    constexpr Box2& expand(const Point2& p) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
        return *this;
    }

    /// Grown by `frac` of its width/height on every side.
    constexpr Box2 padded(double frac) const {
        const double dx = frac * width();
        const double dy = frac * height();
        return {xmin - dx, ymin - dy, xmax + dx, ymax + dy};
    }
};

inline Box2 bounding_box(std::span<const Point2> points) {
    if (points.empty()) throw InvalidArgument("bounding box of an empty set");
    Box2 box{points[0].x, points[0].y, points[0].x, points[0].y};
    for (const auto& p : points) box.expand(p);
    return box;
}

/// Which box corner holds the right angle; the legs run into the box from there.
enum class SimplexCorner { LowerLeft, LowerRight, UpperLeft, UpperRight };

/**
 * Isosceles right triangle with axis-parallel legs of length `leg`, right angle at
 * `corner`, legs pointing along (sx, 0) and (0, sy).
 */
struct CanonicalSimplex {
    Point2 corner;
    double leg = 0.0;
    double sx = 1.0;
    double sy = 1.0;

    AffineBasis basis() const {
        return {corner, {corner.x + sx * leg, corner.y}, {corner.x, corner.y + sy * leg}};
    }

    double area() const { return 0.5 * leg * leg; }
};

// A right isosceles triangle with leg L has |det T| = L^2, and the degeneracy floor is 1e-9.
inline constexpr double kMinSimplexLeg = 1e-4;

/**
 * Smallest isosceles right triangle with axis-parallel legs containing every point, right
 * angle at the chosen corner of the bounding box (default: (xmin, ymin), legs toward +x, +y).
 *
 * The leg is max over points of sx(x - cx) + sy(y - cy): the hypotenuse is the only binding
 * constraint once the corner sits on the box. Tiny clouds get the leg padded up to
 * max(1e-6 * max(1, |cx|, |cy|), kMinSimplexLeg), which keeps the result clear of the
 * degeneracy tolerance so it is always usable as a basis.
 */
inline CanonicalSimplex canonical_simplex(std::span<const Point2> points,
                                          SimplexCorner where = SimplexCorner::LowerLeft) {
    const Box2 box = bounding_box(points);
    CanonicalSimplex s;
    switch (where) {
        case SimplexCorner::LowerLeft: s.corner = {box.xmin, box.ymin}; s.sx = 1; s.sy = 1; break;
        case SimplexCorner::LowerRight: s.corner = {box.xmax, box.ymin}; s.sx = -1; s.sy = 1; break;
        case SimplexCorner::UpperLeft: s.corner = {box.xmin, box.ymax}; s.sx = 1; s.sy = -1; break;
        case SimplexCorner::UpperRight: s.corner = {box.xmax, box.ymax}; s.sx = -1; s.sy = -1; break;
    }
    double leg = 0.0;
    for (const auto& p : points)
        leg = std::max(leg, s.sx * (p.x - s.corner.x) + s.sy * (p.y - s.corner.y));
    const double pad = 1e-6 * std::max({1.0, std::abs(s.corner.x), std::abs(s.corner.y)});
    s.leg = std::max({leg, pad, kMinSimplexLeg});
    return s;
}

inline AffineBasis minimal_canonical_simplex(std::span<const Point2> points,
                                             SimplexCorner where = SimplexCorner::LowerLeft) {
    return canonical_simplex(points, where).basis();
}

/// Minimal canonical simplex of the preattractor produced by `chaos_game(ifs, params)`.
/// Use n_points >= 1e5 for a usable approximation of the attractor's simplex.
inline AffineBasis simplex_for_ifs(const IfsSystem& ifs, const ChaosParams& params,
                                   SimplexCorner where = SimplexCorner::LowerLeft) {
    return minimal_canonical_simplex(chaos_game(ifs, params), where);
}

}  // namespace ifsmod
