#pragma once

// Independent reference implementations used only by the tests. None of these call into
// the code paths they are used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ifsmod/ifsmod.hpp"

namespace oracle {

using ifsmod::AffineBasis;
using ifsmod::AffineMap2;
using ifsmod::BaryCoord;
using ifsmod::Point2;
using ifsmod::PointSet;

inline Eigen::Matrix2d matrix(const AffineMap2& m) {
    Eigen::Matrix2d a;
    a << m.a11, m.a12, m.a21, m.a22;
    return a;
}

/// Largest singular value by Eigen's SVD.
inline double spectral_norm(const AffineMap2& m) {
    return Eigen::JacobiSVD<Eigen::Matrix2d>(matrix(m)).singularValues()(0);
}

/// Largest eigenvalue of A^T A by Eigen's self-adjoint solver, square-rooted.
inline double spectral_norm_eig(const AffineMap2& m) {
    const Eigen::Matrix2d a = matrix(m);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a.transpose() * a);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

inline Point2 apply(const AffineMap2& m, const Point2& p) {
    const Eigen::Vector2d r = matrix(m) * Eigen::Vector2d(p.x, p.y) + Eigen::Vector2d(m.b1, m.b2);
    return {r.x(), r.y()};
}

/// Solves T (a, b, c)^T = (x, y, 1)^T with a pivoted LU.
inline BaryCoord barycentric(const AffineBasis& basis, const Point2& p) {
    Eigen::Matrix3d t;
    t << basis.a.x, basis.b.x, basis.c.x, basis.a.y, basis.b.y, basis.c.y, 1, 1, 1;
    const Eigen::Vector3d s = t.fullPivLu().solve(Eigen::Vector3d(p.x, p.y, 1.0));
    return {s(0), s(1), s(2)};
}

/// Affine map from the six equations old_i -> new_i, solved as one 6x6 system.
inline AffineMap2 map_from_correspondences(const AffineBasis& from, const AffineBasis& to) {
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> rhs;
    for (int i = 0; i < 3; ++i) {
        const Point2& p = from[static_cast<std::size_t>(i)];
        const Point2& q = to[static_cast<std::size_t>(i)];
        // unknowns: a11 a12 b1 a21 a22 b2
        m.row(2 * i) << p.x, p.y, 1, 0, 0, 0;
        m.row(2 * i + 1) << 0, 0, 0, p.x, p.y, 1;
        rhs(2 * i) = q.x;
        rhs(2 * i + 1) = q.y;
    }
    const Eigen::Matrix<double, 6, 1> u = m.fullPivLu().solve(rhs);
    return {u(0), u(1), u(3), u(4), u(2), u(5)};
}

/// Twice the signed area from the cross product (B - A) x (C - A).
inline double twice_signed_area(const AffineBasis& b) {
    return (b.b.x - b.a.x) * (b.c.y - b.a.y) - (b.b.y - b.a.y) * (b.c.x - b.a.x);
}

/// Plain chaos game on std::mt19937_64, uniform map choice.
inline PointSet chaos_game(const std::vector<AffineMap2>& maps, std::size_t n, std::size_t burn_in,
                           std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick(0, maps.size() - 1);
    Point2 p{0.0, 0.0};
    PointSet out;
    out.reserve(n);
    for (std::size_t i = 0; i < n + burn_in; ++i) {
        const AffineMap2& m = maps[pick(gen)];
        p = {m.a11 * p.x + m.a12 * p.y + m.b1, m.a21 * p.x + m.a22 * p.y + m.b2};
        if (i >= burn_in) out.push_back(p);
    }
    return out;
}

struct Box {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    double max_sum = -std::numeric_limits<double>::infinity();  // max of x + y
};

/// Long-run bounds of the orbit, streaming (no point storage).
inline Box deep_iteration_box(const std::vector<AffineMap2>& maps, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick(0, maps.size() - 1);
    Point2 p{0.0, 0.0};
    Box b;
    for (std::size_t i = 0; i < n + 14; ++i) {
        const AffineMap2& m = maps[pick(gen)];
        p = {m.a11 * p.x + m.a12 * p.y + m.b1, m.a21 * p.x + m.a22 * p.y + m.b2};
        if (i < 14) continue;
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
        b.max_sum = std::max(b.max_sum, p.x + p.y);
    }
    return b;
}

/// O(|a| |b|) Hausdorff distance.
inline double hausdorff(const PointSet& a, const PointSet& b) {
    const auto directed = [](const PointSet& from, const PointSet& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

inline std::vector<AffineMap2> flower_maps() {
    return {{0.47, 0.30, -0.30, 0.47, 0.37, 1.74}, {0.48, -0.29, 0.29, 0.48, -0.34, 1.75}};
}

inline std::vector<AffineMap2> maple_maps() {
    return {{-0.04, 0, -0.23, -0.65, -0.08, 0.26},
            {0.61, 0, 0, 0.31, 0.07, 3.5},
            {0.65, 0.29, -0.3, 0.48, 0.74, 0.39},
            {0.64, -0.3, 0.16, 0.56, -0.56, 0.60}};
}

inline std::vector<AffineMap2> sierpinski_maps() {
    return {{0.5, 0, 0, 0.5, 0, 0}, {0.5, 0, 0, 0.5, 0.5, 0}, {0.5, 0, 0, 0.5, 0, 0.5}};
}

/// Random well-conditioned triangle: each vertex within `spread` of a random centre and
/// |det T| at least 10% of spread^2.
template <typename Gen>
AffineBasis random_basis(Gen& gen, double spread = 10.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Point2 centre{100.0 * u(gen), 100.0 * u(gen)};
    while (true) {
        AffineBasis b{centre + Point2{spread * u(gen), spread * u(gen)},
                      centre + Point2{spread * u(gen), spread * u(gen)},
                      centre + Point2{spread * u(gen), spread * u(gen)}};
        if (std::abs(twice_signed_area(b)) > 0.1 * spread * spread) return b;
    }
}

}  // namespace oracle
