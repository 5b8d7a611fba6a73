#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/rng.hpp"

namespace ifsmod {

/// w(x) = A x + b, A stored row-major.
struct AffineMap2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;
    double b1 = 0.0, b2 = 0.0;

    friend constexpr bool operator==(const AffineMap2&, const AffineMap2&) = default;

    static constexpr AffineMap2 identity() { return {}; }

    constexpr double determinant() const { return a11 * a22 - a12 * a21; }

    bool is_finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22) && std::isfinite(b1) && std::isfinite(b2);
    }

    constexpr Point2 operator()(const Point2& p) const {
        return {a11 * p.x + a12 * p.y + b1, a21 * p.x + a22 * p.y + b2};
    }
};

constexpr Point2 apply_map(const AffineMap2& map, const Point2& p) { return map(p); }

/// `outer` after `inner`.
constexpr AffineMap2 compose(const AffineMap2& outer, const AffineMap2& inner) {
    return {outer.a11 * inner.a11 + outer.a12 * inner.a21,
            outer.a11 * inner.a12 + outer.a12 * inner.a22,
            outer.a21 * inner.a11 + outer.a22 * inner.a21,
            outer.a21 * inner.a12 + outer.a22 * inner.a22,
            outer.a11 * inner.b1 + outer.a12 * inner.b2 + outer.b1,
            outer.a21 * inner.b1 + outer.a22 * inner.b2 + outer.b2};
}

inline PointSet transform(const AffineMap2& map, std::span<const Point2> points) {
    PointSet out(points.size());
    std::transform(points.begin(), points.end(), out.begin(), map);
    return out;
}

/**
 * Lipschitz constant of the map under the Euclidean metric: the spectral norm of A,
 * i.e. the square root of the larger eigenvalue of A^T A, taken in closed form.
 */
inline double map_contractivity(const AffineMap2& map) {
    const double p = map.a11 * map.a11 + map.a21 * map.a21;
    const double r = map.a12 * map.a12 + map.a22 * map.a22;
    const double q = map.a11 * map.a12 + map.a21 * map.a22;
    const double half_trace = 0.5 * (p + r);
    const double lambda_max = half_trace + std::hypot(0.5 * (p - r), q);
    return std::sqrt(std::max(lambda_max, 0.0));
}

/**
 * An iterated function system: a nonempty ordered list of affine maps, optionally
 * with selection weights for the chaos game (uniform when absent).
 */
class IfsSystem {
public:
    static constexpr double kWeightSumTolerance = 1e-9;

    explicit IfsSystem(std::vector<AffineMap2> maps,
                       std::optional<std::vector<double>> weights = std::nullopt)
        : maps_(std::move(maps)), weights_(std::move(weights)) {
        if (maps_.empty()) throw InvalidArgument("IFS needs at least one map");
        for (std::size_t i = 0; i < maps_.size(); ++i) {
            if (!maps_[i].is_finite())
                throw InvalidArgument("map " + std::to_string(i) + " has a non-finite entry");
        }
        if (weights_) {
            if (weights_->size() != maps_.size())
                throw InvalidArgument("weight count differs from map count");
            double sum = 0.0;
            for (double w : *weights_) {
                if (!(w > 0.0) || !std::isfinite(w))
                    throw InvalidArgument("weights must be positive and finite");
                sum += w;
            }
            if (std::abs(sum - 1.0) > kWeightSumTolerance)
                throw InvalidArgument("weights sum to " + std::to_string(sum) + ", expected 1");
        }
    }

    /// Weights proportional to max(|det A_i|, 0.01), normalized to sum to 1.
    static IfsSystem with_determinant_weights(std::vector<AffineMap2> maps) {
        std::vector<double> weights;
        weights.reserve(maps.size());
        double total = 0.0;
        for (const auto& m : maps) {
            weights.push_back(std::max(std::abs(m.determinant()), 0.01));
            total += weights.back();
        }
        for (double& w : weights) w /= total;
        return IfsSystem(std::move(maps), std::move(weights));
    }

    const std::vector<AffineMap2>& maps() const { return maps_; }
    const std::optional<std::vector<double>>& weights() const { return weights_; }
    std::size_t size() const { return maps_.size(); }

    friend bool operator==(const IfsSystem&, const IfsSystem&) = default;

private:
    std::vector<AffineMap2> maps_;
    std::optional<std::vector<double>> weights_;
};

/// s = max_i s_i. Values >= 1 are reported, not rejected.
inline double system_contractivity(const IfsSystem& ifs) {
    double s = 0.0;
    for (const auto& m : ifs.maps()) s = std::max(s, map_contractivity(m));
    return s;
}

inline bool is_contractive(const IfsSystem& ifs) { return system_contractivity(ifs) < 1.0; }

struct ChaosParams {
    static constexpr std::size_t kDefaultBurnIn = 14;

    std::size_t n_points = 100000;
    std::size_t burn_in = kDefaultBurnIn;
    std::uint64_t seed = 0;
    std::optional<Point2> start{};
};

namespace detail {

// Draws a map index from one uniform variate u in [0, 1):
// uniform systems take floor(u * n); weighted ones take the first k with u < cumsum_k.
class MapSelector {
public:
    explicit MapSelector(const IfsSystem& ifs) : count_(ifs.size()) {
        if (const auto& w = ifs.weights()) {
            cumulative_.reserve(w->size());
            double acc = 0.0;
            for (double v : *w) cumulative_.push_back(acc += v);
        }
    }

    std::size_t operator()(double u) const {
        if (cumulative_.empty())
            return std::min(count_ - 1, static_cast<std::size_t>(u * static_cast<double>(count_)));
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return it == cumulative_.end() ? count_ - 1
                                       : static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::size_t count_;
    std::vector<double> cumulative_;
};

}  // namespace detail

/**
 * Random-iteration rendering of the attractor.
 *
 * Starting from `params.start` (default origin), each step draws one uniform variate from
 * Xorshift64Star(params.seed), selects a map with it and applies the map. The first
 * `burn_in` orbit points are dropped; the next `n_points` are returned in generation order.
 * The output depends only on (ifs, params).
 */
inline PointSet chaos_game(const IfsSystem& ifs, const ChaosParams& params) {
    if (params.n_points == 0) throw InvalidArgument("chaos game needs n_points >= 1");
    Point2 p = params.start.value_or(Point2{});
    if (!is_finite(p)) throw InvalidArgument("chaos game start point is not finite");

    const detail::MapSelector select(ifs);
    const auto& maps = ifs.maps();
    Xorshift64Star rng(params.seed);

    PointSet out;
    out.reserve(params.n_points);
    const std::size_t total = params.burn_in + params.n_points;
    for (std::size_t i = 0; i < total; ++i) {
        p = maps[select(rng.uniform())](p);
        if (i < params.burn_in) continue;
        if (!is_finite(p))
            throw Error("chaos game orbit diverged at iteration " + std::to_string(i));
        out.push_back(p);
    }
    return out;
}

/// Chaos game output plus contractivity diagnostics.
struct AttractorSample {
    PointSet points;
    double contractivity = 0.0;
    bool contractive = true;  // false: s >= 1, the sample may not approximate an attractor
};

inline AttractorSample sample_attractor(const IfsSystem& ifs, const ChaosParams& params) {
    const double s = system_contractivity(ifs);
    return {chaos_game(ifs, params), s, s < 1.0};
}

/// W(S) = w_1(S) ∪ ... ∪ w_n(S), concatenated in map order, then point order.
inline PointSet hutchinson_step(const IfsSystem& ifs, std::span<const Point2> points) {
    PointSet out;
    out.reserve(ifs.size() * points.size());
    for (const auto& m : ifs.maps())
        for (const auto& p : points) out.push_back(m(p));
    return out;
}

namespace detail {

// Exact nearest-neighbour queries on a uniform bucket grid. Cells are sized for about two
// points each over the bounding box, capped at 2048 per axis; sets far beyond 1e6 points that
// crowd a small part of their box end up with full buckets and slow queries.
class BucketGrid {
public:
    explicit BucketGrid(std::span<const Point2> points) : points_(points) {
        double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
        for (const auto& p : points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        origin_ = {xmin, ymin};
        const double w = xmax - xmin;
        const double h = ymax - ymin;
        const double target = std::max(1.0, static_cast<double>(points.size()) / 2.0);
        if (w > 0.0 && h > 0.0) {
            cell_ = std::sqrt(w * h / target);
        } else if (w > 0.0 || h > 0.0) {
            cell_ = std::max(w, h) / target;
        } else {
            cell_ = 1.0;
        }
        constexpr double kMaxCells = 2048.0;
        nx_ = static_cast<std::size_t>(std::clamp(std::floor(w / cell_) + 1.0, 1.0, kMaxCells));
        ny_ = static_cast<std::size_t>(std::clamp(std::floor(h / cell_) + 1.0, 1.0, kMaxCells));
        cell_ = std::max({cell_, w / static_cast<double>(nx_), h / static_cast<double>(ny_)});

        // Counting sort into CSR buckets.
        start_.assign(nx_ * ny_ + 1, 0);
        std::vector<std::size_t> cell_of(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            cell_of[i] = index(clamp_x(points[i].x), clamp_y(points[i].y));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 0; c < nx_ * ny_; ++c) start_[c + 1] += start_[c];
        order_.resize(points.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cell_of[i]]++] = i;
    }

    /// Squared distance from q to its nearest indexed point.
    double nearest_squared(const Point2& q) const {
        const auto cx = static_cast<std::ptrdiff_t>(clamp_x(q.x));
        const auto cy = static_cast<std::ptrdiff_t>(clamp_y(q.y));
        const auto nx = static_cast<std::ptrdiff_t>(nx_);
        const auto ny = static_cast<std::ptrdiff_t>(ny_);
        const std::ptrdiff_t max_ring = std::max({cx, nx - 1 - cx, cy, ny - 1 - cy});
        double best = std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t r = 0; r <= max_ring; ++r) {
            for (std::ptrdiff_t iy = cy - r; iy <= cy + r; ++iy) {
                if (iy < 0 || iy >= ny) continue;
                const bool edge_row = (iy == cy - r || iy == cy + r);
                const std::ptrdiff_t step = (edge_row || r == 0) ? 1 : 2 * r;
                for (std::ptrdiff_t ix = cx - r; ix <= cx + r; ix += step) {
                    if (ix < 0 || ix >= nx) continue;
                    scan(index(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy)), q, best);
                }
            }
            // Cells beyond ring r are at least r * cell_ away from q along one axis.
            const double reach = static_cast<double>(r) * cell_;
            if (best <= reach * reach) break;
        }
        return best;
    }

private:
    std::size_t clamp_x(double x) const { return clamp_axis((x - origin_.x) / cell_, nx_); }
    std::size_t clamp_y(double y) const { return clamp_axis((y - origin_.y) / cell_, ny_); }

    static std::size_t clamp_axis(double t, std::size_t n) {
        if (!(t > 0.0)) return 0;
        const double f = std::floor(t);
        return f >= static_cast<double>(n - 1) ? n - 1 : static_cast<std::size_t>(f);
    }

    std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx_ + ix; }

    void scan(std::size_t cell, const Point2& q, double& best) const {
        for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) {
            const Point2& p = points_[order_[k]];
            const double dx = p.x - q.x;
            const double dy = p.y - q.y;
            best = std::min(best, dx * dx + dy * dy);
        }
    }

    std::span<const Point2> points_;
    Point2 origin_;
    double cell_ = 1.0;
    std::size_t nx_ = 1, ny_ = 1;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> order_;
};

}  // namespace detail

/// max_{p in from} min_{q in to} |p - q|.
inline double directed_hausdorff(std::span<const Point2> from, std::span<const Point2> to) {
    if (from.empty() || to.empty()) throw InvalidArgument("Hausdorff distance of an empty set");
    const detail::BucketGrid grid(to);
    double worst = 0.0;
    for (const auto& p : from) worst = std::max(worst, grid.nearest_squared(p));
    return std::sqrt(worst);
}

/// Hausdorff distance between two finite point sets (exact, grid-accelerated).
inline double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace ifsmod
