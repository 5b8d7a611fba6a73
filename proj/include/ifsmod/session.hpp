#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>

#include "ifsmod/barycentric.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/ifs.hpp"
#include "ifsmod/simplex.hpp"

namespace ifsmod {

enum class VertexId { A = 0, B = 1, C = 2 };

inline constexpr std::string_view to_string(VertexId v) {
    switch (v) {
        case VertexId::A: return "A";
        case VertexId::B: return "B";
        case VertexId::C: return "C";
    }
    return "?";
}

inline std::optional<VertexId> parse_vertex(std::string_view s) {
    if (s == "A" || s == "a") return VertexId::A;
    if (s == "B" || s == "b") return VertexId::B;
    if (s == "C" || s == "c") return VertexId::C;
    return std::nullopt;
}

/// The control triangle is given explicitly (e.g. defined by three clicks).
struct UserTriangle {
    AffineBasis basis;
};

/// The control triangle is the minimal canonical simplex of the generated points.
struct MinimalSimplex {
    SimplexCorner corner = SimplexCorner::LowerLeft;
};

using BasisMode = std::variant<UserTriangle, MinimalSimplex>;

struct Telemetry {
    double determinant = 0.0;  // det T of the current basis
    std::size_t point_count = 0;
    std::chrono::nanoseconds last_update{0};
    std::uint64_t revision = 0;  // number of accepted edits
};

/// Immutable snapshot handed to renderers; cheap to copy.
struct Frame {
    std::shared_ptr<const PointSet> points;
    AffineBasis basis;
    Telemetry telemetry;
};

/**
 * Interactive modeling state. Points are generated once against the base basis and their
 * barycentric coordinates cached; every accepted vertex edit re-emits the whole cloud as
 * the image of the base points under retarget_map(base, current).
 *
 * One editor thread may call move_vertex/set_basis while any number of readers call
 * frame(); readers always see a complete pre- or post-edit snapshot.
 */
class ModelingSession {
public:
    ModelingSession(IfsSystem ifs, const ChaosParams& params, const BasisMode& mode)
        : ifs_(std::move(ifs)), params_(params) {
        const auto* user = std::get_if<UserTriangle>(&mode);
        if (user) require_nondegenerate(user->basis);
        base_points_ = chaos_game(ifs_, params_);
        base_basis_ = user ? user->basis
                           : minimal_canonical_simplex(base_points_, std::get<MinimalSimplex>(mode).corner);
        bary_cache_ = to_barycentric_set(base_basis_, base_points_);
        current_ = Frame{std::make_shared<const PointSet>(base_points_), base_basis_,
                         Telemetry{basis_determinant(base_basis_), base_points_.size(), {}, 0}};
    }

    ModelingSession(const ModelingSession&) = delete;
    ModelingSession& operator=(const ModelingSession&) = delete;

    const IfsSystem& ifs() const { return ifs_; }
    const ChaosParams& params() const { return params_; }
    const AffineBasis& base_basis() const { return base_basis_; }
    const BarySet& bary_cache() const { return bary_cache_; }
    const PointSet& base_points() const { return base_points_; }
    double contractivity() const { return system_contractivity(ifs_); }

    /// Current snapshot. Safe to call concurrently with an edit.
    Frame frame() const {
        std::lock_guard lock(mutex_);
        return current_;
    }

    AffineBasis current_basis() const { return frame().basis; }

    /// Moves one vertex. Throws DegenerateBasis and leaves the state untouched when the
    /// resulting triangle is collinear.
    Frame move_vertex(VertexId v, const Point2& position) {
        AffineBasis next = current_basis();
        next[static_cast<std::size_t>(v)] = position;
        return set_basis(next);
    }

    /// Replaces the whole control triangle (same contract as move_vertex).
    Frame set_basis(const AffineBasis& next) {
        if (!is_finite(next.a) || !is_finite(next.b) || !is_finite(next.c))
            throw InvalidArgument("basis vertices must be finite");
        require_nondegenerate(next);
        const auto started = std::chrono::steady_clock::now();
        auto points = std::make_shared<const PointSet>(transform(retarget_map(base_basis_, next), base_points_));
        const auto elapsed = std::chrono::steady_clock::now() - started;

        std::lock_guard lock(mutex_);
        current_ = Frame{std::move(points), next,
                         Telemetry{basis_determinant(next), base_points_.size(),
                                   std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed),
                                   current_.telemetry.revision + 1}};
        return current_;
    }

    /// Nearest vertex within `radius` of the cursor; ties go to the earlier vertex (A < B < C).
    std::optional<VertexId> hit_test(const Point2& cursor, double radius) const {
        if (!(radius > 0.0)) throw InvalidArgument("hit radius must be positive");
        const AffineBasis basis = current_basis();
        std::optional<VertexId> hit;
        double best = radius;
        for (std::size_t i = 0; i < 3; ++i) {
            const double d = distance(cursor, basis[i]);
            if (d < best || (!hit && d <= best)) {
                best = d;
                hit = static_cast<VertexId>(i);
            }
        }
        return hit;
    }

private:
    IfsSystem ifs_;
    ChaosParams params_;
    PointSet base_points_;
    AffineBasis base_basis_;
    BarySet bary_cache_;

    mutable std::mutex mutex_;
    Frame current_;
};

}  // namespace ifsmod
