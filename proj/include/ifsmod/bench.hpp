#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ifsmod/rng.hpp"
#include "ifsmod/session.hpp"

namespace ifsmod {

struct LatencyStats {
    std::size_t samples = 0;
    double median_ms = 0.0;
    double p99_ms = 0.0;
    double max_ms = 0.0;
};

inline LatencyStats summarize(std::vector<double> ms) {
    LatencyStats s;
    s.samples = ms.size();
    if (ms.empty()) return s;
    std::sort(ms.begin(), ms.end());
    const auto rank = [&](double q) {
        const auto i = static_cast<std::size_t>(q * static_cast<double>(ms.size() - 1) + 0.5);
        return ms[std::min(i, ms.size() - 1)];
    };
    s.median_ms = rank(0.5);
    s.p99_ms = rank(0.99);
    s.max_ms = ms.back();
    return s;
}

/**
 * Wall-clock cost of one interactive edit: move_vertex followed by a frame snapshot whose
 * point buffer is read end to end. Each edit drags a random vertex by up to 10% of the
 * base triangle's size; degenerate candidates are redrawn. The session ends where it began.
 */
inline LatencyStats measure_edit_latency(ModelingSession& session, std::size_t edits, std::uint64_t seed = 1) {
    const AffineBasis base = session.base_basis();
    const double size = std::max({distance(base.a, base.b), distance(base.b, base.c), distance(base.c, base.a)});
    Xorshift64Star rng(seed);
    std::vector<double> ms;
    ms.reserve(edits);
    volatile double sink = 0.0;
    for (std::size_t i = 0; i < edits; ++i) {
        const auto v = static_cast<VertexId>(rng() % 3);
        AffineBasis candidate = session.current_basis();
        Point2& target = candidate[static_cast<std::size_t>(v)];
        const Point2 home = base[static_cast<std::size_t>(v)];
        do {
            target = {home.x + 0.1 * size * (2.0 * rng.uniform() - 1.0),
                      home.y + 0.1 * size * (2.0 * rng.uniform() - 1.0)};
        } while (is_degenerate(candidate));

        const auto t0 = std::chrono::steady_clock::now();
        session.move_vertex(v, target);
        const Frame f = session.frame();
        double acc = 0.0;
        for (const auto& p : *f.points) acc += p.x;
        sink = acc;
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    (void)sink;
    session.set_basis(base);
    return summarize(std::move(ms));
}

}  // namespace ifsmod
