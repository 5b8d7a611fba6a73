#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <thread>

#include "ifsmod/session.hpp"
#include "oracles.hpp"

using namespace ifsmod;

namespace {

const ChaosParams kParams{.n_points = 20000, .seed = 42};
const AffineBasis kTriangle{{0, 0}, {4, 0}, {0, 4}};

IfsSystem flower() { return IfsSystem(oracle::flower_maps()); }

double defining_identity_error(const ModelingSession& s) {
    const Frame f = s.frame();
    const PointSet ref = from_barycentric_set(f.basis, s.bary_cache());
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const Point2& p = (*f.points)[i];
        worst = std::max(worst, std::abs(p.x - ref[i].x) / (1 + std::abs(ref[i].x)));
        worst = std::max(worst, std::abs(p.y - ref[i].y) / (1 + std::abs(ref[i].y)));
    }
    return worst;
}

}  // namespace

TEST(InitSession, UserTriangle) {
    const ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    const Frame f = s.frame();
    EXPECT_EQ(f.basis, kTriangle);
    EXPECT_EQ(s.base_basis(), kTriangle);
    EXPECT_EQ(f.telemetry.revision, 0u);
    EXPECT_EQ(f.telemetry.point_count, kParams.n_points);
    EXPECT_EQ(f.telemetry.determinant, 16.0);
    EXPECT_EQ(s.bary_cache().size(), kParams.n_points);
    EXPECT_EQ(*f.points, chaos_game(flower(), kParams));
    EXPECT_LE(defining_identity_error(s), 1e-9);
}

TEST(InitSession, MinimalSimplexMode) {
    const IfsSystem maple(oracle::maple_maps());
    const ModelingSession s(maple, kParams, MinimalSimplex{});
    EXPECT_EQ(s.base_basis(), simplex_for_ifs(maple, kParams));
}

TEST(InitSession, DegenerateTriangleRejected) {
    EXPECT_THROW(ModelingSession(flower(), kParams, UserTriangle{{{0, 0}, {1, 1}, {2, 2}}}), DegenerateBasis);
    EXPECT_THROW(ModelingSession(flower(), {.n_points = 0}, UserTriangle{kTriangle}), InvalidArgument);
}

TEST(MoveVertex, MoveAndReturnRestoresPoints) {
    ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    const PointSet start = *s.frame().points;
    s.move_vertex(VertexId::B, {6.5, 1.25});
    EXPECT_NE(*s.frame().points, start);
    s.move_vertex(VertexId::B, kTriangle.b);
    const PointSet back = *s.frame().points;
    for (std::size_t i = 0; i < start.size(); ++i) {
        ASSERT_NEAR(back[i].x, start[i].x, 1e-9);
        ASSERT_NEAR(back[i].y, start[i].y, 1e-9);
    }
    EXPECT_EQ(s.frame().telemetry.revision, 2u);
}

TEST(MoveVertex, TranslatingAllVerticesTranslatesCloud) {
    ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    const PointSet start = *s.frame().points;
    const Point2 d{-3.25, 7.5};
    s.move_vertex(VertexId::A, kTriangle.a + d);
    s.move_vertex(VertexId::B, kTriangle.b + d);
    s.move_vertex(VertexId::C, kTriangle.c + d);
    const PointSet moved = *s.frame().points;
    for (std::size_t i = 0; i < start.size(); ++i) {
        ASSERT_NEAR(moved[i].x, start[i].x + d.x, 1e-9);
        ASSERT_NEAR(moved[i].y, start[i].y + d.y, 1e-9);
    }
}

TEST(MoveVertex, ScalingAboutOriginDoublesCoordinates) {
    const AffineBasis tri{{1, 1}, {5, 2}, {2, 6}};
    ModelingSession s(flower(), kParams, UserTriangle{tri});
    const PointSet start = *s.frame().points;
    for (std::size_t i = 0; i < 3; ++i) s.move_vertex(static_cast<VertexId>(i), 2.0 * tri[i]);
    const PointSet doubled = transform(AffineMap2{2, 0, 0, 2, 0, 0}, start);
    const PointSet got = *s.frame().points;
    for (std::size_t i = 0; i < start.size(); ++i) {
        ASSERT_NEAR(got[i].x, doubled[i].x, 1e-9);
        ASSERT_NEAR(got[i].y, doubled[i].y, 1e-9);
    }
}

TEST(MoveVertex, DegenerateEditIsTransactional) {
    ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    s.move_vertex(VertexId::C, {1, 5});
    const Frame before = s.frame();
    const PointSet points_before = *before.points;
    try {
        s.move_vertex(VertexId::C, {8, 0});  // on the line through A and B
        FAIL() << "expected DegenerateBasis";
    } catch (const DegenerateBasis& e) {
        EXPECT_EQ(e.determinant(), 0.0);
    }
    const Frame after = s.frame();
    EXPECT_EQ(after.basis, before.basis);
    EXPECT_EQ(after.points, before.points);
    EXPECT_EQ(*after.points, points_before);
    EXPECT_EQ(after.telemetry.revision, before.telemetry.revision);
    EXPECT_THROW(s.move_vertex(VertexId::A, {NAN, 0}), InvalidArgument);
}

TEST(MoveVertex, FuzzedEditsKeepDefiningIdentityWithoutDrift) {
    ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<int> vertex(0, 2);
    int accepted = 0;
    for (int i = 0; i < 100; ++i) {
        try {
            s.move_vertex(static_cast<VertexId>(vertex(gen)), {u(gen), u(gen)});
            ++accepted;
        } catch (const DegenerateBasis&) {
        }
        ASSERT_LE(defining_identity_error(s), 1e-9) << "edit " << i;
        // Hot path vs. per-point reconversion of the raw points.
        const Frame f = s.frame();
        const PointSet ref = from_barycentric_set(f.basis, to_barycentric_set(s.base_basis(), s.base_points()));
        for (std::size_t k = 0; k < ref.size(); k += 97) {
            ASSERT_NEAR((*f.points)[k].x, ref[k].x, 1e-9 * (1 + std::abs(ref[k].x)));
            ASSERT_NEAR((*f.points)[k].y, ref[k].y, 1e-9 * (1 + std::abs(ref[k].y)));
        }
    }
    EXPECT_GT(accepted, 90);

    // Composition: the same final basis reached in one step gives the same cloud.
    const Frame f = s.frame();
    ModelingSession direct(flower(), kParams, UserTriangle{kTriangle});
    direct.set_basis(f.basis);
    EXPECT_EQ(*direct.frame().points, *f.points);
}

TEST(HitTest, NearestWithinRadiusAndTieBreak) {
    const ModelingSession s(flower(), {.n_points = 10}, UserTriangle{kTriangle});
    EXPECT_EQ(s.hit_test({4, 0}, 5), VertexId::B);
    EXPECT_EQ(s.hit_test({2, 0}, 5), VertexId::A);  // equidistant from A and B
    EXPECT_EQ(s.hit_test({2, 2}, 5), VertexId::A);  // all three tie
    EXPECT_EQ(s.hit_test({3, 3}, 5), VertexId::B);  // B and C tie, A farther
    EXPECT_EQ(s.hit_test({0.1, 3.8}, 0.5), VertexId::C);
    EXPECT_EQ(s.hit_test({50, 50}, 5), std::nullopt);
    EXPECT_EQ(s.hit_test({2, 0}, 2), VertexId::A);  // distance exactly equal to the radius
    EXPECT_THROW(s.hit_test({0, 0}, 0), InvalidArgument);
}

TEST(Frame, SnapshotsAreStable) {
    ModelingSession s(flower(), kParams, UserTriangle{kTriangle});
    const Frame a = s.frame(), b = s.frame();
    EXPECT_EQ(a.basis, s.base_basis());
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.basis, b.basis);
    s.move_vertex(VertexId::A, {-1, -1});
    const Frame c = s.frame();
    EXPECT_EQ(c.basis.a, (Point2{-1, -1}));
    EXPECT_EQ(*a.points, *b.points);  // old snapshot untouched
    EXPECT_LE(defining_identity_error(s), 1e-9);
}

TEST(Frame, ConcurrentReadersNeverSeeTornFrames) {
    ModelingSession s(flower(), {.n_points = 5000, .seed = 3}, UserTriangle{kTriangle});
    std::atomic<bool> done{false};
    std::atomic<int> bad{0};
    std::thread reader([&] {
        while (!done.load()) {
            const Frame f = s.frame();
            // Each snapshot's points must be the image of its own basis.
            const AffineMap2 m = retarget_map(s.base_basis(), f.basis);
            const Point2 want = m(s.base_points().back());
            if (std::abs(f.points->back().x - want.x) > 1e-9 || std::abs(f.points->back().y - want.y) > 1e-9) ++bad;
        }
    });
    for (int i = 0; i < 200; ++i) s.move_vertex(VertexId::B, {4.0 + 0.01 * i, 0.02 * i});
    done = true;
    reader.join();
    EXPECT_EQ(bad.load(), 0);
}
