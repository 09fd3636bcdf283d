#include <doctest.h>

#include <cmath>

#include "mcover/caps.hpp"
#include "mcover/hull.hpp"
#include "mcover/macbeath.hpp"

using namespace mcover;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

ConvexBody random_hpoly(Rng& rng, int n, int m) {
    Mat A(m, n);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
        A.row(i) = random_direction(n, rng).transpose();
        b(i) = uniform(rng, 0.5, 1.5);
    }
    return ConvexBody::hpolytope(A, b);
}

// interior point with gauge at most g
Vec interior_point(const ConvexBody& K, Rng& rng, double g) {
    const Vec d = random_direction(K.dim(), rng);
    const double s = uniform(rng, 0, g) / gauge(K, d);
    return s * d;
}

// min over a fine grid of max(depth_1/scale_1, depth_2/scale_2); Lipschitz slack is left to the caller
double grid_min_depth(const MacbeathRegion& a, const MacbeathRegion& b, int steps) {
    const Box ba = mac_bounding_box(a), bb = mac_bounding_box(b);
    const Vec lo = ba.lo.cwiseMax(bb.lo), hi = ba.hi.cwiseMin(bb.hi);
    double best = 1e300;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            Vec y = v2(lo(0) + (hi(0) - lo(0)) * i / steps, lo(1) + (hi(1) - lo(1)) * j / steps);
            const double f = std::max(mac_depth(a.body, a.center, y) / a.scale, mac_depth(b.body, b.center, y) / b.scale);
            best = std::min(best, f);
        }
    return best;
}

}  // namespace

TEST_CASE("mac_membership square examples") {
    const ConvexBody sq = ConvexBody::cube(2);
    const auto M = macbeath_region(sq, v2(0.5, 0), 1);
    CHECK(mac_membership(M, v2(0.1, 0.9)));
    CHECK_FALSE(mac_membership(M, v2(-0.1, 0)));
    const auto S = macbeath_region(sq, v2(0.5, 0), 0.2);
    CHECK(mac_membership(S, v2(0.55, 0.1)));
    CHECK_FALSE(mac_membership(S, v2(0.75, 0)));
    CHECK(mac_depth(sq, v2(0.5, 0), v2(0.6, 0.2)) == doctest::Approx(0.2));
    const Box bb = mac_bounding_box(S);
    CHECK(bb.lo(0) == doctest::Approx(0.4));
    CHECK(bb.hi(1) == doctest::Approx(0.2));
    CHECK_THROWS_AS(macbeath_region(sq, v2(1, 0), 1), InputError);
    CHECK_THROWS_AS(macbeath_region(sq, v2(0, 0), 0), InputError);
}

TEST_CASE("M(O) of a symmetric body is the body") {
    Rng rng(11);
    for (const ConvexBody& K : {ConvexBody::ball(2), ConvexBody::cube(3), ConvexBody::lp_ball(2, 3)}) {
        const auto M = macbeath_region(K, Vec::Zero(K.dim()), 1);
        for (int t = 0; t < 500; ++t) {
            Vec y(K.dim());
            for (int i = 0; i < K.dim(); ++i) y(i) = uniform(rng, -1.3, 1.3);
            if (std::abs(gauge(K, y) - 1) < 1e-9) continue;
            CHECK(mac_membership(M, y) == membership(K, y));
        }
    }
}

TEST_CASE("central symmetry") {
    Rng rng(12);
    Mat Q(2, 2);
    Q << 3, 1, 1, 2;
    for (const ConvexBody& K : {ConvexBody::ball(2), ConvexBody::ellipsoid(Vec::Zero(2), Q), random_hpoly(rng, 2, 9)}) {
        for (int t = 0; t < 40; ++t) {
            const auto M = macbeath_region(K, interior_point(K, rng, 0.9), uniform(rng, 0.1, 1));
            const Vec y = mac_sample(M, rng);
            CHECK(mac_membership(M, 2 * M.center - y));
        }
    }
}

TEST_CASE("mac_as_hpoly") {
    const ConvexBody sq = ConvexBody::cube(2);
    Halfspaces h = mac_as_hpoly(sq, Vec::Zero(2), 1);
    CHECK(h.A.rows() <= 8);
    Mat V = halfspace_vertices(h.A, h.b);
    CHECK(halfspace_volume(h.A, h.b) == doctest::Approx(4));
    Halfspaces g = mac_as_hpoly(sq, v2(0.5, 0), 1);
    CHECK(halfspace_volume(g.A, g.b) == doctest::Approx(2));
    V = halfspace_vertices(g.A, g.b);
    CHECK(V.row(0).minCoeff() == doctest::Approx(0).epsilon(1e-9));
    CHECK(V.row(0).maxCoeff() == doctest::Approx(1));
    CHECK(V.row(1).maxCoeff() == doctest::Approx(1));
    CHECK_THROWS_AS(mac_as_hpoly(ConvexBody::ball(2), Vec::Zero(2), 1), UnsupportedError);

    Rng rng(13);
    for (int trial = 0; trial < 3; ++trial) {
        const ConvexBody K = random_hpoly(rng, 3, 14);
        const Vec x = interior_point(K, rng, 0.8);
        const double lam = uniform(rng, 0.1, 1);
        const auto M = macbeath_region(K, x, lam);
        const Halfspaces H = mac_as_hpoly(K, x, lam);
        int agree = 0;
        for (int t = 0; t < 1000; ++t) {
            Vec y(3);
            for (int i = 0; i < 3; ++i) y(i) = uniform(rng, K.box_lo()(i), K.box_hi()(i));
            const bool in_h = ((H.A * y - H.b).array() <= 0).all();
            agree += in_h == mac_membership(M, y);
        }
        CHECK(agree == 1000);
    }
}

TEST_CASE("mac_disjoint examples") {
    const ConvexBody sq = ConvexBody::cube(2);
    const auto a = macbeath_region(sq, v2(0.5, 0.5), 0.1);
    const auto b = macbeath_region(sq, v2(-0.5, -0.5), 0.1);
    CHECK(mac_disjoint(a, b));
    CHECK_FALSE(mac_disjoint(a, a));
    const auto l = macbeath_region(sq, v2(0.5, 0), 1);
    const auto r = macbeath_region(sq, v2(-0.5, 0), 1);
    CHECK_FALSE(mac_disjoint(l, r));
    const auto r2 = macbeath_region(sq, v2(-0.5, 0), 0.999);
    CHECK(mac_disjoint(l, r2));

    const ConvexBody disk = ConvexBody::ball(2);
    const auto p = macbeath_region(disk, v2(0.5, 0), 0.2);
    const auto q = macbeath_region(disk, v2(-0.5, 0), 0.2);
    CHECK(mac_disjoint(p, q));
    CHECK_FALSE(mac_disjoint(p, p));
}

TEST_CASE("mac_disjoint agrees with a grid search on curved bodies") {
    Mat Q(2, 2);
    Q << 2, 0.4, 0.4, 0.6;
    const ConvexBody ell = ConvexBody::ellipsoid(v2(0.1, -0.05), Q);
    // the affine wrapper and the l3 ball take the generic path, the others the lens path
    const std::vector<ConvexBody> bodies{ConvexBody::ball(2), ell, ConvexBody::affine(ell, Mat::Identity(2, 2), Vec::Zero(2)),
                                         ConvexBody::lp_ball(2, 3)};
    Rng rng(14);
    for (const auto& K : bodies) {
        int decided = 0;
        for (int t = 0; t < 40; ++t) {
            const Vec x = interior_point(K, rng, 0.97);
            const Vec y = x + 0.3 * uniform01(rng) * random_direction(2, rng);
            if (!(gauge(K, y) < 0.99)) continue;
            const auto a = macbeath_region(K, x, uniform(rng, 0.1, 0.5));
            const auto b = macbeath_region(K, y, uniform(rng, 0.1, 0.5));
            if (!mac_bounding_box(a).overlaps(mac_bounding_box(b))) {
                CHECK(mac_disjoint(a, b));
                continue;
            }
            const double f = grid_min_depth(a, b, 100);
            if (f < 0.98) {
                CHECK_FALSE(mac_disjoint(a, b));
                ++decided;
            } else if (f > 1.05) {
                CHECK(mac_disjoint(a, b));
                ++decided;
            }
        }
        CHECK(decided > 10);
    }
}

TEST_CASE("mac_contains") {
    const ConvexBody sq = ConvexBody::cube(2);
    const Vec x = v2(0.3, -0.2);
    CHECK(mac_contains(macbeath_region(sq, x, 1), macbeath_region(sq, x, 0.2)));
    CHECK_FALSE(mac_contains(macbeath_region(sq, x, 0.2), macbeath_region(sq, x, 1)));
    CHECK_FALSE(mac_contains(macbeath_region(sq, v2(0.5, 0.5), 0.1), macbeath_region(sq, v2(-0.5, -0.5), 0.1)));
    const ConvexBody disk = ConvexBody::ball(2);
    CHECK(mac_contains(macbeath_region(disk, x, 1), macbeath_region(disk, x, 0.2)));
    CHECK_FALSE(mac_contains(macbeath_region(disk, v2(0.5, 0), 0.1), macbeath_region(disk, v2(-0.5, 0), 0.1)));
}

TEST_CASE("overlapping fifth-scale regions nest in the four-fifths region") {
    Rng rng(15);
    for (const ConvexBody& K : {random_hpoly(rng, 2, 10), ConvexBody::ball(2)}) {
        int trials = 0, violations = 0;
        while (trials < 500) {
            const Vec x = interior_point(K, rng, 0.98);
            const auto Mx = macbeath_region(K, x, 0.2);
            const Vec z = mac_sample(Mx, rng);
            // y with z in M^{1/5}(y): pick y along a random direction from z
            const Vec y = z + uniform01(rng) * 0.3 * ray_distance(K, z) * random_direction(2, rng);
            if (!(gauge(K, y) < 1)) continue;
            const auto My = macbeath_region(K, y, 0.2);
            if (!mac_membership(My, z)) continue;
            ++trials;
            violations += !mac_contains(macbeath_region(K, x, 0.8), My);
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("build_mnet") {
    const ConvexBody disk = ConvexBody::ball(2);
    const MNet empty = build_mnet(disk, {}, 2);
    CHECK(empty.centers.empty());
    CHECK(empty.packing_scale() == doctest::Approx(0.125));
    CHECK(empty.covering_scale() == doctest::Approx(0.5));
    const MNet one = build_mnet(disk, {v2(0.1, 0.2)}, 2);
    CHECK(one.centers.size() == 1);
    const MNet skip = build_mnet(disk, {v2(2, 0), v2(0, 0)}, 2);
    CHECK(skip.centers.size() == 1);
    CHECK(skip.skipped == 1);
    CHECK_THROWS_AS(build_mnet(disk, {}, 1.5), InputError);

    const double eps = 0.1;
    const ConvexBody Ke = scaled(disk, 1 + eps);
    auto run = [&](std::uint64_t seed) {
        Rng rng(seed);
        std::vector<Vec> cand;
        for (int i = 0; i < 1000; ++i) cand.push_back(shell_sample(disk, eps, rng));
        return build_mnet(Ke, cand, 2);
    };
    const MNet a = run(16), b = run(16);
    CHECK(a.centers.size() >= 5);
    CHECK(a.centers.size() <= 200);
    REQUIRE(a.centers.size() == b.centers.size());
    for (size_t i = 0; i < a.centers.size(); ++i) CHECK(a.centers[i] == b.centers[i]);
    // packing holds pairwise (disk regions are checked against the grid search oracle)
    int bad = 0;
    for (size_t i = 0; i < a.centers.size(); ++i)
        for (size_t j = i + 1; j < a.centers.size(); ++j) {
            const MacbeathRegion p{Ke, a.centers[i], a.packing_scale()}, q{Ke, a.centers[j], a.packing_scale()};
            if (!mac_bounding_box(p).overlaps(mac_bounding_box(q))) continue;
            bad += grid_min_depth(p, q, 120) < 0.99;
        }
    CHECK(bad == 0);
}

TEST_CASE("hitting_to_cover and verify_covering") {
    const ConvexBody disk = ConvexBody::ball(2);
    const ConvexBody Ke = scaled(disk, 1.1);
    Rng rng(17);
    std::vector<Vec> cand;
    for (int i = 0; i < 20000; ++i) cand.push_back(uniform_sample(disk, rng));
    const MNet net = build_mnet(Ke, cand, 2);
    Covering cov = hitting_to_cover(Ke, disk, net.centers, 2, 0.1);
    cov.mnet_provenance = true;
    const CoveringReport rep = verify_covering(cov, rng, 10000);
    CHECK(rep.coverage_rate >= 0.999);
    CHECK(rep.buffering_pass);
    CHECK(rep.buffering_method == "structural");
    CHECK(rep.packing_pass);
    CHECK(rep.pass());
    CHECK(rep.layer_histogram.at(-1) == static_cast<long>(net.centers.size()));

    const Covering none = hitting_to_cover(Ke, disk, {}, 2, 0.1);
    const CoveringReport r0 = verify_covering(none, rng, 1000);
    CHECK(r0.coverage_rate == 0);
    CHECK_FALSE(r0.pass());
    CHECK(r0.failed.front() == "coverage");
    CHECK_THROWS_AS(hitting_to_cover(disk, {v2(1.5, 0)}, 2), InputError);
    CHECK_THROWS_AS(verify_covering(cov, rng, 999), InputError);
}

TEST_CASE("verify_covering mutations") {
    const ConvexBody amb = ConvexBody::cube(2, 2);
    const ConvexBody target = ConvexBody::box(v2(-1, -0.5), v2(1, 0.5));
    Covering cov = hitting_to_cover(amb, target, {v2(-0.5, 0), v2(0.5, 0)}, 2, 0);
    Rng rng(18);
    CoveringReport rep = verify_covering(cov, rng, 4000);
    CHECK(rep.coverage_rate == 1.0);
    CHECK(rep.buffering_method == "exact");
    CHECK(rep.pass());

    Covering cut = cov;
    cut.elements.pop_back();
    rep = verify_covering(cut, rng, 4000);
    CHECK(rep.coverage_rate < 0.7);
    CHECK_FALSE(rep.coverage_pass);

    Covering fat = cov;
    fat.elements[0].scale = 0.9;
    rep = verify_covering(fat, rng, 4000);
    CHECK_FALSE(rep.buffering_pass);
    CHECK(rep.buffering_failures == 1);

    Covering crowd = cov;
    crowd.elements.push_back({v2(0.51, 0), 0.5, 0});
    crowd.mnet_provenance = true;
    rep = verify_covering(crowd, rng, 4000);
    CHECK(rep.packing_checked);
    CHECK_FALSE(rep.packing_pass);
    CHECK(rep.packing_violations >= 1);

    const ConvexBody big = ConvexBody::ball(2, 100);
    const ConvexBody tiny = ConvexBody::ball(2, 0.01);
    const Covering triv = hitting_to_cover(big, tiny, {Vec::Zero(2)}, 2, 0);
    rep = verify_covering(triv, rng, 2000);
    CHECK(rep.coverage_rate == 1.0);
    CHECK(rep.pass());

    // sampled buffering path on a curved ambient
    Covering bent = hitting_to_cover(ConvexBody::ball(2), ConvexBody::ball(2, 0.1), {Vec::Zero(2)}, 2, 0);
    bent.elements[0].scale = 0.9;
    rep = verify_covering(bent, rng, 1000);
    CHECK(rep.buffering_method == "sampled");
    CHECK_FALSE(rep.buffering_pass);
}
