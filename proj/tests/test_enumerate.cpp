#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcover/caps.hpp"
#include "mcover/enumerate.hpp"

using namespace mcover;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

// area of the intersection of two disks of radius r whose centers are d apart
double lens_area(double r, double d) {
    if (d >= 2 * r) return 0;
    return 2 * r * r * std::acos(d / (2 * r)) - d / 2 * std::sqrt(4 * r * r - d * d);
}

}  // namespace

TEST_CASE("layered decomposition") {
    auto d = layered_decomposition(0.1);
    CHECK(d.k0 == 1);
    CHECK(d.wide() == 2);
    CHECK(d.layer_eps(0) == doctest::Approx(0.05));
    CHECK(d.layer_eps(1) == doctest::Approx(0.1));
    CHECK(layered_decomposition(0.01).k0 == 4);
    CHECK(layered_decomposition(0.125).k0 == 0);
    CHECK(layered_decomposition(1).k0 == 0);
    CHECK_THROWS_AS(layered_decomposition(0), InputError);
    CHECK_THROWS_AS(layered_decomposition(1.5), InputError);
}

TEST_CASE("layer_of examples") {
    const ConvexBody disk = ConvexBody::ball(2);
    // eps = 0.6: |x| chosen so that ray in 1.6 K is eps / 1.5 = 0.4
    CHECK(layer_of(disk, 0.6, v2(1.6 * 0.6, 0)) == 0);
    CHECK(layer_of(disk, 0.1, Vec::Zero(2)) == 2);
    CHECK(layer_of(disk, 0.1, v2(0, 0.999)) == 0);
    CHECK(layer_of(disk, 0.1, v2(0.5, 0)) == 2);
    // ray in 1.1 K of 0.15 lies in [0.1, 0.2)
    CHECK(layer_of(disk, 0.1, v2(1.1 * 0.85, 0)) == 1);
    CHECK_THROWS_AS(layer_of(disk, 0.1, v2(1.01, 0)), InputError);
}

TEST_CASE("enumerate_cover on the disk verifies") {
    const ConvexBody disk = ConvexBody::ball(2);
    EnumeratorConfig cfg;
    Rng rng(21);
    EnumeratorStats st;
    const Covering cov = enumerate_cover(disk, 0.1, cfg, rng, &st);
    CHECK(cov.mnet_provenance);
    CHECK(cov.eps == 0.1);
    CHECK(st.kb == doctest::Approx(1.0));
    CHECK(st.rounds >= 1);
    CHECK(st.drawn.size() == 3);
    const CoveringReport rep = verify_covering(cov, rng, 20000);
    CHECK(rep.coverage_rate >= 0.999);
    CHECK(rep.buffering_pass);
    CHECK(rep.packing_pass);
    CHECK(rep.pass());
    for (const auto& e : cov.elements) {
        CHECK(e.scale == doctest::Approx(0.5));
        CHECK(e.layer >= 0);
        CHECK(e.layer <= 2);
    }
}

TEST_CASE("enumerate_cover on the square verifies with exact buffering") {
    const ConvexBody sq = ConvexBody::cube(2);
    EnumeratorConfig cfg;
    Rng rng(22);
    const Covering cov = enumerate_cover(sq, 0.05, cfg, rng);
    const CoveringReport rep = verify_covering(cov, rng, 20000);
    MESSAGE("square eps=0.05 elements: " << cov.elements.size());
    CHECK(rep.buffering_method == "exact");
    CHECK(rep.coverage_rate >= 0.999);
    CHECK(rep.pass());
    // every boundary-layer center sits in its shell of K_eps
    const auto d = layered_decomposition(0.05);
    const ConvexBody Ke = scaled(sq, 1.05);
    int bad = 0;
    for (const auto& e : cov.elements)
        if (e.layer <= d.k0) bad += gauge(Ke, e.center) < 1 - 4 * d.layer_eps(e.layer);
    CHECK(bad == 0);
}

TEST_CASE("enumerate_cover with eps = 1 uses the wide layer only") {
    EnumeratorConfig cfg;
    Rng rng(23);
    EnumeratorStats st;
    const Covering cov = enumerate_cover(ConvexBody::ball(2), 1.0, cfg, rng, &st);
    CHECK(st.drawn.front() == 0);
    CHECK(cov.elements.size() <= 20);
    CHECK(verify_covering(cov, rng, 10000).pass());
}

TEST_CASE("enumerate_cover is deterministic per seed") {
    EnumeratorConfig cfg;
    Rng a(24), b(24);
    const Covering x = enumerate_cover(ConvexBody::ball(2), 0.05, cfg, a);
    const Covering y = enumerate_cover(ConvexBody::ball(2), 0.05, cfg, b);
    REQUIRE(x.elements.size() == y.elements.size());
    bool same = true;
    for (size_t i = 0; i < x.elements.size(); ++i)
        same = same && x.elements[i].center == y.elements[i].center && x.elements[i].layer == y.elements[i].layer;
    CHECK(same);
}

TEST_CASE("enumerate_cover preconditions") {
    EnumeratorConfig cfg;
    Rng rng(25);
    const ConvexBody skew = ConvexBody::box(v2(-0.01, -0.01), v2(1, 1));
    CHECK_THROWS_AS(enumerate_cover(skew, 0.1, cfg, rng), PreconditionError);
    EnumeratorConfig bad = cfg;
    bad.c = 1.5;
    CHECK_THROWS_AS(enumerate_cover(ConvexBody::ball(2), 0.1, bad, rng), InputError);
}

TEST_CASE("shell volume matches the closed form") {
    Rng rng(26);
    for (int n : {2, 3}) {
        const ConvexBody K = ConvexBody::ball(n);
        for (double eps : {0.02, 0.05, 0.1}) {
            const long N = 40000;
            long in = 0;
            UniformSampler s(K);
            for (long k = 0; k < N; ++k) in += gauge(K, s(rng)) > 1 - 4 * eps;
            const double p = 1 - std::pow(1 - 4 * eps, n);
            const double sigma = std::sqrt(p * (1 - p) / N);
            CHECK(std::abs(static_cast<double>(in) / N - p) <= 3 * sigma);
        }
    }
}

TEST_CASE("classify volumes agree with the lens area") {
    const ConvexBody disk = ConvexBody::ball(2);
    EnumeratorConfig cfg;
    Rng rng(27);
    const Covering cov = enumerate_cover(disk, 0.1, cfg, rng);
    const auto vols = classify(cov, cfg, rng, 4000);
    REQUIRE(vols.size() == cov.elements.size());
    const double R = 1.1, t = std::pow(0.1, 1.5), tp = t / 16;
    int outside = 0;
    for (size_t i = 0; i < vols.size(); ++i) {
        const auto& e = cov.elements[i];
        const double exact = lens_area(e.scale * R, 2 * e.scale * e.center.norm()) / (std::numbers::pi * R * R);
        outside += std::abs(vols[i].relative.value - exact) > 4 * vols[i].relative.std_error + 1e-12;
        const auto want = vols[i].relative.value >= t ? RegionClass::Large
                                                      : (vols[i].relative.value < tp ? RegionClass::Small : RegionClass::Medium);
        CHECK(vols[i].cls == want);
    }
    // 4 sigma per element; allow a handful among hundreds
    CHECK(outside <= 3);
}

TEST_CASE("loglog_slope and scaling_experiment plumbing") {
    CHECK(loglog_slope({0.1, 0.01}, {std::pow(0.1, -0.5), std::pow(0.01, -0.5)}) == doctest::Approx(0.5));
    CHECK(loglog_slope({0.08, 0.04, 0.02}, {3, 12, 48}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(loglog_slope({0.1}, {1}), InputError);

    EnumeratorConfig cfg;
    Rng rng(28);
    const auto one = scaling_experiment(ConvexBody::ball(2), {0.1}, cfg, rng, 2000);
    CHECK(one.rows.size() == 1);
    CHECK_FALSE(one.slope.has_value());
    CHECK_THROWS_AS(scaling_experiment(ConvexBody::ball(2), {0.05, 0.1}, cfg, rng, 2000), InputError);

    EnumeratorConfig starved = cfg;
    starved.A = 1e-3;
    starved.max_rounds = 1;
    try {
        scaling_experiment(ConvexBody::ball(2), {0.1, 0.05}, starved, rng, 2000);
        CHECK(false);
    } catch (const VerificationError& e) {
        CHECK(std::string(e.what()).find("0.1") != std::string::npos);
    }
}
