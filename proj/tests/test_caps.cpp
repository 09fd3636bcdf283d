#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcover/caps.hpp"

using namespace mcover;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

ConvexBody ellipse() {
    Mat Q(2, 2);
    Q << 4, 0, 0, 1;
    return ConvexBody::ellipsoid(Vec::Zero(2), Q);
}

}  // namespace

TEST_CASE("cap_from_plane examples") {
    Cap c = cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(1, 0), 0.6});
    CHECK(c.absolute_width == doctest::Approx(0.4));
    CHECK(c.relative_width == doctest::Approx(0.4));
    Cap s = cap_from_plane(ConvexBody::cube(2), Hyperplane{v2(1, 0), 0.5});
    CHECK(s.relative_width == doctest::Approx(0.5));
    CHECK(s.apex(0) == doctest::Approx(1));
    Cap e = cap_from_plane(ellipse(), Hyperplane{v2(1, 0), 1});
    CHECK(e.relative_width == doctest::Approx(0.5));
    CHECK_THROWS_AS(cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(1, 0), 1.2}), EmptyCapError);
    CHECK_THROWS_AS(cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(1, 0), 0}), InputError);
}

TEST_CASE("ray_distance examples") {
    CHECK(ray_distance(ConvexBody::ball(2), v2(0.5, 0)) == doctest::Approx(0.5));
    CHECK(ray_distance(ConvexBody::ball(2), v2(2, 0)) == doctest::Approx(0.5));
    CHECK(ray_distance(ConvexBody::cube(2), v2(0.75, 0.75)) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ray_distance(ConvexBody::ball(2), v2(0, 0)), InputError);
}

TEST_CASE("min_width_cap examples") {
    Cap c = min_width_cap(ConvexBody::ball(2), v2(0.5, 0));
    CHECK(c.offset == doctest::Approx(0.5));
    CHECK(c.relative_width == doctest::Approx(0.5));
    Cap s = min_width_cap(ConvexBody::cube(2), v2(0, 0.9));
    CHECK(s.normal(1) == doctest::Approx(1));
    CHECK(s.relative_width == doctest::Approx(0.1));
    Rng rng(3);
    ConvexBody E = ellipse();
    for (int t = 0; t < 100; ++t) {
        Vec p = uniform_sample(E, rng);
        CHECK(min_width_cap(E, p).relative_width == doctest::Approx(ray_distance(E, p)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(min_width_cap(E, v2(3, 0)), InputError);
}

TEST_CASE("expand_cap examples") {
    Cap c = cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(0, 1), 0.8});
    CHECK(expand_cap(c, 2).absolute_width == doctest::Approx(0.4));
    Cap same = expand_cap(c, 1);
    CHECK(same.offset == c.offset);
    Cap wide = cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(0, 1), 0.4});
    CHECK(expand_cap(wide, 2).full_body);
    CHECK_FALSE(expand_cap(c, 2).full_body);
}

TEST_CASE("representative_cap examples") {
    ConvexBody D = ConvexBody::ball(2);
    RepresentativeCap r = representative_cap(D, polar(D), v2(0.5, 0), 0.1);
    CHECK(r.cap.offset == doctest::Approx(0.9));
    CHECK(r.cap.relative_width == doctest::Approx(0.1));
    ConvexBody S = ConvexBody::cube(2);
    RepresentativeCap q = representative_cap(S, polar(S), v2(0, 0.3), 0.1);
    CHECK(q.cap.normal(1) == doctest::Approx(1));
    CHECK(q.cap.offset == doctest::Approx(0.9));
    CHECK_THROWS_AS(representative_cap(D, polar(D), v2(0.5, 0), 0.3), InputError);
}

TEST_CASE("representative cap width sweep") {
    Rng rng(5);
    Mat Q(2, 2);
    Q << 1.5, 0.4, 0.4, 0.7;
    Mat M(3, 3);
    M << 1, 0.3, 0, 0, 0.8, 0.2, 0.1, 0, 1.2;
    std::vector<ConvexBody> bodies = {ConvexBody::cube(2), ConvexBody::ball(3), ConvexBody::lp_ball(2, 1.0),
                                      ConvexBody::ellipsoid(v2(0.1, 0.2), Q), ConvexBody::lp_ball(2, 3.0),
                                      ConvexBody::affine(ConvexBody::cube(3), M, Vec::Zero(3))};
    for (int t = 0; t < 100; ++t) {
        const ConvexBody& K = bodies[t % bodies.size()];
        ConvexBody Kp = polar(K);
        const double eps = uniform(rng, 0.001, 1.0 / 16);
        Vec z = uniform_sample(Kp, rng);
        RepresentativeCap r = representative_cap(K, Kp, z, eps);
        CHECK(r.cap.relative_width / eps == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("shell_sample stays in the shell with uniform angles") {
    Rng rng(6);
    ConvexBody D = ConvexBody::ball(2);
    ShellSampler s(D, 1 - 4 * 0.1);
    std::vector<int> bins(8, 0);
    for (int i = 0; i < 10000; ++i) {
        Vec x = s(rng);
        const double g = gauge(D, x);
        CHECK(g >= 0.6 - 1e-12);
        CHECK(g <= 1 + 1e-12);
        const double a = std::atan2(x(1), x(0)) + std::numbers::pi;
        ++bins[std::min(7, static_cast<int>(a / (2 * std::numbers::pi) * 8))];
    }
    double chi2 = 0;
    for (int b : bins) chi2 += (b - 1250.0) * (b - 1250.0) / 1250.0;
    CHECK(chi2 < 18.48);  // chi-square 7 dof, p = 0.01
    ConvexBody S = ConvexBody::cube(2);
    for (int i = 0; i < 1000; ++i) {
        const double g = gauge(S, shell_sample(S, 0.05, rng));
        CHECK(g >= 0.8 - 1e-12);
        CHECK(g <= 1 + 1e-12);
    }
}

TEST_CASE("cap_sample examples") {
    Rng rng(7);
    Cap c = cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(1, 0), 0.5});
    CapSampler s(c);
    for (int i = 0; i < 1000; ++i) {
        Vec x = s(rng);
        CHECK(membership(ConvexBody::ball(2), x));
        CHECK(x(0) >= 0.5 - 1e-12);
    }
    Cap half = cap_at_offset(ConvexBody::cube(2), v2(1, 0), 0.0);
    CapSampler h(half);
    double m = 0;
    for (int i = 0; i < 10000; ++i) m += h(rng)(0);
    CHECK(std::abs(m / 10000 - 0.5) < 0.02);

    Cap thin = cap_from_plane(ConvexBody::ball(3), Hyperplane{Vec::Unit(3, 2), 0.99});
    CapSampler t(thin);
    for (int i = 0; i < 200; ++i) CHECK(thin.contains(t(rng)));
    CHECK((t.acceptance_rate() >= CapSamplerConfig{}.acceptance_floor || t.using_fallback()));
}

TEST_CASE("hit-and-run fallback stays in the cap") {
    Rng rng(8);
    Cap thin = cap_from_plane(ConvexBody::ball(3), Hyperplane{Vec::Unit(3, 0), 0.9});
    CapSamplerConfig cfg;
    cfg.acceptance_floor = 1.1;  // force the fallback
    CapSampler t(thin, cfg);
    Vec m = Vec::Zero(3);
    for (int i = 0; i < 4000; ++i) {
        Vec x = t(rng);
        CHECK(thin.contains(x));
        m += x;
    }
    CHECK(t.using_fallback());
    // centroid height of a spherical cap of height h: 3(2-h)^2 / (4(3-h))
    const double h = 0.1, zc = 3 * (2 - h) * (2 - h) / (4 * (3 - h));
    CHECK(std::abs(m(0) / 4000 - zc) < 0.01);
}

TEST_CASE("similar_caps examples") {
    ConvexBody S = ConvexBody::cube(2);
    Cap a = cap_from_plane(S, Hyperplane{v2(1, 0), 0.9});
    CHECK(similar_caps(a, a, 1));
    Cap b = cap_from_plane(S, Hyperplane{v2(1, 0), 0.8});
    CHECK(similar_caps(a, b, 2));
    Cap c = cap_from_plane(S, Hyperplane{v2(0, 1), 0.9});
    CHECK_FALSE(similar_caps(a, c, 1));
    // the point (0.95, 0) lies in a but not in c
    CHECK(a.contains(v2(0.95, 0)));
    CHECK_FALSE(c.contains(v2(0.95, 0)));
}

TEST_CASE("cap_max matches LP on polytopes and sampling elsewhere") {
    Rng rng(9);
    Mat A(10, 2);
    Vec b(10);
    for (int i = 0; i < 10; ++i) {
        A.row(i) = random_direction(2, rng).transpose();
        b(i) = uniform(rng, 0.5, 1.5);
    }
    ConvexBody P = ConvexBody::hpolytope(A, b);
    // affine image of the polytope has no polytope data, so the dual path is used
    ConvexBody Pa = ConvexBody::affine(P, Mat::Identity(2, 2), Vec::Zero(2));
    for (int t = 0; t < 50; ++t) {
        Vec u = random_direction(2, rng);
        const double off = uniform(rng, -0.3, 0.9) * support_value(P, u);
        Cap c1 = cap_at_offset(P, u, off);
        Cap c2 = cap_at_offset(Pa, u, off);
        Vec w = random_direction(2, rng);
        CHECK(cap_max(c2, w) == doctest::Approx(cap_max(c1, w)).epsilon(1e-8));
    }
    ConvexBody E = ellipse();
    for (int t = 0; t < 20; ++t) {
        Vec u = random_direction(2, rng);
        Cap c = cap_at_offset(E, u, 0.6 * support_value(E, u));
        Vec w = random_direction(2, rng);
        // a linear functional peaks on the boundary arc inside the halfspace
        double m = -1e9;
        for (int i = 0; i < 200000; ++i) {
            const double th = 2 * std::numbers::pi * i / 200000;
            Vec x = v2(2 * std::cos(th), std::sin(th));
            if (u.dot(x) >= c.offset) m = std::max(m, w.dot(x));
        }
        // plus the two endpoints of the base chord: x = beta u + s u_perp on x^2/4 + y^2 = 1
        Vec q = v2(-u(1), u(0)), o = c.offset * u;
        const double qa = q(0) * q(0) / 4 + q(1) * q(1), qb = 2 * (o(0) * q(0) / 4 + o(1) * q(1)),
                     qc = o(0) * o(0) / 4 + o(1) * o(1) - 1;
        const double disc = std::sqrt(qb * qb - 4 * qa * qc);
        for (double sg : {-1.0, 1.0}) m = std::max(m, w.dot(o + (-qb + sg * disc) / (2 * qa) * q));
        CHECK(cap_max(c, w) == doctest::Approx(m).epsilon(1e-6));
    }
}

TEST_CASE("cap_max closed form on ellipsoids agrees with the dual search") {
    Rng rng(19);
    Mat Q(3, 3);
    Q << 2, 0.3, 0.1, 0.3, 1, -0.2, 0.1, -0.2, 0.5;
    Vec c(3);
    c << 0.2, -0.1, 0.05;
    const ConvexBody E = ConvexBody::ellipsoid(c, Q);
    const ConvexBody Ea = ConvexBody::affine(E, Mat::Identity(3, 3), Vec::Zero(3));
    for (int t = 0; t < 60; ++t) {
        const Vec u = random_direction(3, rng);
        const double off = uniform(rng, -0.5, 0.95) * support_value(E, u);
        const Vec w = random_direction(3, rng);
        CHECK(cap_max(cap_at_offset(E, u, off), w) ==
              doctest::Approx(cap_max(cap_at_offset(Ea, u, off), w)).epsilon(1e-7));
    }
}

TEST_CASE("exact cap volume and base area cross-check") {
    Rng rng(10);
    // unit disk cap {x >= 0.5}: segment area and chord length
    Cap d = cap_from_plane(ConvexBody::ball(2), Hyperplane{v2(1, 0), 0.5});
    CHECK(*cap_volume_exact(d) == doctest::Approx(std::acos(0.5) - 0.5 * std::sqrt(0.75)));
    CHECK(*base_area_exact(d) == doctest::Approx(2 * std::sqrt(0.75)));
    // unit ball cap of height 0.3
    Cap b = cap_from_plane(ConvexBody::ball(3), Hyperplane{Vec::Unit(3, 2), 0.7});
    CHECK(*cap_volume_exact(b) == doctest::Approx(std::numbers::pi * 0.09 * (3 - 0.3) / 3));
    CHECK(*base_area_exact(b) == doctest::Approx(std::numbers::pi * (1 - 0.49)));
    // square cap and its base
    Cap s = cap_at_offset(ConvexBody::cube(2), v2(1, 1).normalized(), 0.5);
    const double side = std::sqrt(2.0) - 0.5;  // distance from plane to the corner
    CHECK(*cap_volume_exact(s) == doctest::Approx(side * side));
    CHECK(*base_area_exact(s) == doctest::Approx(2 * side));
    // Monte Carlo agrees on an affine ellipsoid and a cube cap
    Mat M(3, 3);
    M << 1, 0.2, 0, 0.1, 0.9, 0, 0, 0.3, 1.1;
    ConvexBody AE = ConvexBody::affine(ConvexBody::ball(3), M, Vec::Zero(3));
    ConvexBody C3 = ConvexBody::cube(3);
    for (const ConvexBody* K : {&AE, &C3}) {
        Vec u = random_direction(3, rng);
        Cap c = cap_at_offset(*K, u, 0.5 * support_value(*K, u));
        const double ex = *cap_volume_exact(c);
        Rng r2(1);
        long in = 0;
        const long N = 200000;
        const Vec& lo = K->box_lo();
        const Vec& hi = K->box_hi();
        for (long i = 0; i < N; ++i) {
            Vec x(3);
            for (int j = 0; j < 3; ++j) x(j) = uniform(r2, lo(j), hi(j));
            in += c.contains(x);
        }
        const double box = (hi - lo).prod(), f = static_cast<double>(in) / N;
        CHECK(std::abs(box * f - ex) <= 3.5 * box * std::sqrt(f * (1 - f) / N));
    }
}

TEST_CASE("ray distance never exceeds the width of a cap holding the point") {
    Rng rng(11);
    std::vector<ConvexBody> bodies = {ConvexBody::cube(2), ConvexBody::ball(3), ellipse(), ConvexBody::lp_ball(3, 1.0)};
    int trials = 0;
    for (const auto& K : bodies) {
        for (int t = 0; t < 250; ++t) {
            const int n = K.dim();
            Vec u = random_direction(n, rng);
            Cap c = cap_at_offset(K, u, uniform(rng, 0.05, 0.95) * support_value(K, u));
            Vec p = cap_sample(c, rng);
            CHECK(ray_distance(K, p) <= c.relative_width + 1e-9);
            ++trials;
        }
    }
    CHECK(trials == 1000);
}
