#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcover/instances.hpp"
#include "mcover/lattice.hpp"

using namespace mcover;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

Vec random_target(int n, Rng& rng) {
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = uniform(rng, -5, 5);
    return t;
}

// scan a coefficient box twice as wide as the one given by operator norms, independent of exact_cvp's box
CvpResult oracle_cvp(const Lattice& L, const Vec& t, const ConvexBody& norm) {
    const int n = L.dim();
    const Vec c = L.coordinates(t);
    const Vec z0 = c.array().round().matrix();
    const double D = gauge(norm, L.point(z0) - t);
    Vec half(n);
    for (int i = 0; i < n; ++i) half(i) = 2 * std::ceil(L.inverse().row(i).norm() * D * norm.outer_radius()) + 1;
    CvpResult best{Vec(), Vec(), 1e300, 0};
    Vec z(n);
    std::vector<long> k(n);
    for (int i = 0; i < n; ++i) k[i] = static_cast<long>(std::floor(c(i) - half(i)));
    for (;;) {
        for (int i = 0; i < n; ++i) z(i) = static_cast<double>(k[i]);
        const double d = gauge(norm, L.point(z) - t);
        if (d < best.distance - 1e-12) best = CvpResult{L.point(z), z, d, 0};
        int i = n - 1;
        while (i >= 0 && ++k[i] > static_cast<long>(std::ceil(c(i) + half(i)))) {
            k[i] = static_cast<long>(std::floor(c(i) - half(i)));
            --i;
        }
        if (i < 0) break;
    }
    return best;
}

}  // namespace

TEST_CASE("lattice basics") {
    Mat B(2, 2);
    B << 2, 1, 0, 3;
    const Lattice L(B);
    CHECK(L.determinant() == doctest::Approx(6));
    CHECK(L.point(v2(1, 1)).isApprox(v2(3, 3)));
    CHECK(L.coordinates(v2(3, 3)).isApprox(v2(1, 1)));
    Mat S(2, 2);
    S << 1, 2, 2, 4;
    CHECK_THROWS_AS(Lattice{S}, InputError);
    CHECK_THROWS_AS(Lattice{Mat::Identity(2, 3)}, InputError);
}

TEST_CASE("exact_cvp examples") {
    const Lattice Z2(Mat::Identity(2, 2));
    auto r = exact_cvp(Z2, v2(0.4, 0.3), ConvexBody::cube(2));
    CHECK(r.point.isApprox(v2(0, 0)));
    CHECK(r.distance == doctest::Approx(0.4));

    r = exact_cvp(Z2, v2(0.5, 0), ConvexBody::ball(2));
    CHECK(r.distance == doctest::Approx(0.5));
    CHECK(r.point.norm() == 0);

    r = exact_cvp(Z2, v2(3, -2), ConvexBody::ball(2));
    CHECK(r.distance == 0);
    CHECK_THROWS_AS(exact_cvp(Lattice(Mat::Identity(5, 5)), Vec::Zero(5), ConvexBody::cube(5)), UnsupportedError);
}

TEST_CASE("exact_cvp matches a wider scan") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = trial < 40 ? 2 : 3;
        const Lattice L(random_basis(n, rng));
        const Vec t = random_target(n, rng);
        const ConvexBody sq = ConvexBody::cube(n);
        const auto a = exact_cvp(L, t, sq);
        const auto b = oracle_cvp(L, t, sq);
        CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-12));
        CHECK(L.point(a.coeffs).isApprox(a.point));
    }
}

TEST_CASE("lattice_points_within agrees with the scan") {
    Rng rng(42);
    const Lattice L(random_basis(2, rng));
    const ConvexBody K = ConvexBody::ball(2);
    const Vec t = v2(0.3, -0.7);
    const auto pts = lattice_points_within(L, t, K, 3.0);
    long count = 0;
    for (long i = -40; i <= 40; ++i)
        for (long j = -40; j <= 40; ++j) count += gauge(K, L.point(v2(i, j)) - t) <= 3.0;
    CHECK(static_cast<long>(pts.size()) == count);
    for (const auto& v : pts) CHECK(gauge(K, v - t) <= 3.0 + 1e-9);
}

TEST_CASE("gap_cvp agrees with the exact oracle") {
    Rng rng(43);
    struct Setup {
        int n;
        double eps;
        ConvexBody norm;
    };
    std::vector<Setup> setups{{2, 0.1, ConvexBody::cube(2)},
                              {2, 0.1, random_ellipsoid(2, rng)},
                              {3, 0.25, ConvexBody::lp_ball(3, 1)}};
    int trials = 0;
    for (const auto& s : setups) {
        const VerifiedCovering vc = cvp_covering(s.norm, s.eps, rng);
        for (int k = 0; k < 34; ++k, ++trials) {
            const Lattice L(random_basis(s.n, rng));
            const Vec t = random_target(s.n, rng);
            const double d = exact_cvp(L, t, s.norm).distance;
            for (double f : {0.5, 0.9, 1.0, 1.2, 2.0}) {
                const double g = f * d;
                const auto ans = gap_cvp(L, t, s.norm, g, vc);
                if (ans.found) {
                    CHECK(gauge(s.norm, ans.point - t) <= g * (1 + s.eps) + 1e-9);
                    CHECK(ans.bound == doctest::Approx(g * (1 + s.eps)));
                    const Vec z = L.coordinates(ans.point);
                    CHECK((z - z.array().round().matrix()).norm() < 1e-9);
                } else {
                    CHECK(d > g);
                }
                if (d <= g) CHECK(ans.found);
                if (f == 0.5) CHECK_FALSE(ans.found);
            }
        }
    }
    CHECK(trials >= 100);
}

TEST_CASE("gap_cvp preconditions") {
    Rng rng(44);
    const ConvexBody K = ConvexBody::ball(2);
    const ConvexBody Ke = scaled(K, 1.1);
    // one element, M(O) of K_eps itself, at c = 1
    const VerifiedCovering degenerate = certify(Covering{Ke, K, 1, 0.1, {CoverElement{Vec::Zero(2), 1.0, -1}}, false}, rng, 2000);
    const Lattice Z2(Mat::Identity(2, 2));
    CHECK_THROWS_AS(gap_cvp(Z2, v2(0.3, 0.2), K, 1.0, degenerate), PreconditionError);

    const VerifiedCovering vc = cvp_covering(K, 0.1, rng);
    CHECK_THROWS_AS(gap_cvp(Z2, v2(0.3, 0.2), ConvexBody::cube(2), 1.0, vc), InputError);
    CHECK_THROWS_AS(certify(hitting_to_cover(Ke, K, {}, 2, 0.1), rng, 2000), VerificationError);
}

TEST_CASE("approx_cvp examples") {
    Rng rng(45);
    const Lattice Z2(Mat::Identity(2, 2));
    const auto r = approx_cvp(CvpInstance{Z2, v2(0.4, 0.3), ConvexBody::cube(2), 0.1}, rng);
    CHECK(r.distance <= 1.1 * 0.4);
    CHECK(r.steps <= binary_search_cap(0.1));

    const auto z = approx_cvp(CvpInstance{Z2, v2(2, -1), ConvexBody::cube(2), 0.1}, rng);
    CHECK(z.distance == 0);
    CHECK(z.point.isApprox(v2(2, -1)));

    const VerifiedCovering coarse = cvp_covering(ConvexBody::cube(2), 0.1, rng);
    CHECK_THROWS_AS(approx_cvp(CvpInstance{Z2, v2(0.4, 0.3), ConvexBody::cube(2), 0.1}, coarse), PreconditionError);
    CHECK_THROWS_AS(approx_cvp(CvpInstance{Z2, v2(0.4, 0.3), ConvexBody::cube(2), 1.5}, rng), InputError);
}

TEST_CASE("approx_cvp stays within 1 + eps of exact") {
    Rng rng(46);
    for (const char* fam : {"square", "diamond", "hpoly", "ellipse"}) {
        const ConvexBody N = norm_family(fam, 2, rng);
        for (double eps : {0.25, 0.1}) {
            const VerifiedCovering vc = cvp_covering(N, eps / 7, rng);
            for (int k = 0; k < 10; ++k) {
                const Lattice L(random_basis(2, rng));
                const Vec t = random_target(2, rng);
                const auto ex = exact_cvp(L, t, N);
                const auto ap = approx_cvp(CvpInstance{L, t, N, eps}, vc);
                CHECK(ap.distance <= (1 + eps) * ex.distance + 1e-12);
                CHECK(ap.steps <= binary_search_cap(eps));
            }
        }
    }
}

TEST_CASE("approx_ip examples") {
    Rng rng(47);
    const Lattice Z2(Mat::Identity(2, 2));
    const auto empty = approx_ip(ConvexBody::cube(2, 0.4), v2(5.5, 5.5), Z2, 0.01, rng);
    CHECK_FALSE(empty.found);
    CHECK(empty.distance > 1.01);

    const auto hit = approx_ip(ConvexBody::ball(2, 0.8), v2(2.1, 2.9), Z2, 0.1, rng);
    REQUIRE(hit.found);
    CHECK(hit.point.isApprox(v2(2, 3)));
    CHECK(hit.centroid.isApprox(v2(2.1, 2.9), 0.05));
}

TEST_CASE("approx_ip agrees with an integer scan") {
    Rng rng(48);
    int margin = 0, checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Lattice L = trial % 2 ? Lattice(random_basis(2, rng)) : Lattice(Mat::Identity(2, 2));
        const Vec shift = v2(uniform(rng, -5, 5), uniform(rng, -5, 5));
        const ConvexBody K = trial % 4 < 2 ? ConvexBody::box(-v2(uniform(rng, 0.15, 0.8), uniform(rng, 0.15, 0.8)),
                                                             v2(uniform(rng, 0.15, 0.8), uniform(rng, 0.15, 0.8)))
                                           : scaled(random_ellipsoid(2, rng), uniform(rng, 0.3, 1.0));
        const double eps = 0.25;
        const auto ans = approx_ip(K, shift, L, eps, rng);

        bool any = false;
        const Vec lo = K.box_lo() + shift, hi = K.box_hi() + shift;
        Vec zlo = Vec::Constant(2, 1e300), zhi = Vec::Constant(2, -1e300);
        for (int m = 0; m < 4; ++m) {
            const Vec z = L.coordinates(v2(m & 1 ? hi(0) : lo(0), m & 2 ? hi(1) : lo(1)));
            zlo = zlo.cwiseMin(z);
            zhi = zhi.cwiseMax(z);
        }
        for (long i = static_cast<long>(std::floor(zlo(0))); i <= static_cast<long>(std::ceil(zhi(0))); ++i)
            for (long j = static_cast<long>(std::floor(zlo(1))); j <= static_cast<long>(std::ceil(zhi(1))); ++j)
                any = any || membership(K, L.point(v2(i, j)) - shift);

        const ConvexBody norm = translated(K, shift - ans.centroid);
        const double d = exact_cvp(L, ans.centroid, norm).distance;
        const bool in_margin = d > 1 && d <= 1 + eps;
        margin += in_margin;
        if (ans.found) CHECK(gauge(norm, ans.point - ans.centroid) <= 1 + eps + 1e-9);
        if (in_margin) continue;
        ++checked;
        CHECK(ans.found == any);
    }
    MESSAGE("approx_ip margin cases " << margin << " of 40");
    CHECK(checked >= 30);
}
