#include "mcover/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <optional>

#include "mcover/hull.hpp"
#include "mcover/instances.hpp"
#include "mcover/lattice.hpp"
#include "mcover/lp.hpp"

namespace mcover {

namespace {

constexpr double kTol = 1e-9;
using Vec2 = Eigen::Vector2d;

struct Prepared {
    std::string name;
    ConvexBody K;
    ConvexBody Kp;
    double vol = 0;
    double pvol = 0;
};

std::vector<Prepared> prepare(std::uint64_t seed) {
    std::vector<Prepared> out;
    for (auto& nb : lemma_bodies(seed)) {
        ConvexBody Kp = polar(nb.body);
        const double v = exact_volume(nb.body).value();
        const double pv = exact_volume(Kp).value();
        out.push_back(Prepared{nb.name, nb.body, Kp, v, pv});
    }
    return out;
}

// whitening for ellipsoid bodies: y = c + L u with |u| <= 1
struct Whitening {
    Vec center;
    Mat L;
};

std::optional<Whitening> whitening(const ConvexBody& K) {
    if (const auto* e = std::get_if<Ellipsoid>(&K.representation()))
        return Whitening{e->center, Eigen::LLT<Mat>(e->shape).matrixL()};
    if (const auto* b = std::get_if<LpBall>(&K.representation()); b && b->p == 2)
        return Whitening{Vec::Zero(b->dim), Mat::Identity(b->dim, b->dim) * b->radius};
    return std::nullopt;
}

// M^l(x) in whitened coordinates: balls of radius l about a and b
struct Lens {
    Vec a, b;
    double r;
};

Lens lens_of(const Whitening& w, const Vec& x, double l) {
    const Vec xt = w.L.triangularView<Eigen::Lower>().solve(x - w.center);
    return Lens{(1 - l) * xt, (1 + l) * xt, l};
}

// min of <h, u> over the lens
double lens_min(const Lens& s, const Vec& h) {
    const double hn = h.norm();
    if (hn == 0) return 0;
    double best = 1e300;
    const Vec pa = s.a - s.r * h / hn, pb = s.b - s.r * h / hn;
    if ((pa - s.b).norm() <= s.r * (1 + 1e-12)) best = std::min(best, h.dot(pa));
    if ((pb - s.a).norm() <= s.r * (1 + 1e-12)) best = std::min(best, h.dot(pb));
    const Vec ab = s.b - s.a;
    const double d = ab.norm();
    if (d > 0 && d < 2 * s.r) {
        const Vec e = ab / d;
        const Vec m = (s.a + s.b) / 2;
        const double rim = std::sqrt(s.r * s.r - d * d / 4);
        const Vec hp = h - h.dot(e) * e;
        best = std::min(best, h.dot(m) - rim * hp.norm());
    }
    return best;
}

double lens_volume(const Lens& s, int n) {
    const double r = s.r, d = (s.b - s.a).norm();
    if (d >= 2 * r) return 0;
    if (n == 2) return 2 * r * r * std::acos(d / (2 * r)) - d / 2 * std::sqrt(4 * r * r - d * d);
    if (n == 3) return std::numbers::pi * (4 * r + d) * (2 * r - d) * (2 * r - d) / 12;
    throw UnsupportedError("lens_volume: n > 3");
}

// exact min of <g, y> over M^l(x) for polytopes and ellipsoids
double mac_min_linear(const ConvexBody& K, const Vec& x, double l, const Vec& g) {
    if (K.polytope()) {
        const Halfspaces h = mac_as_hpoly(K, x, l);
        const LpResult r = lp_maximize(h.A, h.b, -g);
        if (r.status != LpStatus::Optimal) throw std::logic_error("mac_min_linear: LP failed");
        return -r.value;
    }
    if (auto w = whitening(K)) return g.dot(w->center) + lens_min(lens_of(*w, x, l), w->L.transpose() * g);
    throw UnsupportedError("mac_min_linear: body type");
}

double mac_volume(const ConvexBody& K, const Vec& x, double l) {
    if (K.polytope()) {
        const Halfspaces h = mac_as_hpoly(K, x, l);
        return halfspace_volume(h.A, h.b);
    }
    if (auto w = whitening(K)) return lens_volume(lens_of(*w, x, l), K.dim()) * std::abs(w->L.determinant());
    throw UnsupportedError("mac_volume: body type");
}

double cap_vol(const Cap& C, double body_vol) {
    if (C.offset <= -support_value(C.body, -C.normal)) return body_vol;
    auto v = cap_volume_exact(C);
    if (!v) throw UnsupportedError("cap volume unavailable");
    return *v;
}

Mat plane_frame(const Vec& u) {
    Eigen::HouseholderQR<Mat> qr(u);
    Mat Q = qr.householderQ();
    return Q.rightCols(u.size() - 1);
}

// centroid of K intersect {<u, y> = beta}, u unit
Vec slice_centroid(const ConvexBody& K, const Vec& u, double beta) {
    const int n = K.dim();
    if (auto w = whitening(K)) {
        const Mat Q = w->L * w->L.transpose();
        return w->center + Q * u * ((beta - u.dot(w->center)) / u.dot(Q * u));
    }
    const auto* poly = K.polytope();
    if (!poly) throw UnsupportedError("slice_centroid: body type");
    const Mat U = plane_frame(u);
    const Vec x0 = beta * u;
    const Mat A = poly->A * U;
    const Vec b = poly->b - poly->A * x0;
    if (n == 2) {
        double lo = -1e300, hi = 1e300;
        for (int i = 0; i < A.rows(); ++i) {
            const double a = A(i, 0);
            if (a > 1e-15) hi = std::min(hi, b(i) / a);
            else if (a < -1e-15) lo = std::max(lo, b(i) / a);
        }
        return x0 + U.col(0) * ((lo + hi) / 2);
    }
    if (n != 3) throw UnsupportedError("slice_centroid: n > 3");
    const Mat V = halfspace_vertices(A, b);
    Vec2 mid = Vec2::Zero();
    for (int j = 0; j < V.cols(); ++j) mid += V.col(j);
    mid /= static_cast<double>(V.cols());
    std::vector<int> order(V.cols());
    for (int j = 0; j < V.cols(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::atan2(V(1, i) - mid(1), V(0, i) - mid(0)) < std::atan2(V(1, j) - mid(1), V(0, j) - mid(0));
    });
    double area = 0;
    Vec2 c = Vec2::Zero();
    for (size_t k = 0; k < order.size(); ++k) {
        const Vec2 p = V.col(order[k]) - mid, q = V.col(order[(k + 1) % order.size()]) - mid;
        const double t = (p(0) * q(1) - p(1) * q(0)) / 2;
        area += t;
        c += t * (p + q) / 3;
    }
    const Vec2 s = mid + c / area;
    return x0 + U * Vec(s);
}

Cap random_cap(const ConvexBody& K, double wlo, double whi, Rng& rng) {
    const Vec u = random_direction(K.dim(), rng);
    const double h = support_value(K, u);
    return cap_at_offset(K, u, (1 - uniform(rng, wlo, whi)) * h);
}

Vec point_at_ray(const ConvexBody& K, double ray, Rng& rng) {
    return (1 - ray) * boundary_ray(K, random_direction(K.dim(), rng));
}

// a point x with q in M^l(x), spread around q
Vec center_near(const ConvexBody& K, const Vec& q, double l, Rng& rng) {
    double s = K.outer_radius();
    for (int k = 0; k < 200; ++k, s /= 2) {
        const Vec x = q + s * uniform01(rng) * random_direction(K.dim(), rng);
        if (gauge(K, x) < 1 - 1e-9 && mac_depth(K, x, q) <= l) return x;
    }
    return q;
}

struct Tally {
    long trials = 0, violations = 0;
    double stat = 1e300;  // running minimum unless noted
    void check(bool ok) {
        ++trials;
        violations += !ok;
    }
};

struct Property {
    const char* suite;
    const char* name;
    bool core;
    std::function<PropertyResult(const std::vector<Prepared>&, long, Rng&)> run;
};

PropertyResult make(const char* method, const Tally& t, double measured, std::string note = {}) {
    PropertyResult r;
    r.method = method;
    r.trials = t.trials;
    r.violations = t.violations;
    r.measured = measured;
    r.note = std::move(note);
    return r;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// V-polytope from random points, the origin strictly inside
ConvexBody random_vpolytope(int n, Rng& rng, bool off_center) {
    for (;;) {
        const int k = n + 1 + static_cast<int>(uniform01(rng) * 9);
        Mat P(n, k);
        const Vec shift = off_center ? Vec(0.6 * uniform01(rng) * random_direction(n, rng)) : Vec(Vec::Zero(n));
        for (int j = 0; j < k; ++j) P.col(j) = uniform(rng, 0.3, 1.5) * random_direction(n, rng) + shift;
        try {
            ConvexBody K = ConvexBody::vpolytope(P);
            if (K.inner_radius() > 0.02) return K;
        } catch (const InputError&) {
        }
    }
}

// simplex with the origin at a random interior point
ConvexBody random_simplex(int n, Rng& rng) {
    for (;;) {
        Mat P(n, n + 1);
        for (int j = 0; j <= n; ++j) P.col(j) = random_direction(n, rng) * uniform(rng, 0.5, 1.5);
        Vec bary(n + 1);
        for (int j = 0; j <= n; ++j) bary(j) = uniform(rng, 0.05, 1);
        bary /= bary.sum();
        const Vec p = P * bary;
        P.colwise() -= p;
        try {
            ConvexBody K = ConvexBody::vpolytope(P);
            if (exact_volume(K).value() > 0.05) return K;
        } catch (const InputError&) {
        }
    }
}

std::vector<Property> properties() {
    std::vector<Property> ps;

    ps.push_back({"mahler", "rogers-shephard", true, [](const auto&, long trials, Rng& rng) {
        Tally t;
        double worst = 0;
        for (long k = 0; k < trials; ++k) {
            const int n = k % 2 ? 3 : 2;
            const ConvexBody K = random_vpolytope(n, rng, true);
            const double v = exact_volume(K).value();
            const double d = exact_volume(difference_body(K)).value();
            worst = std::max(worst, d / v / std::tgamma(2 * n + 1) * std::pow(std::tgamma(n + 1), 2));
            t.check(d <= std::pow(4.0, n) * v * (1 + kTol));
        }
        return make("exact", t, worst, "max vol(K - K) / (binom(2n, n) vol K) = " + fmt(worst));
    }});

    ps.push_back({"mahler", "mahler-volume", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        double lo[2] = {1e300, 1e300};
        for (long k = 0; k < trials; ++k) {
            const int n = k % 2 ? 3 : 2;
            ConvexBody K = k % 4 < 2 ? bodies[k % bodies.size()].K : (k % 8 < 6 ? random_vpolytope(n, rng, true)
                                                                               : random_simplex(n, rng));
            const double prod = exact_volume(K).value() * exact_volume(polar(K)).value();
            const int dim = K.dim();
            const double ratio = prod / std::pow(unit_ball_volume(dim), 2);
            lo[dim - 2] = std::min(lo[dim - 2], ratio);
            t.check(ratio >= (dim == 2 ? kMahlerKappa2 : kMahlerKappa3));
        }
        return make("exact", t, lo[0], "min ratio n=2 " + fmt(lo[0]) + ", n=3 " + fmt(lo[1]));
    }});

    ps.push_back({"caps", "ray-below-cap-width", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.005, 1.2, rng);
            const Vec p = cap_sample(C, rng);
            if (p.norm() < 1e-12) continue;
            t.check(ray_distance(B.K, p) <= C.relative_width + kTol);
        }
        return make("exact", t, 0);
    }});

    ps.push_back({"caps", "min-width-cap", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Vec p = point_at_ray(B.K, uniform(rng, 0.005, 0.95), rng);
            const double ray = ray_distance(B.K, p);
            const Cap C = min_width_cap(B.K, p);
            bool ok = std::abs(C.relative_width - ray) <= kTol && C.contains(p);
            for (int j = 0; j < 100 && ok; ++j) {
                const Vec v = random_direction(B.K.dim(), rng);
                const double off = v.dot(p);
                if (off >= support_value(B.K, v) - 1e-12) continue;
                ok = cap_at_offset(B.K, v, off).relative_width >= ray - kTol;
            }
            t.check(ok);
        }
        return make("exact", t, 0, "100 caps through each point");
    }});

    ps.push_back({"caps", "cap-volume-bounds", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        double lo = 1e300, hi = 0;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.005, 0.5, rng);
            const int n = B.K.dim();
            const double a = base_area_exact(C).value();
            const double w = C.absolute_width;
            const double v = cap_vol(C, B.vol);
            lo = std::min(lo, v / (a * w / n));
            hi = std::max(hi, v / (std::pow(2.0, n - 1) * a * w));
            t.check(a * w / n <= v * (1 + kTol) && v <= std::pow(2.0, n - 1) * a * w * (1 + kTol));
        }
        return make("exact", t, lo, "vol / (a w / n) >= " + fmt(lo) + ", vol / (2^(n-1) a w) <= " + fmt(hi));
    }});

    ps.push_back({"caps", "cap-expansion-volume", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.005, 0.9, rng);
            const double lambda = k % 2 ? 4.0 : 2.0;
            const double v = cap_vol(C, B.vol), ve = cap_vol(expand_cap(C, lambda), B.vol);
            t.check(ve <= std::pow(lambda, B.K.dim()) * v * (1 + kTol));
        }
        return make("exact", t, 0, "lambda in {2, 4}");
    }});

    ps.push_back({"caps", "cap-containment-expansion", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const int n = B.K.dim();
            const Cap C2 = random_cap(B.K, 0.02, 0.6, rng);
            std::optional<Cap> C1;
            double sigma = 0.5;
            for (int a = 0; a < 200 && !C1; ++a, sigma *= 0.97) {
                const Vec u = (C2.normal + sigma * random_direction(n, rng)).normalized();
                const double h = support_value(B.K, u);
                const Cap c = cap_at_offset(B.K, u, (1 - uniform(rng, 0.1, 1) * C2.relative_width) * h);
                if (cap_contains(C2, c)) C1 = c;
            }
            if (!C1) continue;
            bool ok = true;
            for (double lambda : {1.5, 2.0, 4.0}) ok = ok && cap_contains(expand_cap(C2, lambda), expand_cap(*C1, lambda));
            t.check(ok);
        }
        return make("exact", t, 0, "lambda in {1.5, 2, 4}");
    }});

    ps.push_back({"macbeath", "macbeath-overlap-absorption", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const double l = k % 2 ? 0.1 : 0.2;
            const Vec x = point_at_ray(B.K, uniform(rng, 0.002, 0.9), rng);
            const Vec w = mac_sample(macbeath_region(B.K, x, l), rng);
            const Vec y = center_near(B.K, w, l, rng);
            t.check(mac_contains(macbeath_region(B.K, x, 4 * l), macbeath_region(B.K, y, l)));
        }
        return make("exact+sampled", t, 0, "lambda in {1/10, 1/5}; curved bodies use 1000 boundary directions");
    }});

    ps.push_back({"macbeath", "macbeath-in-doubled-cap", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.005, 0.5, rng);
            const Vec q = cap_sample(C, rng);
            const Vec x = center_near(B.K, q, 0.2, rng);
            const Cap C2 = expand_cap(C, 2);
            t.check(mac_min_linear(B.K, x, 0.2, C.normal) >= C2.offset - kTol);
        }
        return make("exact", t, 0);
    }});

    ps.push_back({"macbeath", "macbeath-in-expanded-cap", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.005, 0.7, rng);
            const Vec x = cap_sample(C, rng);
            if (gauge(B.K, x) >= 1 - 1e-9) continue;
            const double l = k % 2 ? 1.0 : 0.5;
            t.check(mac_min_linear(B.K, x, l, C.normal) >= expand_cap(C, 1 + l).offset - kTol);
        }
        return make("exact", t, 0, "lambda in {1/2, 1}");
    }});

    ps.push_back({"macbeath", "macbeath-ray-similarity", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Vec x = point_at_ray(B.K, std::exp(uniform(rng, std::log(0.002), std::log(0.5))), rng);
            const Vec y = mac_sample(macbeath_region(B.K, x, 0.2), rng);
            const double rx = ray_distance(B.K, x), ry = ray_distance(B.K, y);
            t.check(rx / 2 <= ry + kTol && ry <= 2 * rx + kTol);
        }
        return make("exact", t, 0);
    }});

    ps.push_back({"caps", "representative-caps-8-similar", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const double eps = k % 2 ? 1.0 / 64 : 1.0 / 32;
            const Vec y = point_at_ray(B.Kp, eps * uniform(rng, 0.05, 1), rng);
            const MacbeathRegion M = macbeath_region(B.Kp, y, 0.2);
            const Vec x = mac_sample(M, rng), z = mac_sample(M, rng);
            t.check(similar_caps(representative_cap(B.K, B.Kp, x, eps).cap, representative_cap(B.K, B.Kp, z, eps).cap, 8));
        }
        return make("exact", t, 0, "eps in {1/32, 1/64}");
    }});

    ps.push_back({"caps", "caps-16-similar", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const double eps = k % 2 ? 1.0 / 64 : 1.0 / 32;
            const Vec y = point_at_ray(B.Kp, eps * uniform(rng, 0.05, 1), rng);
            const MacbeathRegion M = macbeath_region(B.Kp, y, 0.2);
            const Vec u = mac_sample(M, rng).normalized();
            const Cap Cx = cap_at_offset(B.K, u, (1 - eps * uniform(rng, 0.5, 2)) * support_value(B.K, u));
            const Vec z = mac_sample(M, rng);
            t.check(similar_caps(Cx, representative_cap(B.K, B.Kp, z, eps).cap, 16));
        }
        return make("exact", t, 0, "eps in {1/32, 1/64}, widths in [eps/2, 2 eps]");
    }});

    ps.push_back({"macbeath", "mnet-packing", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        long pairs = 0;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            std::vector<Vec> cand;
            for (int j = 0; j < 40; ++j)
                cand.push_back(j % 2 ? uniform_sample(B.K, rng) : point_at_ray(B.K, uniform(rng, 0.001, 0.2), rng));
            const MNet net = build_mnet(B.K, cand, 2);
            bool ok = true;
            for (size_t i = 0; i < net.centers.size(); ++i)
                for (size_t j = i + 1; j < net.centers.size(); ++j, ++pairs)
                    ok = ok && mac_disjoint(macbeath_region(B.K, net.centers[i], net.packing_scale()),
                                            macbeath_region(B.K, net.centers[j], net.packing_scale()));
            t.check(ok);
        }
        return make("exact", t, static_cast<double>(pairs), std::to_string(pairs) + " pairs at scale 1/(4c), c = 2");
    }});

    ps.push_back({"macbeath", "mnet-buffering", true, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const ConvexBody Ke = scaled(B.K, 1.1);
            std::vector<Vec> cand;
            for (int j = 0; j < 20; ++j) cand.push_back(point_at_ray(B.K, uniform(rng, 0.0, 0.3), rng));
            const MNet net = build_mnet(Ke, cand, 2);
            bool ok = true;
            for (const Vec& x : net.centers) {
                // c-expansion of M^{1/c}(x) is M^1(x) of K_eps
                if (Ke.polytope()) {
                    const Halfspaces h = mac_as_hpoly(Ke, x, 1.0);
                    const Mat V = halfspace_vertices(h.A, h.b);
                    for (int j = 0; j < V.cols(); ++j) ok = ok && gauge(Ke, V.col(j)) <= 1 + kTol;
                } else {
                    const MacbeathRegion M = macbeath_region(Ke, x, 1.0);
                    for (int j = 0; j < 200; ++j)
                        ok = ok && gauge(Ke, mac_boundary_point(M, random_direction(B.K.dim(), rng))) <= 1 + kTol;
                }
            }
            t.check(ok);
        }
        return make("exact+sampled", t, 0, "ambient (1.1)K; curved bodies use 200 boundary directions");
    }});

    ps.push_back({"macbeath", "cap-in-macbeath-2n", false, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const int n = B.K.dim();
            const Cap C = random_cap(B.K, 0.01, 1.0 / 3, rng);
            const Vec p = slice_centroid(B.K, C.normal, C.offset);
            bool ok = true;
            if (const auto* poly = B.K.polytope()) {
                // p - (C - p)/(2n) inside K, facet by facet
                for (int i = 0; i < poly->A.rows(); ++i) {
                    const Vec a = poly->A.row(i).transpose();
                    const double lowest = -cap_max(C, -a);
                    ok = ok && a.dot(p) * (1 + 0.5 / n) - lowest / (2 * n) <= poly->b(i) + kTol;
                }
            } else {
                ok = mac_depth(B.K, p, C.apex) <= 2 * n + kTol;
                for (int j = 0; j < 300 && ok; ++j) ok = mac_depth(B.K, p, cap_sample(C, rng)) <= 2 * n + kTol;
            }
            t.check(ok);
        }
        return make("exact+sampled", t, 0, "1/3-shallow caps, p = base centroid");
    }});

    ps.push_back({"macbeath", "macbeath-volume-vs-cap", false, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        double lo = 1e300;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Cap C = random_cap(B.K, 0.01, 1.0 / 3, rng);
            const Vec p = slice_centroid(B.K, C.normal, C.offset);
            const double vm = mac_volume(B.K, p, 1.0), vc = cap_vol(C, B.vol);
            lo = std::min(lo, vm / vc);
            t.check(vm <= 2 * vc * (1 + kTol));
        }
        return make("exact", t, lo, "upper bound checked; lower ratio vol M(p) / vol C measured " + fmt(lo));
    }});

    ps.push_back({"macbeath", "wide-macbeath-volume", false, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        for (long k = 0; k < trials; ++k) {
            const auto& B = bodies[k % bodies.size()];
            const Vec p = k % 2 ? point_at_ray(B.K, 1.0 / 3, rng) : Vec(uniform_sample(B.K, rng) * (2.0 / 3));
            const double r = mac_volume(B.K, p, 1.0) / B.vol;
            t.stat = std::min(t.stat, r);
            t.check(r >= kWideMacbeathKappa);
        }
        return make("exact", t, t.stat, "min vol_K(M(p)) " + fmt(t.stat) + " for ray(p) >= 1/3");
    }});

    ps.push_back({"mahler", "mahler-cap-product", false, [](const auto&, long trials, Rng& rng) {
        Tally t;
        const long configs = std::max(200L, trials / 2);
        const CapProduct a = mahler_cap_product(0.1, configs, rng);
        const CapProduct b = mahler_cap_product(0.05, configs, rng);
        t.check(a.min_ratio >= kCapProductKappa);
        t.check(b.min_ratio >= kCapProductKappa);
        t.check(b.min_ratio >= a.min_ratio / 2);
        PropertyResult r = make("exact", t, std::min(a.min_ratio, b.min_ratio),
                                "min / eps^3: eps 0.1 " + fmt(a.min_ratio) + ", eps 0.05 " + fmt(b.min_ratio) + " (" +
                                    std::to_string(configs) + " configs each)");
        r.trials = 2 * configs;
        return r;
    }});

    ps.push_back({"mahler", "mahler-cap-macbeath", false, [](const auto& bodies, long trials, Rng& rng) {
        Tally t;
        std::string note;
        for (double eps : {0.1, 0.05, 0.025}) {
            double lo = 1e300;
            for (long k = 0; k < trials / 3 + 1; ++k) {
                const auto& B = bodies[k % 5];
                const Vec x = point_at_ray(B.Kp, eps, rng);
                const Vec u = mac_sample(macbeath_region(B.Kp, x, 0.2), rng).normalized();
                const Cap C = cap_at_offset(B.K, u, (1 - eps * uniform(rng, 1, 2)) * support_value(B.K, u));
                const double r = cap_vol(C, B.vol) / B.vol * mac_volume(B.Kp, x, 0.2) / B.pvol / std::pow(eps, 3);
                lo = std::min(lo, r);
                t.check(r >= kCapMacbeathKappa);
            }
            note += (note.empty() ? "min / eps^3: " : ", ") + std::string("eps ") + fmt(eps) + " " + fmt(lo);
        }
        return make("exact", t, 0, note);
    }});

    return ps;
}

}  // namespace

std::vector<NamedBody> lemma_bodies(std::uint64_t seed) {
    Rng rng = derive_rng(seed, 0x6c656d);
    std::vector<NamedBody> out;
    for (int n : {2, 3}) {
        const std::string s = "-" + std::to_string(n);
        out.push_back({"square" + s, ConvexBody::cube(n)});
        out.push_back({"disk" + s, ConvexBody::ball(n)});
        out.push_back({"polytope" + s, random_hpolytope(n, 3 * n + 4, rng)});
        out.push_back({"ellipse" + s, random_ellipsoid(n, rng)});
        out.push_back({"l1" + s, ConvexBody::lp_ball(n, 1)});
    }
    return out;
}

CapProduct mahler_cap_product(double eps, long configs, Rng& rng) {
    const auto bodies = prepare(rng());
    std::vector<const Prepared*> planar;
    for (const auto& b : bodies)
        if (b.K.dim() == 2) planar.push_back(&b);
    CapProduct out{eps, 0, 1e300, ""};
    while (out.configs < configs) {
        const Prepared& B = *planar[out.configs % planar.size()];
        const Vec u = random_direction(2, rng);
        const Cap C = cap_at_offset(B.K, u, (1 - eps * uniform(rng, 1, 2)) * support_value(B.K, u));
        // D: cap of K* whose base meets the ray along u inside K*
        std::optional<Cap> D;
        double sigma = 1;
        for (int a = 0; a < 200 && !D; ++a, sigma *= 0.97) {
            const Vec v = (u + sigma * random_direction(2, rng)).normalized();
            const double beta = (1 - eps * uniform(rng, 1, 2)) * support_value(B.Kp, v);
            if (v.dot(u) <= 0) continue;
            if (gauge(B.Kp, u * (beta / v.dot(u))) < 1 - 1e-9) D = cap_at_offset(B.Kp, v, beta);
        }
        if (!D) continue;
        const double r = cap_vol(C, B.vol) / B.vol * cap_vol(*D, B.pvol) / B.pvol / std::pow(eps, 3);
        if (r < out.min_ratio) {
            out.min_ratio = r;
            out.argmin_body = B.name;
        }
        ++out.configs;
    }
    return out;
}

MonotonicityReport cvp_monotonicity(long instances, Rng& rng) {
    const std::vector<double> eps_list{0.5, 0.25, 0.1, 0.05};
    const std::vector<std::string> fams{"square", "diamond", "hpoly", "ellipse"};
    MonotonicityReport rep;
    for (size_t f = 0; f < fams.size(); ++f) {
        const ConvexBody N = norm_family(fams[f], 2, rng);
        std::vector<VerifiedCovering> covers;
        for (double e : eps_list) covers.push_back(cvp_covering(N, e / 7, rng));
        const long count = instances / static_cast<long>(fams.size()) + (static_cast<long>(f) < instances % 4);
        for (long k = 0; k < count; ++k) {
            const Lattice L(random_basis(2, rng));
            Vec t(2);
            t << uniform(rng, -5, 5), uniform(rng, -5, 5);
            double prev = -1;
            for (size_t i = 0; i < eps_list.size(); ++i) {
                const double d = approx_cvp(CvpInstance{L, t, N, eps_list[i]}, covers[i]).distance;
                if (prev >= 0) {
                    ++rep.steps;
                    if (d > prev * (1 + 1e-12)) {
                        ++rep.increases;
                        rep.worst_increase = std::max(rep.worst_increase, d / prev - 1);
                    }
                }
                prev = d;
            }
        }
    }
    return rep;
}

std::vector<PropertyResult> run_lemmas(const std::string& suite, const LemmaOptions& opt) {
    if (suite != "all" && suite != "caps" && suite != "macbeath" && suite != "mahler")
        throw InputError("run_lemmas: unknown suite " + suite);
    if (opt.trials < 1) throw InputError("run_lemmas: trials must be positive");
    const auto bodies = prepare(opt.seed);
    const auto ps = properties();
    std::vector<size_t> picked;
    for (size_t i = 0; i < ps.size(); ++i)
        if (suite == "all" || suite == ps[i].suite) picked.push_back(i);
    std::vector<PropertyResult> out(picked.size());
    auto run_one = [&](size_t k) {
        const size_t i = picked[k];
        Rng rng = derive_rng(opt.seed, 0x70726f70, i);
        PropertyResult r = ps[i].run(bodies, opt.trials, rng);
        r.suite = ps[i].suite;
        r.name = ps[i].name;
        r.core = ps[i].core;
        out[k] = std::move(r);
    };
    const size_t workers = static_cast<size_t>(std::max(1, opt.threads));
    std::vector<std::future<void>> jobs;
    for (size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (size_t k = w; k < picked.size(); k += workers) run_one(k);
        }));
    for (auto& j : jobs) j.get();
    if (suite == "all") {
        Rng rng = derive_rng(opt.seed, 0x6d6f6e6f);
        const MonotonicityReport m = cvp_monotonicity(std::min(opt.trials, 200L), rng);
        PropertyResult r;
        r.suite = "lattice";
        r.name = "cvp-distance-monotone-in-eps";
        r.method = "measured";
        r.trials = m.steps;
        r.measured = m.steps ? static_cast<double>(m.increases) / static_cast<double>(m.steps) : 0;
        r.note = std::to_string(m.increases) + " of " + std::to_string(m.steps) +
                 " eps steps increased the distance, worst by " + fmt(100 * m.worst_increase) + "%; reported, not asserted";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mcover
