#include "mcover/caps.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcover/hull.hpp"
#include "mcover/lp.hpp"

namespace mcover {

namespace {

// orthonormal basis whose first column is the unit vector u
Mat frame_for(const Vec& u) {
    const int n = static_cast<int>(u.size());
    Eigen::HouseholderQR<Mat> qr(u);
    Mat Q = qr.householderQ() * Mat::Identity(n, n);
    Q.col(0) = u;
    return Q;
}

double unit_ball_cap_volume(int n, double s) {
    s = std::clamp(s, -1.0, 1.0);
    if (n == 2) return std::acos(s) - s * std::sqrt(1 - s * s);
    return std::numbers::pi * (1 - s) * (1 - s) * (2 + s) / 3;
}

}  // namespace

Hyperplane Cap::base_plane() const { return make_hyperplane(normal, offset); }

Hyperplane Cap::support_plane() const { return Hyperplane{normal, support}; }

bool Cap::contains(const Vec& y) const { return normal.dot(y) >= offset - 1e-12 && membership(body, y); }

Cap cap_at_offset(const ConvexBody& K, const Vec& normal, double offset) {
    if (normal.size() != K.dim()) throw InputError("cap: dimension mismatch");
    const double nn = normal.norm();
    if (!(nn > 0)) throw InputError("cap: zero normal");
    Cap c{K, normal / nn, offset / nn, 0, Vec(), 0, 0, false};
    Support s = support(K, c.normal);
    c.support = s.value;
    c.apex = s.point;
    if (!(c.offset < c.support - 1e-14 * std::max(1.0, std::abs(c.support))))
        throw EmptyCapError("cap: plane misses the body");
    const double far = support_value(K, -c.normal);
    c.absolute_width = std::min(c.support - c.offset, c.support + far);
    c.relative_width = c.absolute_width / c.support;
    c.full_body = c.offset <= 0;
    return c;
}

Cap cap_from_plane(const ConvexBody& K, const Hyperplane& plane) {
    if (!(plane.offset > 0)) throw InputError("cap_from_plane: plane through the origin");
    return cap_at_offset(K, plane.normal, plane.offset);
}

double ray_distance(const ConvexBody& K, const Vec& p) {
    if (p.size() != K.dim()) throw InputError("ray_distance: dimension mismatch");
    if (!(p.norm() > 0)) throw InputError("ray_distance: p is the origin");
    const double g = gauge(K, p);
    return g <= 1 ? 1 - g : 1 - 1 / g;
}

Cap min_width_cap(const ConvexBody& K, const Vec& p) {
    if (p.size() != K.dim()) throw InputError("min_width_cap: dimension mismatch");
    if (!(p.norm() > 0)) throw InputError("min_width_cap: p is the origin");
    const double g = gauge(K, p);
    if (!(g < 1)) throw InputError("min_width_cap: p is not interior");
    const Vec p0 = p / g;
    const Vec u = normal_at(K, p0);
    return cap_at_offset(K, u, u.dot(p));
}

Cap expand_cap(const Cap& cap, double lambda) {
    if (!(lambda >= 1)) throw InputError("expand_cap: lambda must be >= 1");
    if (lambda == 1) return cap;
    const double off = cap.support - lambda * (cap.support - cap.offset);
    return cap_at_offset(cap.body, cap.normal, off);
}

Cap representative_cap_unchecked(const ConvexBody& K, const ConvexBody& Kpolar, const Vec& z, double eps) {
    if (!(eps > 0 && eps < 1)) throw InputError("representative_cap: eps out of range");
    const double g = gauge(Kpolar, z);
    if (!(g > 0)) throw InputError("representative_cap: z is the origin");
    const Vec zhat = z / (g * (1 - eps));
    const double nz = zhat.norm();
    return cap_from_plane(K, Hyperplane{zhat / nz, 1 / nz});
}

RepresentativeCap representative_cap(const ConvexBody& K, const ConvexBody& Kpolar, const Vec& z, double eps) {
    if (!(eps > 0 && eps <= 0.25)) throw InputError("representative_cap: eps must lie in (0, 1/4]");
    if (z.size() != K.dim()) throw InputError("representative_cap: dimension mismatch");
    return RepresentativeCap{representative_cap_unchecked(K, Kpolar, z, eps), z, eps};
}

double cap_max(const Cap& cap, const Vec& w) {
    const ConvexBody& K = cap.body;
    const double far = support_value(K, -cap.normal);
    if (cap.offset <= -far) return support_value(K, w);
    if (const auto* poly = K.polytope()) {
        const int m = static_cast<int>(poly->A.rows());
        Mat A(m + 1, K.dim());
        Vec b(m + 1);
        A.topRows(m) = poly->A;
        b.head(m) = poly->b;
        A.row(m) = -cap.normal.transpose();
        b(m) = -cap.offset;
        LpResult r = lp_maximize(A, b, w);
        if (r.status == LpStatus::Optimal) return r.value;
    }
    // ellipsoids: a ball cut by one halfspace after whitening y = c + L u
    std::optional<Mat> L;
    Vec c0;
    if (const auto* e = std::get_if<Ellipsoid>(&K.representation())) {
        L = Mat(e->shape.llt().matrixL());
        c0 = e->center;
    } else if (const auto* bl = std::get_if<LpBall>(&K.representation()); bl && bl->p == 2) {
        L = Mat(Mat::Identity(K.dim(), K.dim()) * bl->radius);
        c0 = Vec::Zero(K.dim());
    }
    if (L) {
        const Vec g = L->transpose() * w;
        const Vec a = L->transpose() * cap.normal;
        const double an = a.norm();
        const Vec ah = a / an;
        const double tau = (cap.offset - cap.normal.dot(c0)) / an;
        const double gn = g.norm();
        const double base = w.dot(c0);
        if (tau <= -1 || gn == 0 || g.dot(ah) >= tau * gn) return base + gn;
        const double ga = g.dot(ah);
        const double perp = std::sqrt(std::max(0.0, g.squaredNorm() - ga * ga));
        return base + tau * ga + std::sqrt(std::max(0.0, 1 - tau * tau)) * perp;
    }
    // 1-D dual: max over the cap equals min over mu >= 0 of h_K(w + mu u) - mu beta
    auto phi = [&](double mu) { return support_value(K, w + mu * cap.normal) - mu * cap.offset; };
    double a = 0, b = 1;
    double fb = phi(b);
    for (int it = 0; it < 80; ++it) {
        const double f2 = phi(2 * b);
        if (f2 >= fb) break;
        a = b;
        b *= 2;
        fb = f2;
    }
    double lo = a, hi = 2 * b;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    double best = std::min({phi(0), f1, f2});
    for (int it = 0; it < 150 && hi - lo > 1e-15 * (1 + hi); ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = phi(x1);
            best = std::min(best, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = phi(x2);
            best = std::min(best, f2);
        }
    }
    return best;
}

bool cap_contains(const Cap& outer, const Cap& inner) {
    if (outer.offset <= -support_value(outer.body, -outer.normal)) return true;
    const double lowest = -cap_max(inner, -outer.normal);
    return lowest >= outer.offset - kExactTol * std::max(1.0, std::abs(outer.offset));
}

bool similar_caps(const Cap& c1, const Cap& c2, double lambda) {
    return cap_contains(expand_cap(c2, lambda), c1) && cap_contains(expand_cap(c1, lambda), c2);
}

ShellSampler::ShellSampler(const ConvexBody& K, double inner_factor, SamplerConfig cfg)
    : K_(K), inner_(std::max(0.0, inner_factor)), base_(K, cfg) {}

Vec ShellSampler::operator()(Rng& rng) {
    for (;;) {
        const Vec p = base_(rng);
        const double g = gauge(K_, p);
        if (!(g > 0)) continue;
        return uniform(rng, inner_, 1.0) * (p / g);
    }
}

Vec shell_sample(const ConvexBody& K, double eps, Rng& rng) {
    if (!(eps > 0 && eps < 0.25)) throw InputError("shell_sample: eps must lie in (0, 1/4)");
    ShellSampler s(K, 1 - 4 * eps);
    return s(rng);
}

Vec polar_shell_sample(const ConvexBody& Kpolar, double eps, Rng& rng) {
    if (!(eps > 0 && eps < 0.5)) throw InputError("polar_shell_sample: eps must lie in (0, 1/2)");
    ShellSampler s(Kpolar, 1 - 2 * eps);
    return s(rng);
}

CapSampler::CapSampler(const Cap& cap, CapSamplerConfig cfg) : cap_(cap), cfg_(cfg) {
    const int n = cap.body.dim();
    frame_ = frame_for(cap.normal);
    lo_.resize(n);
    hi_.resize(n);
    lo_(0) = std::max(cap.offset, -support_value(cap.body, -cap.normal));
    hi_(0) = cap.support;
    for (int j = 1; j < n; ++j) {
        const Vec q = frame_.col(j);
        hi_(j) = cap_max(cap, q);
        lo_(j) = -cap_max(cap, -q);
    }
}

double CapSampler::acceptance_rate() const {
    return proposals_ ? static_cast<double>(accepted_) / static_cast<double>(proposals_) : 1.0;
}

Vec CapSampler::walk(Rng& rng) {
    const int n = cap_.body.dim();
    const ConvexBody& K = cap_.body;
    auto step = [&](Vec& x) {
        const Vec d = random_direction(n, rng);
        double tp = chord_extent(K, x, d), tm = chord_extent(K, x, -d);
        const double a = cap_.normal.dot(d);
        const double slack = std::max(0.0, cap_.normal.dot(x) - cap_.offset);
        if (a < 0) tp = std::min(tp, slack / -a);
        if (a > 0) tm = std::min(tm, slack / a);
        x += uniform(rng, -tm, tp) * d;
    };
    if (!walker_) {
        Vec start = cap_.full_body ? Vec::Zero(n) : Vec(cap_.apex * (1 - cap_.relative_width / 2));
        walker_ = start;
        for (int i = 0; i < 10 * n * n; ++i) step(*walker_);
    }
    for (int i = 0; i < cfg_.walk_steps; ++i) step(*walker_);
    return *walker_;
}

Vec CapSampler::operator()(Rng& rng) {
    if (fallback_) return walk(rng);
    const int n = cap_.body.dim();
    Vec c(n);
    for (long t = 0; t < cfg_.rejection_budget; ++t) {
        for (int i = 0; i < n; ++i) c(i) = uniform(rng, lo_(i), hi_(i));
        ++proposals_;
        const Vec x = frame_ * c;
        if (cap_.contains(x)) {
            ++accepted_;
            return x;
        }
        if (proposals_ >= cfg_.probe && acceptance_rate() < cfg_.acceptance_floor) break;
    }
    fallback_ = true;
    return walk(rng);
}

Vec cap_sample(const Cap& cap, Rng& rng) {
    CapSampler s(cap);
    return s(rng);
}

std::optional<double> halfspace_part_volume(const ConvexBody& K, const Vec& w, double beta) {
    const int n = K.dim();
    if (beta >= support_value(K, w)) return 0.0;
    if (beta <= -support_value(K, -w)) return exact_volume(K);
    if (const auto* poly = K.polytope()) {
        const int m = static_cast<int>(poly->A.rows());
        Mat A(m + 1, n);
        Vec b(m + 1);
        A.topRows(m) = poly->A;
        b.head(m) = poly->b;
        A.row(m) = -w.transpose();
        b(m) = -beta;
        return halfspace_volume(A, b);
    }
    if (const auto* e = std::get_if<Ellipsoid>(&K.representation())) {
        if (n > 3) return std::nullopt;
        const double sw = std::sqrt(w.dot(e->shape * w));
        const double s = (beta - w.dot(e->center)) / sw;
        return unit_ball_cap_volume(n, s) * std::sqrt(e->shape.determinant());
    }
    if (const auto* a = std::get_if<AffineImage>(&K.representation())) {
        const Vec wi = a->map.transpose() * w;
        const double nw = wi.norm();
        auto v = halfspace_part_volume(*a->inner, wi / nw, (beta - w.dot(a->shift)) / nw);
        if (!v) return std::nullopt;
        return *v * std::abs(a->map.determinant());
    }
    return std::nullopt;
}

std::optional<double> slice_area(const ConvexBody& K, const Vec& w, double beta) {
    const int n = K.dim();
    if (beta >= support_value(K, w) || beta <= -support_value(K, -w)) return 0.0;
    if (const auto* poly = K.polytope()) {
        const int m = static_cast<int>(poly->A.rows());
        Mat A(m + 1, n);
        Vec b(m + 1);
        A.topRows(m) = poly->A;
        b.head(m) = poly->b;
        A.row(m) = -w.transpose();
        b(m) = -beta;
        Mat V;
        try {
            V = halfspace_vertices(A, b);
        } catch (const InputError&) {
            return 0.0;
        }
        const Mat Q = frame_for(w);
        const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
        std::vector<Vec> on;
        for (int j = 0; j < V.cols(); ++j)
            if (std::abs(w.dot(V.col(j)) - beta) <= 1e-9 * scale)
                on.push_back(Q.rightCols(n - 1).transpose() * V.col(j));
        if (static_cast<int>(on.size()) < n) return 0.0;
        Mat P(n - 1, static_cast<Eigen::Index>(on.size()));
        for (size_t j = 0; j < on.size(); ++j) P.col(static_cast<Eigen::Index>(j)) = on[j];
        try {
            return convex_hull(P).volume;
        } catch (const InputError&) {
            return 0.0;
        }
    }
    if (const auto* e = std::get_if<Ellipsoid>(&K.representation())) {
        const double sw = std::sqrt(w.dot(e->shape * w));
        const double s = std::clamp((beta - w.dot(e->center)) / sw, -1.0, 1.0);
        return unit_ball_volume(n - 1) * std::pow(1 - s * s, (n - 1) / 2.0) * std::sqrt(e->shape.determinant()) / sw;
    }
    if (const auto* a = std::get_if<AffineImage>(&K.representation())) {
        const Vec wi = a->map.transpose() * w;
        const double nw = wi.norm();
        auto v = slice_area(*a->inner, wi / nw, (beta - w.dot(a->shift)) / nw);
        if (!v) return std::nullopt;
        return *v * std::abs(a->map.determinant()) / nw;
    }
    return std::nullopt;
}

std::optional<double> cap_volume_exact(const Cap& cap) {
    return halfspace_part_volume(cap.body, cap.normal, cap.offset);
}

std::optional<double> base_area_exact(const Cap& cap) { return slice_area(cap.body, cap.normal, cap.offset); }

Estimate cap_volume(const Cap& cap, Rng& rng, long samples) {
    if (auto v = cap_volume_exact(cap)) return {*v, 0.0};
    if (samples < 1000) throw InputError("cap_volume: need at least 1000 samples");
    const int n = cap.body.dim();
    const Mat Q = frame_for(cap.normal);
    Vec lo(n), hi(n);
    lo(0) = std::max(cap.offset, -support_value(cap.body, -cap.normal));
    hi(0) = cap.support;
    for (int j = 1; j < n; ++j) {
        hi(j) = cap_max(cap, Q.col(j));
        lo(j) = -cap_max(cap, -Q.col(j));
    }
    const double box = (hi - lo).prod();
    long in = 0;
    Vec c(n);
    for (long t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) c(i) = uniform(rng, lo(i), hi(i));
        if (cap.contains(Q * c)) ++in;
    }
    const double f = static_cast<double>(in) / static_cast<double>(samples);
    return {box * f, box * std::sqrt(f * (1 - f) / static_cast<double>(samples))};
}

Estimate base_area(const Cap& cap, Rng& rng, long samples) {
    if (auto v = base_area_exact(cap)) return {*v, 0.0};
    if (samples < 1000) throw InputError("base_area: need at least 1000 samples");
    const int n = cap.body.dim();
    const Mat Q = frame_for(cap.normal);
    Vec lo(n - 1), hi(n - 1);
    for (int j = 1; j < n; ++j) {
        hi(j - 1) = cap_max(cap, Q.col(j));
        lo(j - 1) = -cap_max(cap, -Q.col(j));
    }
    const double box = (hi - lo).prod();
    long in = 0;
    Vec c(n);
    c(0) = cap.offset;
    for (long t = 0; t < samples; ++t) {
        for (int i = 1; i < n; ++i) c(i) = uniform(rng, lo(i - 1), hi(i - 1));
        if (membership(cap.body, Q * c)) ++in;
    }
    const double f = static_cast<double>(in) / static_cast<double>(samples);
    return {box * f, box * std::sqrt(f * (1 - f) / static_cast<double>(samples))};
}

}  // namespace mcover
