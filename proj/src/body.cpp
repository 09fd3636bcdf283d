#include "mcover/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mcover/hull.hpp"

namespace mcover {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Vec& x, double p) {
    if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
    if (p == 1.0) return x.cwiseAbs().sum();
    if (p == 2.0) return x.norm();
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double conjugate_exponent(double p) {
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

// positive root s of (v/s - c)^T P (v/s - c) = 1 given alpha = 1 - c^T P c > 0
double ellipsoid_gauge(const Mat& P, const Vec& c, double alpha, const Vec& v) {
    const Vec Pv = P * v;
    const double gamma = v.dot(Pv);
    if (gamma <= 0.0) return 0.0;
    const double beta = c.dot(Pv);
    const double root = std::sqrt(beta * beta + alpha * gamma);
    return beta >= 0 ? gamma / (root + beta) : (root - beta) / alpha;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return a(i) < b(i);
    return false;
}

PolytopeData polytope_from_vertices(const Mat& V) {
    Hull h;
    try {
        h = convex_hull(V);
    } catch (const InputError&) {
        throw InputError("vpolytope: vertices are not full-dimensional");
    }
    for (int j = 0; j < h.offsets.size(); ++j)
        if (h.offsets(j) <= 1e-12) throw InputError("vpolytope: origin is not interior");
    PolytopeData d;
    d.A = h.normals;
    d.b = h.offsets;
    d.V.resize(V.rows(), static_cast<Eigen::Index>(h.vertices.size()));
    for (size_t i = 0; i < h.vertices.size(); ++i) d.V.col(static_cast<Eigen::Index>(i)) = V.col(h.vertices[i]);
    d.volume = h.volume;
    return d;
}

PolytopeData polytope_from_halfspaces(const Mat& A, const Vec& b) {
    const int n = static_cast<int>(A.cols());
    Mat dual(n, A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        if (!(b(i) > 0)) throw InputError("hpolytope: offsets must be positive");
        if (A.row(i).norm() == 0.0) throw InputError("hpolytope: zero normal");
        dual.col(i) = A.row(i).transpose() / b(i);
    }
    Hull h;
    try {
        h = convex_hull(dual);
    } catch (const InputError&) {
        throw InputError("hpolytope: system is unbounded");
    }
    PolytopeData d;
    d.A.resize(static_cast<Eigen::Index>(h.vertices.size()), n);
    d.b.resize(static_cast<Eigen::Index>(h.vertices.size()));
    for (size_t k = 0; k < h.vertices.size(); ++k) {
        const int i = h.vertices[k];
        const double s = A.row(i).norm();
        d.A.row(static_cast<Eigen::Index>(k)) = A.row(i) / s;
        d.b(static_cast<Eigen::Index>(k)) = b(i) / s;
    }
    d.V.resize(n, h.offsets.size());
    for (int j = 0; j < h.offsets.size(); ++j) {
        if (h.offsets(j) <= 1e-12) throw InputError("hpolytope: system is unbounded");
        d.V.col(j) = h.normals.row(j).transpose() / h.offsets(j);
    }
    d.volume = convex_hull(d.V).volume;
    return d;
}

}  // namespace

struct ConvexBody::Impl {
    Representation rep;
    int n = 0;
    double r = 0, r_outer = 0;
    OracleConfig oracle;
    std::optional<PolytopeData> poly;
    Vec lo, hi;
    // ellipsoid
    Mat P;
    double alpha = 1;
    // affine image
    Mat Minv;
    Vec z;  // preimage of the origin
    bool shifted = false;
};

Hyperplane make_hyperplane(const Vec& normal, double offset) {
    const double s = normal.norm();
    if (!(s > 0) || !std::isfinite(s)) throw InputError("hyperplane: zero normal");
    Hyperplane h{normal / s, offset / s};
    if (!(h.offset > 0)) throw InputError("hyperplane: plane passes through or behind the origin");
    return h;
}

int ConvexBody::dim() const { return impl_->n; }
double ConvexBody::inner_radius() const { return impl_->r; }
double ConvexBody::outer_radius() const { return impl_->r_outer; }
const Representation& ConvexBody::representation() const { return impl_->rep; }
const PolytopeData* ConvexBody::polytope() const { return impl_->poly ? &*impl_->poly : nullptr; }
const OracleConfig& ConvexBody::oracle() const { return impl_->oracle; }
const Vec& ConvexBody::box_lo() const { return impl_->lo; }
const Vec& ConvexBody::box_hi() const { return impl_->hi; }

const char* ConvexBody::type_name() const {
    return std::visit(overloaded{[](const HPolytope&) { return "hpoly"; }, [](const VPolytope&) { return "vpoly"; },
                                 [](const Ellipsoid&) { return "ellipsoid"; }, [](const LpBall&) { return "lpball"; },
                                 [](const AffineImage&) { return "affine"; }, [](const PolarBody&) { return "polar"; }},
                      impl_->rep);
}

ConvexBody ConvexBody::with_radii(double r, double r_outer) const {
    if (!(r > 0) || !(r_outer >= r)) throw InputError("radii must satisfy 0 < r <= r_outer");
    auto p = std::make_shared<Impl>(*impl_);
    p->r = r;
    p->r_outer = r_outer;
    return ConvexBody(std::move(p));
}

ConvexBody ConvexBody::with_oracle(const OracleConfig& cfg) const {
    if (!(cfg.membership_tolerance > 0) || !(cfg.ray_search_tolerance > 0) || cfg.max_bisection_steps <= 0)
        throw InputError("oracle config values must be positive");
    if (cfg.membership_tolerance > impl_->r / 100) throw InputError("membership tolerance exceeds r/100");
    auto p = std::make_shared<Impl>(*impl_);
    p->oracle = cfg;
    return ConvexBody(std::move(p));
}

ConvexBody ConvexBody::finish(std::shared_ptr<Impl> p) {
    const int n = p->n;
    ConvexBody tmp{std::shared_ptr<const Impl>(p)};
    p->lo.resize(n);
    p->hi.resize(n);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1;
        p->hi(i) = support_value(tmp, e);
        p->lo(i) = -support_value(tmp, -e);
    }

    double r = -1, ro = -1;
    std::visit(overloaded{
                   [&](const HPolytope&) {
                       r = p->poly->b.minCoeff();
                       ro = p->poly->V.colwise().norm().maxCoeff();
                   },
                   [&](const VPolytope&) {
                       r = p->poly->b.minCoeff();
                       ro = p->poly->V.colwise().norm().maxCoeff();
                   },
                   [&](const Ellipsoid& e) {
                       Eigen::SelfAdjointEigenSolver<Mat> es(e.shape);
                       const double cn = e.center.norm();
                       ro = cn + std::sqrt(es.eigenvalues().maxCoeff());
                       r = std::sqrt(es.eigenvalues().minCoeff()) - cn;
                   },
                   [&](const LpBall& b) {
                       const double inv = std::isinf(b.p) ? 0.0 : 1.0 / b.p;
                       r = b.radius * std::pow(static_cast<double>(n), std::min(0.0, 0.5 - inv));
                       ro = b.radius * std::pow(static_cast<double>(n), std::max(0.0, 0.5 - inv));
                   },
                   [&](const AffineImage& a) {
                       Eigen::JacobiSVD<Mat> svd(a.map);
                       const double smax = svd.singularValues()(0), smin = svd.singularValues()(n - 1);
                       r = smin * a.inner->inner_radius() - a.shift.norm();
                       ro = smax * a.inner->outer_radius() + a.shift.norm();
                   },
                   [&](const PolarBody& q) {
                       r = 1.0 / q.primal->outer_radius();
                       ro = 1.0 / q.primal->inner_radius();
                   }},
               p->rep);
    if (!(r > 0)) {
        // no closed-form inner radius; take the shortest boundary distance over many directions
        Rng rng(0x5eed);
        double m = kInf;
        for (int k = 0; k < 4000; ++k) m = std::min(m, boundary_ray(tmp, random_direction(n, rng)).norm());
        r = 0.99 * m;
    }
    p->r = r;
    p->r_outer = std::max(ro, r);
    return tmp;
}

ConvexBody ConvexBody::hpolytope(Mat A, Vec b) {
    if (A.rows() != b.size() || A.cols() < 2) throw InputError("hpolytope: dimension mismatch or n < 2");
    if (!A.allFinite() || !b.allFinite()) throw InputError("hpolytope: non-finite data");
    auto p = std::make_shared<Impl>();
    p->n = static_cast<int>(A.cols());
    p->poly = polytope_from_halfspaces(A, b);
    p->rep = HPolytope{std::move(A), std::move(b)};
    return finish(p);
}

ConvexBody ConvexBody::vpolytope(Mat V) {
    if (V.rows() < 2) throw InputError("vpolytope: n < 2");
    if (!V.allFinite()) throw InputError("vpolytope: non-finite data");
    auto p = std::make_shared<Impl>();
    p->n = static_cast<int>(V.rows());
    p->poly = polytope_from_vertices(V);
    p->rep = VPolytope{std::move(V)};
    return finish(p);
}

ConvexBody ConvexBody::box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    if (hi.size() != n) throw InputError("box: dimension mismatch");
    Mat A = Mat::Zero(2 * n, n);
    Vec b(2 * n);
    for (int i = 0; i < n; ++i) {
        A(2 * i, i) = 1;
        b(2 * i) = hi(i);
        A(2 * i + 1, i) = -1;
        b(2 * i + 1) = -lo(i);
    }
    return hpolytope(A, b);
}

ConvexBody ConvexBody::cube(int n, double h) { return box(Vec::Constant(n, -h), Vec::Constant(n, h)); }

ConvexBody ConvexBody::ellipsoid(Vec center, Mat shape) {
    const int n = static_cast<int>(center.size());
    if (n < 2 || shape.rows() != n || shape.cols() != n) throw InputError("ellipsoid: dimension mismatch or n < 2");
    if (!shape.allFinite() || !center.allFinite()) throw InputError("ellipsoid: non-finite data");
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + shape.cwiseAbs().maxCoeff()))
        throw InputError("ellipsoid: shape must be symmetric");
    Eigen::LLT<Mat> llt(shape);
    if (llt.info() != Eigen::Success) throw InputError("ellipsoid: shape must be positive definite");
    auto p = std::make_shared<Impl>();
    p->n = n;
    p->P = llt.solve(Mat::Identity(n, n));
    p->P = 0.5 * (p->P + p->P.transpose());
    p->alpha = 1.0 - center.dot(p->P * center);
    if (!(p->alpha > 1e-12)) throw InputError("ellipsoid: origin is not interior");
    p->rep = Ellipsoid{std::move(center), std::move(shape)};
    return finish(p);
}

ConvexBody ConvexBody::ball(int n, double radius) {
    return ellipsoid(Vec::Zero(n), Mat::Identity(n, n) * radius * radius);
}

ConvexBody ConvexBody::lp_ball(int n, double p, double radius) {
    if (n < 2) throw InputError("lp_ball: n < 2");
    if (!(p >= 1) || !(radius > 0) || !std::isfinite(radius)) throw InputError("lp_ball: need p >= 1, radius > 0");
    auto im = std::make_shared<Impl>();
    im->n = n;
    if (std::isinf(p) || p == 1.0) {
        if (std::isinf(p)) {
            Mat A = Mat::Zero(2 * n, n);
            for (int i = 0; i < n; ++i) {
                A(2 * i, i) = 1;
                A(2 * i + 1, i) = -1;
            }
            im->poly = polytope_from_halfspaces(A, Vec::Constant(2 * n, radius));
        } else {
            Mat V = Mat::Zero(n, 2 * n);
            for (int i = 0; i < n; ++i) {
                V(i, 2 * i) = radius;
                V(i, 2 * i + 1) = -radius;
            }
            im->poly = polytope_from_vertices(V);
        }
    }
    im->rep = LpBall{p, radius, n};
    return finish(im);
}

ConvexBody ConvexBody::affine(const ConvexBody& inner, Mat map, Vec shift) {
    const int n = inner.dim();
    if (map.rows() != n || map.cols() != n || shift.size() != n) throw InputError("affine: dimension mismatch");
    if (!map.allFinite() || !shift.allFinite()) throw InputError("affine: non-finite data");
    Eigen::FullPivLU<Mat> lu(map);
    if (!lu.isInvertible() || std::abs(map.determinant()) < 1e-14) throw InputError("affine: map is singular");
    auto p = std::make_shared<Impl>();
    p->n = n;
    p->Minv = lu.inverse();
    p->z = -(p->Minv * shift);
    p->shifted = shift.norm() > 0;
    if (!(gauge(inner, p->z) < 1 - 1e-12)) throw InputError("affine: origin is not interior");
    p->rep = AffineImage{std::make_shared<const ConvexBody>(inner), std::move(map), std::move(shift)};
    return finish(p);
}

ConvexBody ConvexBody::polar_of(const ConvexBody& primal) {
    auto p = std::make_shared<Impl>();
    p->n = primal.dim();
    p->rep = PolarBody{std::make_shared<const ConvexBody>(primal)};
    return finish(p);
}

double gauge(const ConvexBody& K, const Vec& x) {
    const auto& im = K.impl();
    if (x.size() != im.n) throw InputError("gauge: dimension mismatch");
    return std::visit(overloaded{[&](const Ellipsoid& e) { return ellipsoid_gauge(im.P, e.center, im.alpha, x); },
                                 [&](const LpBall& b) { return lp_norm(x, b.p) / b.radius; },
                                 [&](const AffineImage& a) {
                                     if (!im.shifted) return gauge(*a.inner, im.Minv * x);
                                     return gauge_about(*a.inner, im.z, im.Minv * x);
                                 },
                                 [&](const PolarBody& q) { return support_value(*q.primal, x); },
                                 [&](const auto&) {
                                     const auto& d = *im.poly;
                                     return std::max(0.0, (d.A * x).cwiseQuotient(d.b).maxCoeff());
                                 }},
                      im.rep);
}

bool membership(const ConvexBody& K, const Vec& x) {
    if (x.size() != K.dim()) throw InputError("membership: dimension mismatch");
    if (!x.allFinite()) throw InputError("membership: non-finite point");
    return gauge(K, x) <= 1.0 + K.oracle().membership_tolerance;
}

namespace {

double bisect_gauge_about(const ConvexBody& K, const Vec& x, const Vec& v) {
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    double lo = 0, hi = (K.outer_radius() + x.norm()) / nv * (1 + 1e-9);
    const auto& cfg = K.oracle();
    for (int it = 0; it < cfg.max_bisection_steps && hi - lo > cfg.ray_search_tolerance * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gauge(K, x + mid * v) <= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 1.0 / (0.5 * (lo + hi));
}

}  // namespace

double gauge_about(const ConvexBody& K, const Vec& x, const Vec& v) {
    const auto& im = K.impl();
    if (x.size() != im.n || v.size() != im.n) throw InputError("gauge_about: dimension mismatch");
    if (x.isZero(0)) return gauge(K, v);
    if (im.poly) {
        const auto& d = *im.poly;
        double g = 0;
        for (int i = 0; i < d.A.rows(); ++i) {
            const double slack = d.b(i) - d.A.row(i).dot(x);
            if (!(slack > 0)) return kInf;
            g = std::max(g, d.A.row(i).dot(v) / slack);
        }
        return g;
    }
    return std::visit(overloaded{[&](const Ellipsoid& e) {
                                     const Vec c = e.center - x;
                                     const double alpha = 1.0 - c.dot(im.P * c);
                                     if (!(alpha > 0)) return kInf;
                                     return ellipsoid_gauge(im.P, c, alpha, v);
                                 },
                                 [&](const LpBall&) { return bisect_gauge_about(K, x, v); },
                                 [&](const PolarBody&) { return bisect_gauge_about(K, x, v); },
                                 [&](const AffineImage& a) {
                                     return gauge_about(*a.inner, im.Minv * (x - a.shift), im.Minv * v);
                                 },
                                 [&](const auto&) { return kInf; }},
                      im.rep);
}

Vec gauge_about_gradient(const ConvexBody& K, const Vec& x, const Vec& v) {
    const double s = gauge_about(K, x, v);
    if (!(s > 0) || !std::isfinite(s)) return Vec::Zero(K.dim());
    const auto* poly = K.polytope();
    if (poly) {
        // exact subgradient: the active facet of the ratio maximum
        int best = 0;
        double bv = -kInf;
        for (int i = 0; i < poly->A.rows(); ++i) {
            const double val = poly->A.row(i).dot(v) / (poly->b(i) - poly->A.row(i).dot(x));
            if (val > bv) {
                bv = val;
                best = i;
            }
        }
        return poly->A.row(best).transpose() / (poly->b(best) - poly->A.row(best).dot(x));
    }
    const Vec q = x + v / s;
    const Vec nrm = normal_at(K, q);
    const double den = nrm.dot(q - x);
    if (!(den > 0)) return Vec::Zero(K.dim());
    return nrm / den;
}

double chord_extent(const ConvexBody& K, const Vec& x, const Vec& d) {
    const double g = gauge_about(K, x, d);
    if (!(g > 0)) return kInf;
    return 1.0 / g;
}

Vec boundary_ray(const ConvexBody& K, const Vec& direction) {
    if (direction.size() != K.dim()) throw InputError("boundary_ray: dimension mismatch");
    const double g = gauge(K, direction);
    if (!(direction.norm() > 0) || !(g > 0)) throw InputError("boundary_ray: zero direction");
    return direction / g;
}

double support_value(const ConvexBody& K, const Vec& d) {
    const auto& im = K.impl();
    if (d.size() != im.n) throw InputError("support: dimension mismatch");
    return std::visit(overloaded{[&](const Ellipsoid& e) { return d.dot(e.center) + std::sqrt(d.dot(e.shape * d)); },
                                 [&](const LpBall& b) { return b.radius * lp_norm(d, conjugate_exponent(b.p)); },
                                 [&](const AffineImage& a) {
                                     return d.dot(a.shift) + support_value(*a.inner, a.map.transpose() * d);
                                 },
                                 [&](const PolarBody& q) { return gauge(*q.primal, d); },
                                 [&](const auto&) { return (im.poly->V.transpose() * d).maxCoeff(); }},
                      im.rep);
}

Vec support_point(const ConvexBody& K, const Vec& d) {
    const auto& im = K.impl();
    if (d.size() != im.n) throw InputError("support: dimension mismatch");
    const int n = im.n;
    return std::visit(
        overloaded{[&](const Ellipsoid& e) -> Vec {
                       const Vec Qd = e.shape * d;
                       const double s = std::sqrt(d.dot(Qd));
                       if (s == 0) return e.center;
                       return e.center + Qd / s;
                   },
                   [&](const LpBall& b) -> Vec {
                       Vec x = Vec::Zero(n);
                       if (std::isinf(b.p)) {
                           for (int i = 0; i < n; ++i) x(i) = d(i) > 0 ? b.radius : (d(i) < 0 ? -b.radius : 0.0);
                       } else if (b.p == 1.0) {
                           Eigen::Index j = 0;
                           d.cwiseAbs().maxCoeff(&j);
                           x(j) = d(j) >= 0 ? b.radius : -b.radius;
                       } else {
                           const double q = conjugate_exponent(b.p);
                           const double nq = lp_norm(d, q);
                           if (nq == 0) return x;
                           for (int i = 0; i < n; ++i) {
                               const double t = std::abs(d(i)) / nq;
                               x(i) = (d(i) >= 0 ? 1.0 : -1.0) * b.radius * std::pow(t, q - 1.0);
                           }
                       }
                       return x;
                   },
                   [&](const AffineImage& a) -> Vec {
                       return a.map * support_point(*a.inner, a.map.transpose() * d) + a.shift;
                   },
                   [&](const PolarBody& q) -> Vec {
                       const double g = gauge(*q.primal, d);
                       if (!(g > 0)) return Vec::Zero(n);
                       const Vec bp = d / g;
                       const Vec nrm = normal_at(*q.primal, bp);
                       return nrm / nrm.dot(bp);
                   },
                   [&](const auto&) -> Vec {
                       Eigen::Index j = 0;
                       (im.poly->V.transpose() * d).maxCoeff(&j);
                       return im.poly->V.col(j);
                   }},
        im.rep);
}

Support support(const ConvexBody& K, const Vec& direction) {
    if (direction.size() != K.dim()) throw InputError("support: dimension mismatch");
    const double s = direction.norm();
    if (!(s > 0)) throw InputError("support: zero direction");
    Support out;
    out.value = support_value(K, direction);
    out.point = support_point(K, direction);
    out.plane.normal = direction / s;
    out.plane.offset = out.value / s;
    return out;
}

Vec normal_at(const ConvexBody& K, const Vec& x) {
    const auto& im = K.impl();
    if (x.size() != im.n) throw InputError("normal_at: dimension mismatch");
    const int n = im.n;
    if (im.poly) {
        const auto& d = *im.poly;
        const Vec ratio = (d.A * x).cwiseQuotient(d.b);
        const double m = ratio.maxCoeff();
        const double tol = 1e-12 * (1 + std::abs(m));
        int best = -1;
        for (int i = 0; i < d.A.rows(); ++i) {
            if (ratio(i) < m - tol) continue;
            if (best < 0 || lex_less(d.A.row(i).transpose(), d.A.row(best).transpose())) best = i;
        }
        return d.A.row(best).transpose();
    }
    return std::visit(overloaded{[&](const Ellipsoid& e) -> Vec { return (im.P * (x - e.center)).normalized(); },
                                 [&](const LpBall& b) -> Vec {
                                     Vec g(n);
                                     for (int i = 0; i < n; ++i) {
                                         const double a = std::abs(x(i));
                                         g(i) = (x(i) >= 0 ? 1.0 : -1.0) * std::pow(a, b.p - 1.0);
                                     }
                                     return g.normalized();
                                 },
                                 [&](const AffineImage& a) -> Vec {
                                     const Vec ni = normal_at(*a.inner, im.Minv * (x - a.shift));
                                     return (im.Minv.transpose() * ni).normalized();
                                 },
                                 [&](const PolarBody& q) -> Vec { return support_point(*q.primal, x).normalized(); },
                                 [&](const auto&) -> Vec { return Vec::Zero(n); }},
                      im.rep);
}

ConvexBody polar(const ConvexBody& K) {
    const auto& im = K.impl();
    return std::visit(overloaded{[&](const HPolytope& h) {
                                     Mat V(h.A.cols(), h.A.rows());
                                     for (int i = 0; i < h.A.rows(); ++i) V.col(i) = h.A.row(i).transpose() / h.b(i);
                                     return ConvexBody::vpolytope(V);
                                 },
                                 [&](const VPolytope& v) {
                                     return ConvexBody::hpolytope(v.vertices.transpose(), Vec::Ones(v.vertices.cols()));
                                 },
                                 [&](const Ellipsoid& e) {
                                     if (e.center.isZero(0)) return ConvexBody::ellipsoid(e.center, im.P);
                                     return ConvexBody::polar_of(K);
                                 },
                                 [&](const LpBall& b) {
                                     return ConvexBody::lp_ball(b.dim, conjugate_exponent(b.p), 1.0 / b.radius);
                                 },
                                 [&](const AffineImage& a) {
                                     if (im.shifted) return ConvexBody::polar_of(K);
                                     return ConvexBody::affine(polar(*a.inner), im.Minv.transpose(), a.shift);
                                 },
                                 [&](const PolarBody& q) { return *q.primal; }},
                      im.rep);
}

ConvexBody difference_body(const ConvexBody& K) {
    const auto* d = K.polytope();
    if (!d) throw UnsupportedError("difference_body: needs a polytope");
    const Mat& V = d->V;
    const int k = static_cast<int>(V.cols());
    Mat D(V.rows(), static_cast<Eigen::Index>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) D.col(i * k + j) = V.col(i) - V.col(j);
    Hull h = convex_hull(D);
    Mat E(V.rows(), static_cast<Eigen::Index>(h.vertices.size()));
    for (size_t i = 0; i < h.vertices.size(); ++i) E.col(static_cast<Eigen::Index>(i)) = D.col(h.vertices[i]);
    return ConvexBody::vpolytope(E);
}

ConvexBody scaled(const ConvexBody& K, double s) {
    if (!(s > 0) || !std::isfinite(s)) throw InputError("scaled: factor must be positive");
    const auto& im = K.impl();
    ConvexBody out = std::visit(
        overloaded{[&](const HPolytope& h) { return ConvexBody::hpolytope(h.A, h.b * s); },
                   [&](const VPolytope& v) { return ConvexBody::vpolytope(v.vertices * s); },
                   [&](const Ellipsoid& e) { return ConvexBody::ellipsoid(e.center * s, e.shape * (s * s)); },
                   [&](const LpBall& b) { return ConvexBody::lp_ball(b.dim, b.p, b.radius * s); },
                   [&](const AffineImage& a) { return ConvexBody::affine(*a.inner, a.map * s, a.shift * s); },
                   [&](const PolarBody& q) { return ConvexBody::polar_of(scaled(*q.primal, 1.0 / s)); }},
        im.rep);
    return out.with_radii(K.inner_radius() * s, K.outer_radius() * s).with_oracle(K.oracle());
}

ConvexBody translated(const ConvexBody& K, const Vec& v) {
    if (v.size() != K.dim()) throw InputError("translated: dimension mismatch");
    const auto& im = K.impl();
    const int n = im.n;
    ConvexBody out = std::visit(
        overloaded{[&](const HPolytope& h) {
                       Vec b = h.b + h.A * v;
                       if ((b.array() <= 0).any()) throw InputError("translated: origin leaves the body");
                       return ConvexBody::hpolytope(h.A, b);
                   },
                   [&](const VPolytope& p) { return ConvexBody::vpolytope(p.vertices.colwise() + v); },
                   [&](const Ellipsoid& e) { return ConvexBody::ellipsoid(e.center + v, e.shape); },
                   [&](const AffineImage& a) { return ConvexBody::affine(*a.inner, a.map, a.shift + v); },
                   [&](const LpBall& b) {
                       if (b.p == 2) return ConvexBody::ellipsoid(v, b.radius * b.radius * Mat::Identity(n, n));
                       return ConvexBody::affine(K, Mat::Identity(n, n), v);
                   },
                   [&](const auto&) { return ConvexBody::affine(K, Mat::Identity(n, n), v); }},
        im.rep);
    return out;
}

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double default_kb_threshold(int n) { return (2.0 / 3.0) * std::pow(2.0, -n); }

std::optional<double> exact_volume(const ConvexBody& K) {
    const auto& im = K.impl();
    if (im.poly) return im.poly->volume;
    return std::visit(overloaded{[&](const Ellipsoid& e) -> std::optional<double> {
                                     return unit_ball_volume(im.n) * std::sqrt(e.shape.determinant());
                                 },
                                 [&](const LpBall& b) -> std::optional<double> {
                                     const double n = im.n;
                                     return std::pow(2.0 * std::tgamma(1.0 + 1.0 / b.p) * b.radius, n) /
                                            std::tgamma(1.0 + n / b.p);
                                 },
                                 [&](const AffineImage& a) -> std::optional<double> {
                                     auto v = exact_volume(*a.inner);
                                     if (!v) return std::nullopt;
                                     return *v * std::abs(a.map.determinant());
                                 },
                                 [&](const auto&) -> std::optional<double> { return std::nullopt; }},
                      im.rep);
}

UniformSampler::UniformSampler(ConvexBody K, SamplerConfig cfg) : K_(std::move(K)), cfg_(cfg) {}

double UniformSampler::acceptance_rate() const {
    return proposals_ ? static_cast<double>(accepted_) / static_cast<double>(proposals_) : 1.0;
}

Vec UniformSampler::operator()(Rng& rng) {
    const int n = K_.dim();
    if (n <= 3) {
        const Vec& lo = K_.box_lo();
        const Vec& hi = K_.box_hi();
        Vec x(n);
        for (long t = 0; t < cfg_.rejection_budget; ++t) {
            for (int i = 0; i < n; ++i) x(i) = uniform(rng, lo(i), hi(i));
            ++proposals_;
            if (membership(K_, x)) {
                ++accepted_;
                return x;
            }
        }
        throw SamplingError("uniform_sample: rejection budget exhausted", acceptance_rate());
    }
    auto step = [&](Vec& x) {
        const Vec d = random_direction(n, rng);
        const double tp = chord_extent(K_, x, d);
        const double tm = chord_extent(K_, x, -d);
        x += uniform(rng, -tm, tp) * d;
    };
    if (!walker_) {
        walker_ = Vec::Zero(n);
        for (int i = 0; i < cfg_.burn_in_factor * n * n; ++i) step(*walker_);
    }
    for (int i = 0; i < std::max(1, cfg_.walk_steps_factor * n * n); ++i) step(*walker_);
    return *walker_;
}

Vec uniform_sample(const ConvexBody& K, Rng& rng) {
    UniformSampler s(K);
    return s(rng);
}

Estimate estimate_volume(const ConvexBody& K, Rng& rng, long samples) {
    if (samples < 1000) throw InputError("estimate_volume: need at least 1000 samples");
    const int n = K.dim();
    const Vec& lo = K.box_lo();
    const Vec& hi = K.box_hi();
    const double box = (hi - lo).prod();
    long in = 0;
    Vec x(n);
    for (long t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) x(i) = uniform(rng, lo(i), hi(i));
        if (membership(K, x)) ++in;
    }
    const double f = static_cast<double>(in) / static_cast<double>(samples);
    return {box * f, box * std::sqrt(f * (1 - f) / static_cast<double>(samples))};
}

double kb_ratio(const ConvexBody& K, Rng& rng, long samples) {
    if (samples < 1000) throw InputError("kb_ratio: need at least 1000 samples");
    UniformSampler s(K);
    long hit = 0;
    for (long t = 0; t < samples; ++t)
        if (membership(K, -s(rng))) ++hit;
    return static_cast<double>(hit) / static_cast<double>(samples);
}

Vec estimate_centroid(const ConvexBody& K, Rng& rng, long samples) {
    if (samples < 1000) throw InputError("estimate_centroid: need at least 1000 samples");
    UniformSampler s(K);
    Vec m = Vec::Zero(K.dim());
    for (long t = 0; t < samples; ++t) m += s(rng);
    return m / static_cast<double>(samples);
}

}  // namespace mcover
