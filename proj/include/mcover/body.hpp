#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "mcover/types.hpp"

namespace mcover {

struct Hyperplane {
    Vec normal;  // unit
    double offset = 0;  // plane is <normal, x> = offset
};

// normalizes `normal`; offset must be positive after normalization
Hyperplane make_hyperplane(const Vec& normal, double offset);

struct OracleConfig {
    double membership_tolerance = 1e-12;
    double ray_search_tolerance = 1e-14;
    int max_bisection_steps = 200;
};

class ConvexBody;
using BodyPtr = std::shared_ptr<const ConvexBody>;

struct HPolytope {
    Mat A;  // one constraint per row, A x <= b
    Vec b;
};
struct VPolytope {
    Mat vertices;  // one point per column
};
// {x : (x - center)^T shape^{-1} (x - center) <= 1}
struct Ellipsoid {
    Vec center;
    Mat shape;
};
struct LpBall {
    double p = 2;  // infinity allowed
    double radius = 1;
    int dim = 2;
};
// {map * y + shift : y in inner}
struct AffineImage {
    BodyPtr inner;
    Mat map;
    Vec shift;
};
// {u : <u, v> <= 1 for all v in primal}; answers through gauge/support duality
struct PolarBody {
    BodyPtr primal;
};

using Representation = std::variant<HPolytope, VPolytope, Ellipsoid, LpBall, AffineImage, PolarBody>;

// irredundant facets (unit normals) and extreme vertices of a polytope body
struct PolytopeData {
    Mat A;
    Vec b;
    Mat V;
    double volume = 0;
};

class ConvexBody {
public:
    static ConvexBody hpolytope(Mat A, Vec b);
    static ConvexBody vpolytope(Mat vertices);
    static ConvexBody box(const Vec& lo, const Vec& hi);
    static ConvexBody cube(int n, double half_side = 1.0);
    static ConvexBody ellipsoid(Vec center, Mat shape);
    static ConvexBody ball(int n, double radius = 1.0);
    static ConvexBody lp_ball(int n, double p, double radius = 1.0);
    static ConvexBody affine(const ConvexBody& inner, Mat map, Vec shift);
    static ConvexBody polar_of(const ConvexBody& primal);

    int dim() const;
    double inner_radius() const;
    double outer_radius() const;
    ConvexBody with_radii(double r, double r_outer) const;
    ConvexBody with_oracle(const OracleConfig& cfg) const;

    const Representation& representation() const;
    const char* type_name() const;
    // non-null for H/V polytopes and for l1 / l-infinity balls
    const PolytopeData* polytope() const;
    const OracleConfig& oracle() const;
    const Vec& box_lo() const;
    const Vec& box_hi() const;

    struct Impl;
    const Impl& impl() const { return *impl_; }

private:
    explicit ConvexBody(std::shared_ptr<const Impl> p) : impl_(std::move(p)) {}
    static ConvexBody finish(std::shared_ptr<Impl> p);
    std::shared_ptr<const Impl> impl_;
};

bool membership(const ConvexBody& K, const Vec& x);
double gauge(const ConvexBody& K, const Vec& x);
// inf{s > 0 : x + v / s in K} for x interior to K, i.e. the gauge of K - x at v
double gauge_about(const ConvexBody& K, const Vec& x, const Vec& v);
// a subgradient of v -> gauge_about(K, x, v)
Vec gauge_about_gradient(const ConvexBody& K, const Vec& x, const Vec& v);
Vec boundary_ray(const ConvexBody& K, const Vec& direction);

struct Support {
    double value = 0;
    Hyperplane plane;
    Vec point;
};
Support support(const ConvexBody& K, const Vec& direction);
// h_K(d), positively homogeneous in d
double support_value(const ConvexBody& K, const Vec& d);
Vec support_point(const ConvexBody& K, const Vec& d);
// outward unit normal of a supporting plane at boundary point x
Vec normal_at(const ConvexBody& K, const Vec& x);

ConvexBody polar(const ConvexBody& K);
ConvexBody difference_body(const ConvexBody& K);
ConvexBody scaled(const ConvexBody& K, double s);
// {x + v : x in K}; the origin must stay interior
ConvexBody translated(const ConvexBody& K, const Vec& v);

// largest t with x + t d in K, for x in K
double chord_extent(const ConvexBody& K, const Vec& x, const Vec& d);

double unit_ball_volume(int n);
// Kovner-Besicovitch threshold used to certify well-centeredness
double default_kb_threshold(int n);
std::optional<double> exact_volume(const ConvexBody& K);

struct SamplerConfig {
    long rejection_budget = 1000000;
    int burn_in_factor = 10;  // hit-and-run burn-in is factor * n^2 steps
    int walk_steps_factor = 1;  // steps between emitted points is factor * n^2
};

class UniformSampler {
public:
    explicit UniformSampler(ConvexBody K, SamplerConfig cfg = {});
    Vec operator()(Rng& rng);
    double acceptance_rate() const;

private:
    ConvexBody K_;
    SamplerConfig cfg_;
    long proposals_ = 0, accepted_ = 0;
    std::optional<Vec> walker_;
};

Vec uniform_sample(const ConvexBody& K, Rng& rng);

struct Estimate {
    double value = 0;
    double std_error = 0;
};
Estimate estimate_volume(const ConvexBody& K, Rng& rng, long samples);
double kb_ratio(const ConvexBody& K, Rng& rng, long samples);
Vec estimate_centroid(const ConvexBody& K, Rng& rng, long samples);

}  // namespace mcover
