#pragma once

#include <optional>

#include "mcover/body.hpp"

namespace mcover {

struct EmptyCapError : InputError {
    using InputError::InputError;
};

// K intersected with {x : <normal, x> >= offset}
struct Cap {
    ConvexBody body;
    Vec normal;
    double offset = 0;
    double support = 0;  // h_K(normal)
    Vec apex;
    double absolute_width = 0;
    double relative_width = 0;
    bool full_body = false;  // base plane reaches or passes the origin

    Hyperplane base_plane() const;
    Hyperplane support_plane() const;
    bool contains(const Vec& y) const;
};

struct RepresentativeCap {
    Cap cap;
    Vec source_point;
    double epsilon = 0;
};

Cap cap_from_plane(const ConvexBody& K, const Hyperplane& plane);
// same as cap_from_plane but accepts any offset below the support value
Cap cap_at_offset(const ConvexBody& K, const Vec& normal, double offset);

double ray_distance(const ConvexBody& K, const Vec& p);
Cap min_width_cap(const ConvexBody& K, const Vec& p);
Cap expand_cap(const Cap& cap, double lambda);

RepresentativeCap representative_cap(const ConvexBody& K, const ConvexBody& Kpolar, const Vec& z, double eps);
// no range check on eps beyond (0, 1); the enumerator uses layer widths up to 1/4
Cap representative_cap_unchecked(const ConvexBody& K, const ConvexBody& Kpolar, const Vec& z, double eps);

// max of <w, y> over the cap
double cap_max(const Cap& cap, const Vec& w);
// inner is a subset of outer (same body)
bool cap_contains(const Cap& outer, const Cap& inner);
bool similar_caps(const Cap& c1, const Cap& c2, double lambda);

// two-stage shell draw: uniform p in K, then uniform on the part of ray Op with gauge in [inner_factor, 1]
class ShellSampler {
public:
    ShellSampler(const ConvexBody& K, double inner_factor, SamplerConfig cfg = {});
    Vec operator()(Rng& rng);

private:
    ConvexBody K_;
    double inner_;
    UniformSampler base_;
};

// shell K \ (1 - 4 eps) K
Vec shell_sample(const ConvexBody& K, double eps, Rng& rng);
// polar shell K* \ (1 - 2 eps) K*
Vec polar_shell_sample(const ConvexBody& Kpolar, double eps, Rng& rng);

struct CapSamplerConfig {
    long rejection_budget = 1000000;
    double acceptance_floor = 1e-3;
    long probe = 2000;  // proposals before the floor is checked
    int walk_steps = 20;
};

class CapSampler {
public:
    CapSampler(const Cap& cap, CapSamplerConfig cfg = {});
    Vec operator()(Rng& rng);
    bool using_fallback() const { return fallback_; }
    double acceptance_rate() const;

private:
    Vec walk(Rng& rng);
    Cap cap_;
    CapSamplerConfig cfg_;
    Mat frame_;
    Vec lo_, hi_;
    long proposals_ = 0, accepted_ = 0;
    bool fallback_ = false;
    std::optional<Vec> walker_;
};

Vec cap_sample(const Cap& cap, Rng& rng);

// exact when the body is a polytope or an (affine image of an) ellipsoid with n <= 3
std::optional<double> cap_volume_exact(const Cap& cap);
Estimate cap_volume(const Cap& cap, Rng& rng, long samples);
std::optional<double> base_area_exact(const Cap& cap);
Estimate base_area(const Cap& cap, Rng& rng, long samples);

// vol(K intersect {<w, x> >= beta}) for unit w, when available in closed form
std::optional<double> halfspace_part_volume(const ConvexBody& K, const Vec& w, double beta);
// (n-1)-volume of K intersect {<w, x> = beta} for unit w, when available in closed form
std::optional<double> slice_area(const ConvexBody& K, const Vec& w, double beta);

}  // namespace mcover
