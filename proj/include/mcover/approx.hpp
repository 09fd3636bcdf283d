#pragma once

#include <optional>
#include <string>

#include "mcover/enumerate.hpp"

namespace mcover {

struct SandwichReport {
    bool outer_pass = false;
    double outer_margin = 0;  // 1 + eps - max gauge over vertices of P
    bool inner_pass = false;
    double inner_margin = 0;  // min over facets of P of offset - h_K(normal)
    std::string inner_method;  // "support", plus "+sampled" for curved bodies
    long sampled_directions = 0;
    std::optional<Vec> witness;  // a direction along which K leaves P
    long vertices = 0;
    long facets = 0;
    bool pass() const { return outer_pass && inner_pass; }
};

// K inside P inside (1 + eps) K; P must be a polytope body
SandwichReport verify_sandwich(const ConvexBody& K, const ConvexBody& P, double eps, Rng& rng, long samples = 10000);

struct ApproxResult {
    std::optional<ConvexBody> polytope;  // hull of the centers, n <= 4
    Mat centers;                         // one column per covering element
    double eps_prime = 0;
    Covering cover;
    CoveringReport cover_report;
};

// eps' = (1 + eps) / (1 + eps / c) - 1
double banach_mazur_eps_prime(double eps, double c);

ApproxResult banach_mazur_polytope(const ConvexBody& K, double eps, const EnumeratorConfig& cfg, Rng& rng,
                                   long verify_samples = 20000);

}  // namespace mcover
