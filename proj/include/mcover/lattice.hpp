#pragma once

#include <optional>
#include <vector>

#include "mcover/macbeath.hpp"
#include "mcover/enumerate.hpp"

namespace mcover {

// columns of the basis generate the lattice
class Lattice {
public:
    explicit Lattice(Mat basis);
    int dim() const { return static_cast<int>(basis_.rows()); }
    const Mat& basis() const { return basis_; }
    double determinant() const { return det_; }
    Vec point(const Vec& coeffs) const { return basis_ * coeffs; }
    // real coefficients of x in the basis
    Vec coordinates(const Vec& x) const { return lu_.solve(x); }
    // rows of the inverse basis
    const Mat& inverse() const { return inv_; }

private:
    Mat basis_;
    Mat inv_;
    Eigen::PartialPivLU<Mat> lu_;
    double det_ = 0;
};

struct CvpInstance {
    Lattice lattice;
    Vec target;
    ConvexBody norm;
    double eps = 0.1;
};

struct CvpResult {
    Vec point;
    Vec coeffs;
    double distance = 0;
    int steps = 0;  // binary-search steps for approx_cvp
};

// brute force over the coefficient box certified by the rounding start; n <= 4
CvpResult exact_cvp(const Lattice& L, const Vec& t, const ConvexBody& norm);

// every lattice point with gauge_norm(v - t) <= radius, coefficient vectors in lexicographic order
std::vector<Vec> lattice_points_within(const Lattice& L, const Vec& t, const ConvexBody& norm, double radius);

// a covering whose verification passed; only certify() makes one
class VerifiedCovering {
public:
    const Covering& cover() const { return cov_; }
    const CoveringReport& report() const { return rep_; }
    friend VerifiedCovering certify(Covering cov, Rng& rng, long samples);

private:
    VerifiedCovering(Covering c, CoveringReport r) : cov_(std::move(c)), rep_(std::move(r)) {}
    Covering cov_;
    CoveringReport rep_;
};

// throws VerificationError when the report fails
VerifiedCovering certify(Covering cov, Rng& rng, long samples);

// enumerator settings for CVP coverings: one saturation round
EnumeratorConfig cvp_config();

// (2, eps)-covering of a norm body, verified
VerifiedCovering cvp_covering(const ConvexBody& norm, double eps, Rng& rng, EnumeratorConfig cfg = cvp_config(),
                              long verify_samples = 20000);

struct GapCvpAnswer {
    bool found = false;
    Vec point;           // when found
    double bound = 0;    // found: gauge(point - t) <= bound; empty: no lattice point within this radius
    int element = -1;    // covering element that answered
};

GapCvpAnswer gap_cvp(const Lattice& L, const Vec& t, const ConvexBody& norm, double gamma, const VerifiedCovering& cov);

CvpResult approx_cvp(const CvpInstance& inst, const VerifiedCovering& cov);
CvpResult approx_cvp(const CvpInstance& inst, Rng& rng);

// hard cap on binary-search steps for the (1 + eps/4) grid over [2^-40 hi, hi]
int binary_search_cap(double eps);

struct IpAnswer {
    bool found = false;
    Vec point;
    Vec centroid;  // in the placed frame, so the target of the CVP call
    double distance = 0;  // approx_cvp distance from the centroid in the norm of K - p
};

// the body searched is K + shift; K itself holds the origin like every ConvexBody
IpAnswer approx_ip(const ConvexBody& K, const Vec& shift, const Lattice& L, double eps, Rng& rng,
                   long centroid_samples = 20000);
IpAnswer approx_ip(const ConvexBody& K, const Lattice& L, double eps, Rng& rng, long centroid_samples = 20000);

}  // namespace mcover
