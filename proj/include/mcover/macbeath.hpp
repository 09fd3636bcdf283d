#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcover/body.hpp"
#include "mcover/spatial.hpp"

namespace mcover {

// x + lambda ((K - x) intersect (x - K))
struct MacbeathRegion {
    ConvexBody body;
    Vec center;
    double scale = 1;
};

MacbeathRegion macbeath_region(const ConvexBody& K, const Vec& x, double lambda);

bool mac_membership(const MacbeathRegion& M, const Vec& y);
// inf{s : y in M^s(x)}; y is in M iff this is <= M.scale
double mac_depth(const ConvexBody& K, const Vec& x, const Vec& y);
Vec mac_boundary_point(const MacbeathRegion& M, const Vec& direction);
Box mac_bounding_box(const MacbeathRegion& M);
Vec mac_sample(const MacbeathRegion& M, Rng& rng);

// general H-system {y : A y <= b}; it need not contain the origin
struct Halfspaces {
    Mat A;
    Vec b;
};
Halfspaces mac_as_hpoly(const ConvexBody& K, const Vec& x, double lambda);

// closed regions: boundary contact counts as intersecting
bool mac_disjoint(const MacbeathRegion& M1, const MacbeathRegion& M2);
// inner is a subset of outer
bool mac_contains(const MacbeathRegion& outer, const MacbeathRegion& inner);

struct MNet {
    ConvexBody ambient;
    std::vector<Vec> centers;
    std::vector<int> source;  // index of each center in the candidate stream
    double c = 2;
    long skipped = 0;  // candidates outside the ambient interior
    double packing_scale() const { return 1 / (4 * c); }
    double covering_scale() const { return 1 / c; }
};

MNet build_mnet(const ConvexBody& ambient, const std::vector<Vec>& candidates, double c);

// greedy MNet fed one candidate at a time; build_mnet runs it over a whole stream
class MNetBuilder {
public:
    MNetBuilder(const ConvexBody& ambient, double c, std::size_t expected_size = 0);
    // true when x was accepted as a new center
    bool offer(const Vec& x, int source = -1);
    const MNet& net() const { return net_; }
    MNet take() { return std::move(net_); }

private:
    MNet net_;
    GridIndex grid_;
    std::vector<MacbeathRegion> regions_;
    std::vector<Box> boxes_;
};

struct CoverElement {
    Vec center;
    double scale = 0;
    int layer = -1;
};

struct Covering {
    ConvexBody ambient;
    ConvexBody target;
    double c = 2;
    double eps = 0;
    std::vector<CoverElement> elements;
    bool mnet_provenance = false;
};

Covering hitting_to_cover(const ConvexBody& ambient, const std::vector<Vec>& hits, double c);
Covering hitting_to_cover(const ConvexBody& ambient, const ConvexBody& target, const std::vector<Vec>& hits,
                          double c, double eps, const std::vector<int>& layers = {});

struct VerifyOptions {
    double coverage_threshold = 0.999;
    bool check_packing = true;
    long containment_directions = 1000;
};

struct CoveringReport {
    long samples = 0;
    long covered = 0;
    double coverage_rate = 0;
    double coverage_threshold = 0.999;
    bool coverage_pass = false;
    bool buffering_pass = false;
    std::string buffering_method;
    long buffering_failures = 0;
    bool packing_checked = false;
    bool packing_pass = true;
    long packing_violations = 0;
    long element_count = 0;
    std::map<int, long> layer_histogram;
    std::vector<std::string> failed;
    bool pass() const { return failed.empty(); }
};

CoveringReport verify_covering(const Covering& cov, Rng& rng, long samples, const VerifyOptions& opt = {});

// point lookup over the elements of a covering
class CoverIndex {
public:
    explicit CoverIndex(const Covering& cov);
    // index of the first element holding y, or -1
    int find(const Vec& y) const;

private:
    const Covering& cov_;
    std::vector<MacbeathRegion> regions_;
    std::vector<Box> boxes_;
    GridIndex grid_;
};

}  // namespace mcover
