#pragma once

#include <optional>
#include <vector>

#include "mcover/macbeath.hpp"

namespace mcover {

// boundary layers i = 0..k0 hold ray widths [2^{i-1} eps, 2^i eps); layer k0+1 is the wide layer
struct LayeredDecomposition {
    double eps = 0;
    double beta = 0.125;
    int k0 = 0;
    double layer_eps(int i) const;  // 2^{i-1} eps
    int wide() const { return k0 + 1; }
};

LayeredDecomposition layered_decomposition(double eps, double beta = 0.125);

// layer of x in K, keyed by ray distance in (1 + eps) K
int layer_of(const ConvexBody& K, double eps, const Vec& x, double beta = 0.125);

struct EnumeratorConfig {
    double c = 2;
    double A = 0;  // samples-per-layer multiplier; 0 means 8 * 2^n
    bool log_factor = true;
    bool polar_channel = true;
    // greedy MNet pass over the sampled hits before building the covering
    bool thin = true;
    // extra sampling rounds while a round still grows the MNet by at least this fraction
    int max_rounds = 8;
    double saturation = 0.02;
    double beta = 0.125;
    double kappa_prime = 0;  // 0 means 4^-n
    bool check_well_centered = true;
    long kb_samples = 20000;
    double kb_threshold = 0;  // 0 means default_kb_threshold(n)
    double cap_expansion = 32;

    double multiplier(int n) const;
    double t_prime_factor(int n) const;
};

struct EnumeratorStats {
    double kb = 0;
    long candidates = 0;
    std::vector<long> drawn;  // per phase, wide layer last
    long skipped = 0;  // hits outside every layer
    int rounds = 0;
};

Covering enumerate_cover(const ConvexBody& K, double eps, const EnumeratorConfig& cfg, Rng& rng,
                         EnumeratorStats* stats = nullptr);

enum class RegionClass { Large, Medium, Small };

struct ElementVolume {
    Estimate relative;  // vol(element) / vol(ambient)
    RegionClass cls = RegionClass::Medium;
};

// volume thresholds t = eps^{(n+1)/2} and t' = kappa' t
std::vector<ElementVolume> classify(const Covering& cov, const EnumeratorConfig& cfg, Rng& rng,
                                    long samples_per_element);

struct ScalingRow {
    double eps = 0;
    long size = 0;
    long candidates = 0;
    CoveringReport report;
    double seconds = 0;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    std::optional<double> slope;  // least squares of log(size) on log(1/eps)
};

ScalingResult scaling_experiment(const ConvexBody& K, const std::vector<double>& eps_list,
                                 const EnumeratorConfig& cfg, Rng& rng, long verify_samples = 100000);

// least-squares slope of log y on log(1/x)
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& y);

}  // namespace mcover
