#pragma once

#include <string>
#include <vector>

#include "mcover/caps.hpp"
#include "mcover/macbeath.hpp"

namespace mcover {

// frozen after one calibration run (60 seeds x 2000 trials); see README
inline constexpr double kMahlerKappa2 = 0.68;         // vol(K) vol(K*) / omega_2^2; triangles reach 27 / (4 pi^2)
inline constexpr double kMahlerKappa3 = 0.40;         // same, n = 3; simplices reach 0.4053
inline constexpr double kWideMacbeathKappa = 0.005;   // vol_K(M(p)) for ray(p) >= 1/3
inline constexpr double kCapProductKappa = 0.016;     // vol_K(C) vol_K*(D) / eps^3, n = 2
inline constexpr double kCapMacbeathKappa = 0.0017;   // vol_K(C) vol_K*(M^{1/5}(x)) / eps^3, n = 2

struct PropertyResult {
    std::string suite;
    std::string name;
    std::string method;  // "exact", "exact+mc", "mc", "sampled", "measured"
    long trials = 0;
    long violations = 0;
    double measured = 0;  // property-specific statistic, e.g. the minimum ratio
    std::string note;
    bool core = false;    // one of the properties the acceptance run requires
    bool pass() const { return trials > 0 && violations == 0; }
};

struct LemmaOptions {
    long trials = 500;
    std::uint64_t seed = 1;
    int threads = 1;  // properties run concurrently; results do not depend on it
};

struct NamedBody {
    std::string name;
    ConvexBody body;
};

// square, disk, random polytope, ellipse and l1 ball in n = 2 and 3, all holding the origin inside
std::vector<NamedBody> lemma_bodies(std::uint64_t seed);

// "caps", "macbeath", "mahler" or "all"
std::vector<PropertyResult> run_lemmas(const std::string& suite, const LemmaOptions& opt);

// min over configs of vol_K(C) vol_K*(D) / eps^3 for caps of widths in [eps, 2 eps], n = 2
struct CapProduct {
    double eps = 0;
    long configs = 0;
    double min_ratio = 0;
    std::string argmin_body;
};
CapProduct mahler_cap_product(double eps, long configs, Rng& rng);

// fraction of approx_cvp steps where the distance grew as eps shrank
struct MonotonicityReport {
    long steps = 0;
    long increases = 0;
    double worst_increase = 0;  // relative
};
MonotonicityReport cvp_monotonicity(long instances, Rng& rng);

}  // namespace mcover
