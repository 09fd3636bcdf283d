#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mcover {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad caller input: dimension mismatch, out-of-range parameters, malformed JSON
struct InputError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct UnsupportedError : Error {
    using Error::Error;
};

struct SamplingError : Error {
    double acceptance_rate;
    SamplingError(const std::string& what, double rate)
        : Error(what + " (acceptance rate " + std::to_string(rate) + ")"), acceptance_rate(rate) {}
};

struct VerificationError : Error {
    using Error::Error;
};

// tolerance used by every exact predicate
inline constexpr double kExactTol = 1e-9;

// derive an independent stream from a base seed and a small tuple of tags
inline Rng derive_rng(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    // 53 random bits; independent of the standard library's distribution details
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

double standard_normal(Rng& rng);

Vec random_direction(int n, Rng& rng);

}  // namespace mcover
