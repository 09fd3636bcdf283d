#include "mcover/types.hpp"

#include <cmath>
#include <numbers>

namespace mcover {

double standard_normal(Rng& rng) {
    // Box-Muller on our own uniforms keeps streams identical across standard libraries
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec random_direction(int n, Rng& rng) {
    Vec v(n);
    double nv = 0;
    while (nv < 1e-12) {
        for (int i = 0; i < n; ++i) v(i) = standard_normal(rng);
        nv = v.norm();
    }
    return v / nv;
}

}  // namespace mcover
