#pragma once

#include "mcover/types.hpp"

namespace mcover {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vec x;
};

// maximize c.x subject to A x <= b, x free
LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c);

// largest t such that a_i.x + |a_i| t <= b_i for all rows; t < 0 means the system is empty.
// t is capped at `cap` so unbounded systems still return a finite answer.
struct ChebyshevResult {
    double radius = 0.0;
    Vec center;
};
ChebyshevResult chebyshev_center(const Mat& A, const Vec& b, double cap = 1e6);

}  // namespace mcover
