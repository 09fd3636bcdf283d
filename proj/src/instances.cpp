#include "mcover/instances.hpp"

#include <cmath>

namespace mcover {

ConvexBody random_hpolytope(int n, int m, Rng& rng) {
    if (m <= n) throw InputError("random_hpolytope: need more than n halfspaces");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Mat A(m, n);
        Vec b(m);
        for (int i = 0; i < m; ++i) {
            A.row(i) = random_direction(n, rng).transpose();
            b(i) = uniform(rng, 0.5, 1.5);
        }
        try {
            return ConvexBody::hpolytope(A, b);
        } catch (const InputError&) {
        }
    }
    throw SamplingError("random_hpolytope: no bounded draw", 0.0);
}

ConvexBody random_ellipsoid(int n, Rng& rng, const Vec& center) {
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = standard_normal(rng);
    const Mat Q = G.householderQr().householderQ();
    Vec ev(n);
    for (int i = 0; i < n; ++i) ev(i) = uniform(rng, 0.25, 1.0);
    const Mat S = Q * ev.asDiagonal() * Q.transpose();
    return ConvexBody::ellipsoid(center, 0.5 * (S + S.transpose()));
}

ConvexBody random_ellipsoid(int n, Rng& rng) { return random_ellipsoid(n, rng, Vec::Zero(n)); }

Mat random_basis(int n, Rng& rng) {
    for (;;) {
        Mat B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B(i, j) = static_cast<double>(static_cast<int>(rng() % 7) - 3);
        if (std::abs(B.determinant()) >= 1 - 1e-9) return B;
    }
}

ConvexBody norm_family(const std::string& name, int n, Rng& rng) {
    if (name == "square") return ConvexBody::cube(n);
    if (name == "diamond") return ConvexBody::lp_ball(n, 1);
    if (name == "hpoly") return random_hpolytope(n, 3 * n + 4, rng);
    if (name == "ellipse") return random_ellipsoid(n, rng);
    throw InputError("norm_family: unknown family " + name);
}

}  // namespace mcover
