#include "mcover/approx.hpp"

#include <cmath>

#include "mcover/hull.hpp"

namespace mcover {

SandwichReport verify_sandwich(const ConvexBody& K, const ConvexBody& P, double eps, Rng& rng, long samples) {
    const auto* poly = P.polytope();
    if (!poly) throw InputError("verify_sandwich: P must be a polytope");
    if (P.dim() != K.dim()) throw InputError("verify_sandwich: dimension mismatch");
    if (!(eps >= 0)) throw InputError("verify_sandwich: eps must be nonnegative");
    SandwichReport rep;
    rep.vertices = poly->V.cols();
    rep.facets = poly->A.rows();

    double gmax = 0;
    for (int j = 0; j < poly->V.cols(); ++j) gmax = std::max(gmax, gauge(K, poly->V.col(j)));
    rep.outer_margin = 1 + eps - gmax;
    rep.outer_pass = rep.outer_margin >= -kExactTol;

    rep.inner_method = "support";
    double worst = 1e300;
    int worst_row = -1;
    for (int i = 0; i < poly->A.rows(); ++i) {
        const double m = poly->b(i) - support_value(K, poly->A.row(i).transpose());
        if (m < worst) {
            worst = m;
            worst_row = i;
        }
    }
    rep.inner_margin = worst;
    rep.inner_pass = worst >= -kExactTol;
    if (!rep.inner_pass) rep.witness = poly->A.row(worst_row).transpose();

    if (!K.polytope()) {
        rep.inner_method += "+sampled";
        const int n = K.dim();
        for (long k = 0; k < samples; ++k) {
            const Vec u = random_direction(n, rng);
            const Vec p = boundary_ray(K, u);
            ++rep.sampled_directions;
            if (((poly->A * p - poly->b).array() > kExactTol).any()) {
                rep.inner_pass = false;
                if (!rep.witness) rep.witness = u;
                break;
            }
        }
    }
    return rep;
}

double banach_mazur_eps_prime(double eps, double c) { return (1 + eps) / (1 + eps / c) - 1; }

ApproxResult banach_mazur_polytope(const ConvexBody& K, double eps, const EnumeratorConfig& cfg, Rng& rng,
                                   long verify_samples) {
    if (!(eps > 0 && eps < 1)) throw InputError("banach_mazur_polytope: eps must be in (0, 1)");
    EnumeratorConfig c2 = cfg;
    c2.c = 2;
    const double ep = banach_mazur_eps_prime(eps, c2.c);
    const ConvexBody Kc = scaled(K, 1 + eps / c2.c);
    Covering cov = enumerate_cover(Kc, ep, c2, rng);
    CoveringReport rep = verify_covering(cov, rng, verify_samples);
    if (!rep.pass()) throw VerificationError("banach_mazur_polytope: covering failed " + rep.failed.front());

    const int n = K.dim();
    Mat X(n, static_cast<long>(cov.elements.size()));
    for (size_t j = 0; j < cov.elements.size(); ++j) X.col(static_cast<long>(j)) = cov.elements[j].center;
    std::optional<ConvexBody> P;
    if (n <= 4) {
        const Hull h = convex_hull(X);
        Mat V(n, static_cast<long>(h.vertices.size()));
        for (size_t j = 0; j < h.vertices.size(); ++j) V.col(static_cast<long>(j)) = X.col(h.vertices[j]);
        P = ConvexBody::vpolytope(V);
    }
    return ApproxResult{std::move(P), std::move(X), ep, std::move(cov), std::move(rep)};
}

}  // namespace mcover
