#include "mcover/macbeath.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Cholesky>
#include <optional>
#include <variant>

#include "mcover/hull.hpp"
#include "mcover/lp.hpp"

namespace mcover {

MacbeathRegion macbeath_region(const ConvexBody& K, const Vec& x, double lambda) {
    if (x.size() != K.dim()) throw InputError("macbeath_region: dimension mismatch");
    if (!(lambda > 0)) throw InputError("macbeath_region: scale must be positive");
    if (!(gauge(K, x) < 1)) throw InputError("macbeath_region: center must be interior");
    return MacbeathRegion{K, x, lambda};
}

bool mac_membership(const MacbeathRegion& M, const Vec& y) {
    const Vec d = (y - M.center) / M.scale;
    return membership(M.body, M.center + d) && membership(M.body, M.center - d);
}

double mac_depth(const ConvexBody& K, const Vec& x, const Vec& y) {
    const Vec d = y - x;
    return std::max(gauge_about(K, x, d), gauge_about(K, x, -d));
}

Vec mac_boundary_point(const MacbeathRegion& M, const Vec& direction) {
    const double s = mac_depth(M.body, M.center, M.center + direction);
    return M.center + direction * (M.scale / s);
}

Box mac_bounding_box(const MacbeathRegion& M) {
    const Vec& lo = M.body.box_lo();
    const Vec& hi = M.body.box_hi();
    const Vec& x = M.center;
    Vec half = M.scale * (hi - x).cwiseMin(x - lo);
    // ellipsoids: the lens sits in a ball about x of radius scale * sqrt(1 - |x - c|^2) in whitened coordinates
    if (const auto* e = std::get_if<Ellipsoid>(&M.body.representation())) {
        const Vec d = x - e->center;
        const double q = d.dot(e->shape.llt().solve(d));
        half = half.cwiseMin(M.scale * std::sqrt(std::max(0.0, 1 - q)) * e->shape.diagonal().cwiseSqrt());
    } else if (const auto* b = std::get_if<LpBall>(&M.body.representation()); b && b->p == 2) {
        const double q = x.squaredNorm() / (b->radius * b->radius);
        half = half.cwiseMin(Vec::Constant(x.size(), M.scale * std::sqrt(std::max(0.0, 1 - q)) * b->radius));
    }
    return Box{x - half, x + half};
}

Vec mac_sample(const MacbeathRegion& M, Rng& rng) {
    const Box b = mac_bounding_box(M);
    const int n = static_cast<int>(M.center.size());
    Vec y(n);
    for (long t = 0; t < 10000000; ++t) {
        for (int i = 0; i < n; ++i) y(i) = uniform(rng, b.lo(i), b.hi(i));
        if (mac_membership(M, y)) return y;
    }
    throw SamplingError("mac_sample: rejection budget exhausted", 0.0);
}

Halfspaces mac_as_hpoly(const ConvexBody& K, const Vec& x, double lambda) {
    const auto* poly = K.polytope();
    if (!poly) throw UnsupportedError("mac_as_hpoly: needs a polytope body");
    const int m = static_cast<int>(poly->A.rows());
    Halfspaces h{Mat(2 * m, K.dim()), Vec(2 * m)};
    for (int i = 0; i < m; ++i) {
        const double ax = poly->A.row(i).dot(x);
        h.A.row(i) = poly->A.row(i);
        h.b(i) = lambda * poly->b(i) + (1 - lambda) * ax;
        h.A.row(m + i) = -poly->A.row(i);
        h.b(m + i) = lambda * poly->b(i) - (1 + lambda) * ax;
    }
    return h;
}

namespace {

// depth of y in M divided by its scale, with a subgradient
double scaled_depth(const MacbeathRegion& M, const Vec& y, Vec* grad) {
    const Vec d = y - M.center;
    const double t1 = gauge_about(M.body, M.center, d);
    const double t2 = gauge_about(M.body, M.center, -d);
    if (grad) {
        if (t1 >= t2)
            *grad = gauge_about_gradient(M.body, M.center, d) / M.scale;
        else
            *grad = -gauge_about_gradient(M.body, M.center, -d) / M.scale;
    }
    return std::max(t1, t2) / M.scale;
}

enum class Verdict { Disjoint, Meeting, Unknown };

// minimize F = max(depth_1, depth_2) over R^n; F <= 1 somewhere iff the regions meet
Verdict ellipsoid_separation(const MacbeathRegion& A, const MacbeathRegion& B) {
    const int n = static_cast<int>(A.center.size());
    auto F = [&](const Vec& y, Vec& g) {
        Vec ga, gb;
        const double fa = scaled_depth(A, y, &ga);
        const double fb = scaled_depth(B, y, &gb);
        if (fa >= fb) {
            g = ga;
            return fa;
        }
        g = gb;
        return fb;
    };
    // line search on the segment between centers first; it settles most meeting pairs
    auto Fs = [&](double t) {
        Vec y = (1 - t) * A.center + t * B.center;
        return std::max(scaled_depth(A, y, nullptr), scaled_depth(B, y, nullptr));
    };
    double lo = 0, hi = 1;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo), f1 = Fs(x1), f2 = Fs(x2);
    for (int it = 0; it < 40; ++it) {
        if (std::min(f1, f2) <= 1) return Verdict::Meeting;
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = Fs(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = Fs(x2);
        }
    }
    const double tbest = f1 <= f2 ? x1 : x2;
    const double f0 = std::min(f1, f2);
    // every minimizer lies in M^{f0 * scale}(A.center), inside the ball of radius f0*scale*2r' about it
    Vec c = (1 - tbest) * A.center + tbest * B.center;
    const double R = f0 * A.scale * 2 * A.body.outer_radius() + (c - A.center).norm();
    Mat P = Mat::Identity(n, n) * (R * R);
    double lower = -1;
    const int max_iter = 60 * n * (n + 1);
    Vec g;
    const double nn = n;
    for (int it = 0; it < max_iter; ++it) {
        const double fc = F(c, g);
        if (fc <= 1) return Verdict::Meeting;
        const Vec Pg = P * g;
        const double q = g.dot(Pg);
        if (!(q > 0)) return Verdict::Unknown;
        const double sq = std::sqrt(q);
        lower = std::max(lower, fc - sq);
        if (lower > 1 + 1e-9) return Verdict::Disjoint;
        const Vec gt = Pg / sq;
        c -= gt / (nn + 1);
        P = (nn * nn / (nn * nn - 1)) * (P - (2 / (nn + 1)) * gt * gt.transpose());
    }
    return Verdict::Unknown;
}

// whitened lens: M^lambda(x) of an ellipsoid is the intersection of two balls of radius lambda
struct Lens {
    Vec a, b;
    double r;
};

std::optional<Lens> ellipsoid_lens(const MacbeathRegion& M) {
    const Vec* c = nullptr;
    const Mat* Q = nullptr;
    double R = 1;
    Vec zero;
    if (const auto* e = std::get_if<Ellipsoid>(&M.body.representation())) {
        c = &e->center;
        Q = &e->shape;
    } else if (const auto* b = std::get_if<LpBall>(&M.body.representation()); b && b->p == 2) {
        R = b->radius;
    } else {
        return std::nullopt;
    }
    Vec xt, ct;
    if (Q) {
        Eigen::LLT<Mat> llt(*Q);
        xt = llt.matrixL().solve(M.center);
        ct = llt.matrixL().solve(*c);
    } else {
        xt = M.center / R;
        ct = Vec::Zero(M.center.size());
    }
    const double l = M.scale;
    return Lens{(1 - l) * xt + l * ct, (1 + l) * xt - l * ct, l};
}

// do the closed balls share a point? minimizes max_i |u - c_i|^2 - r_i^2 over active sets
std::optional<bool> balls_meet(const std::vector<Vec>& cs, const std::vector<double>& rs) {
    const int k = static_cast<int>(cs.size());
    const int n = static_cast<int>(cs[0].size());
    double rmax = 0;
    for (double r : rs) rmax = std::max(rmax, r);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double s = rs[i] + rs[j];
            if ((cs[i] - cs[j]).squaredNorm() > s * s * (1 + kExactTol)) return false;
        }
    for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> S;
        for (int i = 0; i < k; ++i)
            if (mask >> i & 1) S.push_back(i);
        const int m = static_cast<int>(S.size()) - 1;
        if (m > n) continue;
        const Vec& c0 = cs[S[0]];
        Vec u = c0;
        Vec alpha;
        if (m > 0) {
            Mat D(n, m);
            Vec h(m);
            for (int j = 0; j < m; ++j) {
                D.col(j) = cs[S[j + 1]] - c0;
                h(j) = (D.col(j).squaredNorm() + rs[S[0]] * rs[S[0]] - rs[S[j + 1]] * rs[S[j + 1]]) / 2;
            }
            const Mat G = D.transpose() * D;
            Eigen::FullPivLU<Mat> lu(G);
            if (lu.rank() < m) continue;
            alpha = lu.solve(h);
            if (alpha.minCoeff() < -1e-12 || alpha.sum() > 1 + 1e-12) continue;
            u += D * alpha;
        }
        const double v = (u - c0).squaredNorm() - rs[S[0]] * rs[S[0]];
        bool opt = true;
        for (int j = 0; j < k && opt; ++j)
            if (!(mask >> j & 1)) opt = (u - cs[j]).squaredNorm() - rs[j] * rs[j] <= v + 1e-12 * rmax * rmax;
        if (opt) return v <= kExactTol * rmax * rmax;
    }
    return std::nullopt;
}

bool same_body(const ConvexBody& a, const ConvexBody& b) { return &a.impl() == &b.impl(); }

}  // namespace

bool mac_disjoint(const MacbeathRegion& M1, const MacbeathRegion& M2) {
    if (M1.center.size() != M2.center.size()) throw InputError("mac_disjoint: dimension mismatch");
    if (!mac_bounding_box(M1).overlaps(mac_bounding_box(M2))) return true;
    if (M1.body.polytope() && M2.body.polytope()) {
        if (same_body(M1.body, M2.body)) {
            // slabs along the facet normals of K bound both regions
            const auto* P = M1.body.polytope();
            const Vec ax1 = P->A * M1.center, ax2 = P->A * M2.center;
            for (long i = 0; i < P->A.rows(); ++i) {
                const double lo1 = (1 + M1.scale) * ax1(i) - M1.scale * P->b(i);
                const double hi1 = M1.scale * P->b(i) + (1 - M1.scale) * ax1(i);
                const double lo2 = (1 + M2.scale) * ax2(i) - M2.scale * P->b(i);
                const double hi2 = M2.scale * P->b(i) + (1 - M2.scale) * ax2(i);
                if (hi1 < lo2 - kExactTol || hi2 < lo1 - kExactTol) return true;
            }
        }
        if (scaled_depth(M2, M1.center, nullptr) <= 1 || scaled_depth(M1, M2.center, nullptr) <= 1) return false;
        Halfspaces h1 = mac_as_hpoly(M1.body, M1.center, M1.scale);
        Halfspaces h2 = mac_as_hpoly(M2.body, M2.center, M2.scale);
        Mat A(h1.A.rows() + h2.A.rows(), h1.A.cols());
        Vec b(h1.b.size() + h2.b.size());
        A << h1.A, h2.A;
        b << h1.b, h2.b;
        return chebyshev_center(A, b).radius < -kExactTol;
    }
    if (same_body(M1.body, M2.body)) {
        const auto l1 = ellipsoid_lens(M1), l2 = ellipsoid_lens(M2);
        if (l1 && l2) {
            const auto meet = balls_meet({l1->a, l1->b, l2->a, l2->b}, {l1->r, l1->r, l2->r, l2->r});
            if (meet) return !*meet;
        }
    }
    if (scaled_depth(M2, M1.center, nullptr) <= 1 || scaled_depth(M1, M2.center, nullptr) <= 1) return false;
    return ellipsoid_separation(M1, M2) == Verdict::Disjoint;
}

bool mac_contains(const MacbeathRegion& outer, const MacbeathRegion& inner) {
    if (outer.center.size() != inner.center.size()) throw InputError("mac_contains: dimension mismatch");
    if (outer.body.polytope() && inner.body.polytope()) {
        Halfspaces hi = mac_as_hpoly(inner.body, inner.center, inner.scale);
        Halfspaces ho = mac_as_hpoly(outer.body, outer.center, outer.scale);
        const Mat V = halfspace_vertices(hi.A, hi.b);
        for (int j = 0; j < V.cols(); ++j) {
            const Vec r = ho.A * V.col(j) - ho.b;
            for (int i = 0; i < r.size(); ++i)
                if (r(i) > kExactTol * ho.A.row(i).norm()) return false;
        }
        return true;
    }
    Rng rng(0x6d6163);
    const int n = static_cast<int>(inner.center.size());
    for (int k = 0; k < 1000; ++k) {
        const Vec y = mac_boundary_point(inner, random_direction(n, rng));
        if (scaled_depth(outer, y, nullptr) > 1 + kExactTol) return false;
    }
    return true;
}

namespace {

int grid_cells(int n, std::size_t items) {
    const double per_axis = std::pow(static_cast<double>(std::max<std::size_t>(items, 1)), 1.0 / n);
    const int cap = n == 2 ? 256 : (n == 3 ? 48 : (n == 4 ? 12 : 3));
    return std::clamp(static_cast<int>(std::ceil(1.5 * per_axis)), 4, cap);
}

Box ambient_box(const ConvexBody& K) { return Box{K.box_lo(), K.box_hi()}; }

}  // namespace

MNetBuilder::MNetBuilder(const ConvexBody& ambient, double c, std::size_t expected_size)
    : net_{ambient, {}, {}, c, 0}, grid_(ambient_box(ambient), grid_cells(ambient.dim(), expected_size)) {
    if (!(c >= 2)) throw InputError("build_mnet: c must be >= 2");
}

bool MNetBuilder::offer(const Vec& x, int source) {
    if (x.size() != net_.ambient.dim() || !(gauge(net_.ambient, x) < 1)) {
        ++net_.skipped;
        return false;
    }
    MacbeathRegion R{net_.ambient, x, net_.packing_scale()};
    const Box b = mac_bounding_box(R);
    for (int id : grid_.query(b))
        if (boxes_[id].overlaps(b) && !mac_disjoint(R, regions_[id])) return false;
    const int id = static_cast<int>(regions_.size());
    regions_.push_back(std::move(R));
    boxes_.push_back(b);
    grid_.insert(id, b);
    net_.centers.push_back(x);
    net_.source.push_back(source);
    return true;
}

MNet build_mnet(const ConvexBody& ambient, const std::vector<Vec>& candidates, double c) {
    MNetBuilder builder(ambient, c, candidates.size() / 4);
    for (size_t k = 0; k < candidates.size(); ++k) builder.offer(candidates[k], static_cast<int>(k));
    return builder.take();
}

Covering hitting_to_cover(const ConvexBody& ambient, const ConvexBody& target, const std::vector<Vec>& hits,
                          double c, double eps, const std::vector<int>& layers) {
    if (!(c >= 2)) throw InputError("hitting_to_cover: c must be >= 2");
    if (!layers.empty() && layers.size() != hits.size()) throw InputError("hitting_to_cover: layer count mismatch");
    Covering cov{ambient, target, c, eps, {}, false};
    cov.elements.reserve(hits.size());
    for (size_t k = 0; k < hits.size(); ++k) {
        if (hits[k].size() != ambient.dim() || !(gauge(ambient, hits[k]) < 1))
            throw InputError("hitting_to_cover: hit outside the ambient interior");
        cov.elements.push_back({hits[k], 1 / c, layers.empty() ? -1 : layers[k]});
    }
    return cov;
}

Covering hitting_to_cover(const ConvexBody& ambient, const std::vector<Vec>& hits, double c) {
    return hitting_to_cover(ambient, ambient, hits, c, 0.0);
}

CoverIndex::CoverIndex(const Covering& cov)
    : cov_(cov), grid_(ambient_box(cov.ambient), grid_cells(cov.ambient.dim(), cov.elements.size())) {
    regions_.reserve(cov.elements.size());
    for (size_t i = 0; i < cov.elements.size(); ++i) {
        const auto& e = cov.elements[i];
        regions_.push_back(MacbeathRegion{cov.ambient, e.center, e.scale});
        boxes_.push_back(mac_bounding_box(regions_.back()));
        grid_.insert(static_cast<int>(i), boxes_.back());
    }
}

int CoverIndex::find(const Vec& y) const {
    for (int id : grid_.at(y))
        if (boxes_[id].contains(y) && mac_membership(regions_[id], y)) return id;
    return -1;
}

CoveringReport verify_covering(const Covering& cov, Rng& rng, long samples, const VerifyOptions& opt) {
    if (samples < 1000) throw InputError("verify_covering: need at least 1000 samples");
    CoveringReport rep;
    rep.samples = samples;
    rep.coverage_threshold = opt.coverage_threshold;
    rep.element_count = static_cast<long>(cov.elements.size());
    for (const auto& e : cov.elements) ++rep.layer_histogram[e.layer];

    // coverage of the target
    CoverIndex index(cov);
    UniformSampler sampler(cov.target);
    for (long t = 0; t < samples; ++t)
        if (index.find(sampler(rng)) >= 0) ++rep.covered;
    rep.coverage_rate = static_cast<double>(rep.covered) / static_cast<double>(samples);
    rep.coverage_pass = rep.coverage_rate >= opt.coverage_threshold;

    // buffering: the c-expansion of each element stays in the ambient body
    const bool poly = cov.ambient.polytope() != nullptr;
    rep.buffering_method = poly ? "exact" : "structural";
    const int n = cov.ambient.dim();
    Rng dir_rng(0x627566);
    for (const auto& e : cov.elements) {
        const double s = cov.c * e.scale;
        bool ok = gauge(cov.ambient, e.center) < 1;
        if (ok && poly) {
            const Halfspaces h = mac_as_hpoly(cov.ambient, e.center, s);
            const Mat V = halfspace_vertices(h.A, h.b);
            for (int j = 0; j < V.cols() && ok; ++j) ok = gauge(cov.ambient, V.col(j)) <= 1 + kExactTol;
        } else if (ok && s > 1) {
            // M^s(x) is inside M^1(x), which is inside the body, only when s <= 1
            rep.buffering_method = "sampled";
            MacbeathRegion M{cov.ambient, e.center, s};
            for (long k = 0; k < opt.containment_directions && ok; ++k)
                ok = gauge(cov.ambient, mac_boundary_point(M, random_direction(n, dir_rng))) <= 1 + kExactTol;
        }
        if (!ok) ++rep.buffering_failures;
    }
    rep.buffering_pass = rep.buffering_failures == 0;

    // packing of the shrunken regions, when the centers came from an MNet
    if (cov.mnet_provenance && opt.check_packing) {
        rep.packing_checked = true;
        const double lam = 1 / (4 * cov.c);
        GridIndex grid(ambient_box(cov.ambient), grid_cells(n, cov.elements.size()));
        std::vector<MacbeathRegion> regions;
        std::vector<Box> boxes;
        for (size_t i = 0; i < cov.elements.size(); ++i) {
            MacbeathRegion R{cov.ambient, cov.elements[i].center, lam};
            const Box b = mac_bounding_box(R);
            for (int id : grid.query(b))
                if (boxes[id].overlaps(b) && !mac_disjoint(R, regions[id])) ++rep.packing_violations;
            regions.push_back(R);
            boxes.push_back(b);
            grid.insert(static_cast<int>(i), b);
        }
        rep.packing_pass = rep.packing_violations == 0;
    }

    if (!rep.coverage_pass) rep.failed.push_back("coverage");
    if (!rep.buffering_pass) rep.failed.push_back("buffering");
    if (!rep.packing_pass) rep.failed.push_back("packing");
    return rep;
}

}  // namespace mcover
