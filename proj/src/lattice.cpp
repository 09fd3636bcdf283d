#include "mcover/lattice.hpp"

#include <cmath>
#include <algorithm>
#include <functional>

namespace mcover {

Lattice::Lattice(Mat basis) : basis_(std::move(basis)) {
    const long n = basis_.rows();
    if (n < 1 || basis_.cols() != n) throw InputError("Lattice: basis must be square");
    lu_ = basis_.partialPivLu();
    det_ = lu_.determinant();
    double scale = 1;
    for (long j = 0; j < n; ++j) scale *= basis_.col(j).norm();
    if (!(std::abs(det_) > 1e-12 * scale)) throw InputError("Lattice: basis is singular");
    inv_ = lu_.inverse();
}

namespace {

constexpr long kEnumBudget = 50000000;

// coefficient interval of lattice points inside t + R K along basis direction i
std::pair<long, long> coeff_range(const Lattice& L, const Vec& c, const ConvexBody& norm, int i, double R) {
    const Vec w = L.inverse().row(i).transpose();
    const double lo = c(i) - R * support_value(norm, -w);
    const double hi = c(i) + R * support_value(norm, w);
    return {static_cast<long>(std::ceil(lo - 1e-9)), static_cast<long>(std::floor(hi + 1e-9))};
}

void check_cvp_inputs(const Lattice& L, const Vec& t, const ConvexBody& norm) {
    if (t.size() != L.dim() || norm.dim() != L.dim()) throw InputError("cvp: dimension mismatch");
    if (L.dim() > 4) throw UnsupportedError("cvp: dimension above 4");
}

}  // namespace

CvpResult exact_cvp(const Lattice& L, const Vec& t, const ConvexBody& norm) {
    check_cvp_inputs(L, t, norm);
    const int n = L.dim();
    const Vec c = L.coordinates(t);
    Vec z = c.array().round().matrix();
    CvpResult best{L.point(z), z, gauge(norm, L.point(z) - t), 0};
    if (best.distance == 0) return best;

    // ties within tolerance go to the lexicographically smaller coefficient vector
    auto lex_less = [](const Vec& a, const Vec& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    };
    Vec cur(n);
    long visited = 0;
    std::function<void(int)> rec = [&](int i) {
        const auto [lo, hi] = coeff_range(L, c, norm, i, best.distance);
        for (long k = lo; k <= hi; ++k) {
            cur(i) = static_cast<double>(k);
            if (i + 1 < n) {
                rec(i + 1);
                continue;
            }
            if (++visited > kEnumBudget) throw UnsupportedError("exact_cvp: enumeration budget exhausted");
            const Vec v = L.point(cur);
            const double d = gauge(norm, v - t);
            const double tol = 1e-12 * std::max(1.0, best.distance);
            if (d < best.distance - tol || (d <= best.distance + tol && lex_less(cur, best.coeffs))) {
                best.point = v;
                best.coeffs = cur;
                best.distance = d;
            }
        }
    };
    rec(0);
    return best;
}

std::vector<Vec> lattice_points_within(const Lattice& L, const Vec& t, const ConvexBody& norm, double radius) {
    check_cvp_inputs(L, t, norm);
    const int n = L.dim();
    const Vec c = L.coordinates(t);
    std::vector<Vec> out;
    Vec cur(n);
    long visited = 0;
    std::function<void(int)> rec = [&](int i) {
        const auto [lo, hi] = coeff_range(L, c, norm, i, radius);
        for (long k = lo; k <= hi; ++k) {
            cur(i) = static_cast<double>(k);
            if (i + 1 < n) {
                rec(i + 1);
                continue;
            }
            if (++visited > kEnumBudget) throw UnsupportedError("lattice_points_within: enumeration budget exhausted");
            const Vec v = L.point(cur);
            if (gauge(norm, v - t) <= radius * (1 + 1e-12)) out.push_back(v);
        }
    };
    if (radius >= 0) rec(0);
    return out;
}

VerifiedCovering certify(Covering cov, Rng& rng, long samples) {
    CoveringReport rep = verify_covering(cov, rng, samples);
    if (!rep.pass()) throw VerificationError("certify: covering failed " + rep.failed.front());
    return VerifiedCovering(std::move(cov), std::move(rep));
}

EnumeratorConfig cvp_config() {
    EnumeratorConfig cfg;
    cfg.max_rounds = 1;
    return cfg;
}

VerifiedCovering cvp_covering(const ConvexBody& norm, double eps, Rng& rng, EnumeratorConfig cfg, long verify_samples) {
    return certify(enumerate_cover(norm, eps, cfg, rng), rng, verify_samples);
}

GapCvpAnswer gap_cvp(const Lattice& L, const Vec& t, const ConvexBody& norm, double gamma, const VerifiedCovering& vc) {
    check_cvp_inputs(L, t, norm);
    const Covering& cov = vc.cover();
    if (cov.c < 2) throw PreconditionError("gap_cvp: covering needs c >= 2");
    if (&cov.target.impl() != &norm.impl()) throw InputError("gap_cvp: covering was built for another norm body");
    if (!(gamma > 0)) throw InputError("gap_cvp: gamma must be positive");

    // any answer of an inner query lies in t + gamma (a + 2 S), inside t + gamma (1 + eps) K
    const std::vector<Vec> P = lattice_points_within(L, t, norm, gamma * (1 + cov.eps) * (1 + 1e-9));
    GapCvpAnswer ans;
    ans.bound = gamma;
    if (P.empty()) return ans;

    std::vector<Vec> Q;
    Q.reserve(P.size());
    for (const auto& w : P) Q.push_back((w - t) / gamma);
    for (size_t e = 0; e < cov.elements.size(); ++e) {
        const auto& el = cov.elements[e];
        // inner 2-gap query at t + gamma a in the norm of S = M^s(a) - a, radius gamma
        const Box box = mac_bounding_box(MacbeathRegion{cov.ambient, el.center, 2 * el.scale});
        double best = 1e300;
        int arg = -1;
        for (size_t j = 0; j < Q.size(); ++j) {
            if (!(box.lo.array() - 1e-9 <= Q[j].array()).all() || !(Q[j].array() <= box.hi.array() + 1e-9).all())
                continue;
            const double g = mac_depth(cov.ambient, el.center, Q[j]) / el.scale;
            if (g < best) {
                best = g;
                arg = static_cast<int>(j);
            }
        }
        if (arg >= 0 && best <= 2 * (1 + 1e-12)) {
            ans.found = true;
            ans.point = P[arg];
            ans.bound = gamma * (1 + cov.eps);
            ans.element = static_cast<int>(e);
            return ans;
        }
    }
    return ans;
}

namespace {

int grid_top(double eps) { return static_cast<int>(std::ceil(40 * std::log(2.0) / std::log1p(eps / 4))); }

}  // namespace

int binary_search_cap(double eps) { return static_cast<int>(std::ceil(std::log2(grid_top(eps) + 1.0))) + 1; }

CvpResult approx_cvp(const CvpInstance& inst, const VerifiedCovering& vc) {
    const double eps = inst.eps;
    if (!(eps > 0 && eps <= 1)) throw InputError("approx_cvp: eps must be in (0, 1]");
    if (vc.cover().eps > eps / 7 * (1 + 1e-12)) throw PreconditionError("approx_cvp: covering eps above eps / 7");
    const Lattice& L = inst.lattice;
    const Vec& t = inst.target;
    check_cvp_inputs(L, t, inst.norm);

    const Vec z0 = L.coordinates(t).array().round().matrix();
    CvpResult res{L.point(z0), z0, 0, 0};
    const double hi = gauge(inst.norm, res.point - t);
    res.distance = hi;
    if (hi == 0) return res;

    const int top = grid_top(eps);
    const double floor_gamma = hi * std::ldexp(1.0, -40);
    auto gamma_at = [&](int k) { return k == top ? hi : floor_gamma * std::pow(1 + eps / 4, k); };
    const int cap = binary_search_cap(eps);

    GapCvpAnswer found = gap_cvp(L, t, inst.norm, gamma_at(top), vc);
    res.steps = 1;
    if (!found.found) throw VerificationError("approx_cvp: covering missed the rounding point");
    int lo = -1, up = top;
    while (up - lo > 1) {
        if (++res.steps > cap) throw std::logic_error("approx_cvp: binary search exceeded its step cap");
        const int mid = lo + (up - lo) / 2;
        GapCvpAnswer a = gap_cvp(L, t, inst.norm, gamma_at(mid), vc);
        if (a.found) {
            up = mid;
            found = std::move(a);
        } else {
            lo = mid;
        }
    }
    res.point = found.point;
    res.coeffs = L.coordinates(found.point).array().round().matrix();
    res.distance = gauge(inst.norm, found.point - t);
    return res;
}

CvpResult approx_cvp(const CvpInstance& inst, Rng& rng) {
    if (!(inst.eps > 0 && inst.eps <= 1)) throw InputError("approx_cvp: eps must be in (0, 1]");
    const VerifiedCovering vc = cvp_covering(inst.norm, inst.eps / 7, rng);
    return approx_cvp(inst, vc);
}

IpAnswer approx_ip(const ConvexBody& K, const Vec& shift, const Lattice& L, double eps, Rng& rng,
                   long centroid_samples) {
    if (K.dim() != L.dim() || shift.size() != K.dim()) throw InputError("approx_ip: dimension mismatch");
    if (L.dim() > 4) throw UnsupportedError("approx_ip: dimension above 4");
    IpAnswer out;
    const Vec p = estimate_centroid(K, rng, centroid_samples);
    if (!membership(K, p)) throw SamplingError("approx_ip: centroid estimate left the body", 0.0);
    out.centroid = p + shift;
    const ConvexBody norm = translated(K, -p);
    const CvpResult r = approx_cvp(CvpInstance{L, out.centroid, norm, eps}, rng);
    out.distance = r.distance;
    out.found = r.distance <= 1 + eps;
    if (out.found) out.point = r.point;
    return out;
}

IpAnswer approx_ip(const ConvexBody& K, const Lattice& L, double eps, Rng& rng, long centroid_samples) {
    return approx_ip(K, Vec::Zero(K.dim()), L, eps, rng, centroid_samples);
}

}  // namespace mcover
