#include "mcover/enumerate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mcover/caps.hpp"

namespace mcover {

double LayeredDecomposition::layer_eps(int i) const { return std::ldexp(eps, i - 1); }

LayeredDecomposition layered_decomposition(double eps, double beta) {
    if (!(eps > 0 && eps <= 1)) throw InputError("layered_decomposition: eps must be in (0, 1]");
    if (!(beta > 0 && beta < 1)) throw InputError("layered_decomposition: beta must be in (0, 1)");
    LayeredDecomposition d{eps, beta, 0};
    d.k0 = std::max(0, static_cast<int>(std::ceil(std::log2(beta / eps) - 1e-12)));
    return d;
}

double EnumeratorConfig::multiplier(int n) const { return A > 0 ? A : 8 * std::ldexp(1.0, n); }
double EnumeratorConfig::t_prime_factor(int n) const { return kappa_prime > 0 ? kappa_prime : std::pow(4.0, -n); }

namespace {

// geometric layer of a center in K_eps (it may sit outside K)
int element_layer(const ConvexBody& Ke, const LayeredDecomposition& d, const Vec& x) {
    const double ray = 1 - gauge(Ke, x);  // ray distance, defined at O too
    if (ray >= std::ldexp(d.eps, d.k0)) return d.wide();
    if (ray < d.eps) return 0;
    return std::clamp(static_cast<int>(std::floor(std::log2(ray / d.eps))) + 1, 0, d.k0);
}

}  // namespace

int layer_of(const ConvexBody& K, double eps, const Vec& x, double beta) {
    const auto d = layered_decomposition(eps, beta);
    if (!membership(K, x)) throw InputError("layer_of: point outside the body");
    return element_layer(scaled(K, 1 + eps), d, x);
}

Covering enumerate_cover(const ConvexBody& K, double eps, const EnumeratorConfig& cfg, Rng& rng,
                         EnumeratorStats* stats) {
    if (!(cfg.c >= 2)) throw InputError("enumerate_cover: c must be >= 2");
    const auto d = layered_decomposition(eps, cfg.beta);
    const int n = K.dim();
    const std::uint64_t base = rng();
    EnumeratorStats st;

    if (cfg.check_well_centered) {
        Rng kb_rng = derive_rng(base, 0xfeed);
        st.kb = kb_ratio(K, kb_rng, cfg.kb_samples);
        const double thr = cfg.kb_threshold > 0 ? cfg.kb_threshold : default_kb_threshold(n);
        if (st.kb < thr) throw PreconditionError("enumerate_cover: body is not well-centered");
    }

    const ConvexBody Ke = scaled(K, 1 + eps);
    const ConvexBody Kp = polar(Ke);
    const double A = cfg.multiplier(n);
    const double logf = cfg.log_factor ? std::log(1 / eps) : 1.0;
    // ray(y) <= (1 + 1/c) ray(x) for y in M^{1/c}(x), and every point of K has ray >= eps / (1 + eps) in K_eps,
    // so shallower hits give elements that miss K
    const double cut = eps / ((1 + eps) * (1 + 1 / cfg.c));

    // one pass over every layer and channel; round r > 0 reuses the same distributions on fresh streams
    auto draw = [&](int round, std::vector<Vec>& out) {
        const std::uint64_t tag = static_cast<std::uint64_t>(round) << 8;
        for (int i = 0; i <= d.k0; ++i) {
            const double ei = d.layer_eps(i);
            const long count = static_cast<long>(std::ceil(A * std::pow(ei, -(n - 1) / 2.0) * logf));
            long drawn = 0;
            if (count > 0) {
                // channel 1: large regions straight from the shell
                Rng r1 = derive_rng(base, i + 1, tag | 1);
                ShellSampler shell(Ke, std::max(0.0, 1 - 4 * ei));
                for (long k = 0; k < count; ++k) out.push_back(shell(r1));
                drawn += count;
                // channel 2: small regions through representative caps of polar shell points
                if (cfg.polar_channel) {
                    Rng r2 = derive_rng(base, i + 1, tag | 2);
                    ShellSampler pshell(Kp, std::max(0.0, 1 - 2 * ei));
                    for (long k = 0; k < count; ++k) {
                        const Vec p = pshell(r2);
                        const Cap C = representative_cap_unchecked(Ke, Kp, p, std::min(ei, 0.5));
                        out.push_back(cap_sample(expand_cap(C, cfg.cap_expansion), r2));
                    }
                    drawn += count;
                }
            }
            if (round == 0) st.drawn.push_back(drawn);
        }
        Rng rw = derive_rng(base, 0, tag | 3);
        UniformSampler uni(K);
        const long count = static_cast<long>(A * std::ldexp(1.0, n));
        for (long k = 0; k < count; ++k) out.push_back(uni(rw));
        if (round == 0) st.drawn.push_back(count);
    };
    auto usable = [&](const Vec& h) {
        if (1 - gauge(Ke, h) >= cut) return true;
        ++st.skipped;
        return false;
    };

    std::vector<Vec> hits;
    draw(0, hits);
    st.candidates = static_cast<long>(hits.size());
    st.rounds = 1;

    std::vector<Vec> centers;
    if (cfg.thin) {
        MNetBuilder builder(Ke, cfg.c, hits.size() / 4);
        for (const auto& h : hits)
            if (usable(h)) builder.offer(h);
        for (int round = 1; round < cfg.max_rounds; ++round) {
            const std::size_t before = builder.net().centers.size();
            hits.clear();
            draw(round, hits);
            st.candidates += static_cast<long>(hits.size());
            ++st.rounds;
            for (const auto& h : hits)
                if (usable(h)) builder.offer(h);
            const std::size_t added = builder.net().centers.size() - before;
            if (static_cast<double>(added) < cfg.saturation * static_cast<double>(before)) break;
        }
        centers = builder.take().centers;
    } else {
        for (auto& h : hits)
            if (usable(h)) centers.push_back(std::move(h));
    }
    std::vector<int> layers;
    layers.reserve(centers.size());
    for (const auto& x : centers) layers.push_back(element_layer(Ke, d, x));
    Covering cov = hitting_to_cover(Ke, K, centers, cfg.c, eps, layers);
    cov.mnet_provenance = cfg.thin;
    if (stats) *stats = std::move(st);
    return cov;
}

std::vector<ElementVolume> classify(const Covering& cov, const EnumeratorConfig& cfg, Rng& rng,
                                    long samples_per_element) {
    if (samples_per_element < 100) throw InputError("classify: need at least 100 samples per element");
    const int n = cov.ambient.dim();
    const double t = std::pow(cov.eps, (n + 1) / 2.0);
    const double tp = cfg.t_prime_factor(n) * t;
    const auto ev = exact_volume(cov.ambient);
    const double vol = ev ? *ev : estimate_volume(cov.ambient, rng, 200000).value;
    std::vector<ElementVolume> out;
    out.reserve(cov.elements.size());
    Vec y(n);
    for (const auto& e : cov.elements) {
        const MacbeathRegion M{cov.ambient, e.center, e.scale};
        const Box b = mac_bounding_box(M);
        const double box_vol = (b.hi - b.lo).prod();
        long in = 0;
        for (long k = 0; k < samples_per_element; ++k) {
            for (int i = 0; i < n; ++i) y(i) = uniform(rng, b.lo(i), b.hi(i));
            in += mac_membership(M, y);
        }
        const double p = static_cast<double>(in) / static_cast<double>(samples_per_element);
        ElementVolume r;
        r.relative.value = p * box_vol / vol;
        r.relative.std_error = std::sqrt(p * (1 - p) / static_cast<double>(samples_per_element)) * box_vol / vol;
        r.cls = r.relative.value >= t ? RegionClass::Large : (r.relative.value < tp ? RegionClass::Small : RegionClass::Medium);
        out.push_back(r);
    }
    return out;
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& y) {
    if (eps.size() != y.size() || eps.size() < 2) throw InputError("loglog_slope: need two or more points");
    const int m = static_cast<int>(eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double x = std::log(1 / eps[i]), v = std::log(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    const double den = m * sxx - sx * sx;
    if (!(std::abs(den) > 0)) throw InputError("loglog_slope: eps values must differ");
    return (m * sxy - sx * sy) / den;
}

ScalingResult scaling_experiment(const ConvexBody& K, const std::vector<double>& eps_list,
                                 const EnumeratorConfig& cfg, Rng& rng, long verify_samples) {
    if (eps_list.empty()) throw InputError("scaling_experiment: empty eps list");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw InputError("scaling_experiment: eps list must be decreasing");
    ScalingResult res;
    for (double e : eps_list) {
        const auto t0 = std::chrono::steady_clock::now();
        EnumeratorStats st;
        Covering cov = enumerate_cover(K, e, cfg, rng, &st);
        ScalingRow row;
        row.eps = e;
        row.size = static_cast<long>(cov.elements.size());
        row.candidates = st.candidates;
        row.report = verify_covering(cov, rng, verify_samples);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!row.report.pass()) {
            std::ostringstream os;
            os << "scaling_experiment: covering failed verification at eps = " << e << " (" << row.report.failed.front()
               << ")";
            throw VerificationError(os.str());
        }
        res.rows.push_back(std::move(row));
    }
    if (res.rows.size() >= 2) {
        std::vector<double> es, ys;
        for (const auto& r : res.rows) {
            es.push_back(r.eps);
            ys.push_back(static_cast<double>(r.size));
        }
        res.slope = loglog_slope(es, ys);
    }
    return res;
}

}  // namespace mcover
