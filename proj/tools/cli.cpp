#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>

#include "mcover/io.hpp"
#include "mcover/lemmas.hpp"

namespace mcover {

namespace {

struct Options {
    std::uint64_t seed = 1;
    int threads = 1;

    std::string body, cover, instance, basis, out, svg, suite = "all";
    double eps = 0.1, c = 2;
    long samples = 0, trials = 500;
    std::vector<double> eps_list, shift;
    bool exact = false, json = false;
};

void emit(const Json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) out << dump(j);
    else write_text_file(path, dump(j));
}

int cmd_cover(const Options& o, std::ostream& out) {
    const ConvexBody K = body_from_json(read_json_file(o.body));
    EnumeratorConfig cfg;
    cfg.c = o.c;
    Rng rng(o.seed);
    const Covering cov = enumerate_cover(K, o.eps, cfg, rng);
    emit(covering_to_json(cov), o.out, out);
    if (!o.svg.empty()) write_text_file(o.svg, covering_svg(cov));
    if (!o.out.empty()) out << dump(Json{{"elements", cov.elements.size()}, {"eps", cov.eps}, {"out", o.out}});
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const Covering cov = covering_from_json(read_json_file(o.cover));
    Rng rng(o.seed);
    const CoveringReport rep = verify_covering(cov, rng, o.samples ? o.samples : 100000);
    emit(report_to_json(rep), o.out, out);
    if (rep.pass()) return 0;
    for (const auto& f : rep.failed) err << "verification failed: " << f << "\n";
    return 1;
}

int cmd_approx(const Options& o, std::ostream& out, std::ostream& err) {
    const ConvexBody K = body_from_json(read_json_file(o.body));
    EnumeratorConfig cfg;
    Rng rng(o.seed);
    const ApproxResult res = banach_mazur_polytope(K, o.eps, cfg, rng);
    if (!res.polytope) throw UnsupportedError("approx: no hull above n = 4");
    const SandwichReport sw = verify_sandwich(K, *res.polytope, o.eps, rng, o.samples ? o.samples : 10000);
    Json j{{"eps", o.eps},
           {"eps_prime", res.eps_prime},
           {"vertices", res.polytope->polytope()->V.cols()},
           {"polytope", body_to_json(*res.polytope)},
           {"covering_report", report_to_json(res.cover_report)},
           {"sandwich", sandwich_to_json(sw)}};
    emit(j, o.out, out);
    if (!o.svg.empty()) write_text_file(o.svg, polytope_svg(K, *res.polytope, o.eps));
    if (sw.pass() && res.cover_report.pass()) return 0;
    if (!sw.outer_pass) err << "verification failed: outer sandwich\n";
    if (!sw.inner_pass) err << "verification failed: inner sandwich\n";
    for (const auto& f : res.cover_report.failed) err << "verification failed: " << f << "\n";
    return 1;
}

int cmd_cvp(const Options& o, std::ostream& out) {
    CvpInstance inst = instance_from_json(read_json_file(o.instance));
    Rng rng(o.seed);
    const CvpResult r = approx_cvp(inst, rng);
    Json j{{"point", vec_to_json(r.point)},
           {"coeffs", vec_to_json(r.coeffs)},
           {"distance", r.distance},
           {"eps", inst.eps},
           {"steps", r.steps}};
    if (o.exact) {
        const CvpResult e = exact_cvp(inst.lattice, inst.target, inst.norm);
        j["exact_distance"] = e.distance;
        j["exact_point"] = vec_to_json(e.point);
    }
    emit(j, o.out, out);
    return 0;
}

int cmd_ip(const Options& o, std::ostream& out) {
    const ConvexBody K = body_from_json(read_json_file(o.body));
    const Lattice L = lattice_from_json(read_json_file(o.basis));
    Vec shift = Vec::Zero(K.dim());
    if (!o.shift.empty()) {
        if (static_cast<int>(o.shift.size()) != K.dim()) throw InputError("ip: --shift has the wrong dimension");
        for (int i = 0; i < K.dim(); ++i) shift(i) = o.shift[i];
    }
    Rng rng(o.seed);
    const IpAnswer a = approx_ip(K, shift, L, o.eps, rng);
    Json j{{"found", a.found}, {"eps", o.eps}, {"centroid", vec_to_json(a.centroid)}, {"distance", a.distance}};
    if (a.found) j["point"] = vec_to_json(a.point);
    emit(j, o.out, out);
    return 0;
}

int cmd_scale(const Options& o, std::ostream& out, std::ostream& err) {
    const ConvexBody K = body_from_json(read_json_file(o.body));
    EnumeratorConfig cfg;
    cfg.c = o.c;
    Rng rng(o.seed);
    const ScalingResult res = scaling_experiment(K, o.eps_list, cfg, rng, o.samples ? o.samples : 100000);
    Json rows = Json::array();
    bool ok = true;
    for (const auto& r : res.rows) {
        rows.push_back(Json{{"eps", r.eps}, {"size", r.size}, {"candidates", r.candidates}, {"report", report_to_json(r.report)}});
        if (!r.report.pass()) {
            ok = false;
            for (const auto& f : r.report.failed) err << "verification failed at eps " << r.eps << ": " << f << "\n";
        }
    }
    Json j{{"rows", std::move(rows)}};
    j["slope"] = res.slope ? Json(*res.slope) : Json(nullptr);
    emit(j, o.out, out);
    return ok ? 0 : 1;
}

int cmd_lemmas(const Options& o, std::ostream& out) {
    LemmaOptions lo;
    lo.trials = o.trials;
    lo.seed = o.seed;
    lo.threads = o.threads;
    const auto rows = run_lemmas(o.suite, lo);
    bool ok = true;
    for (const auto& r : rows)
        if (r.method != "measured") ok = ok && r.pass();
    if (o.json) {
        Json a = Json::array();
        for (const auto& r : rows)
            a.push_back(Json{{"suite", r.suite},
                             {"property", r.name},
                             {"method", r.method},
                             {"trials", r.trials},
                             {"violations", r.violations},
                             {"pass", r.method == "measured" || r.pass()},
                             {"note", r.note}});
        emit(Json{{"pass", ok}, {"properties", std::move(a)}}, o.out, out);
        return ok ? 0 : 1;
    }
    char line[512];
    std::snprintf(line, sizeof line, "%-9s %-34s %-14s %8s %5s  %-6s %s\n", "suite", "property", "method", "trials",
                  "viol", "status", "note");
    out << line;
    for (const auto& r : rows) {
        const char* status = r.method == "measured" ? "report" : (r.pass() ? "PASS" : "FAIL");
        std::snprintf(line, sizeof line, "%-9s %-34s %-14s %8ld %5ld  %-6s %s\n", r.suite.c_str(), r.name.c_str(),
                      r.method.c_str(), r.trials, r.violations, status, r.note.c_str());
        out << line;
    }
    out << (ok ? "all properties pass\n" : "some properties FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Macbeath-region coverings, polytope approximation and approximate CVP"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--seed", o.seed, "seed for every random draw");
    app.add_option("--threads", o.threads, "worker threads (lemmas)")->check(CLI::PositiveNumber);

    auto* cover = app.add_subcommand("cover", "build a (c, eps)-covering");
    cover->add_option("--body", o.body)->required();
    cover->add_option("--eps", o.eps)->required();
    cover->add_option("--c", o.c);
    cover->add_option("--out", o.out);
    cover->add_option("--svg", o.svg);

    auto* verify = app.add_subcommand("verify", "check coverage, buffering and packing of a covering");
    verify->add_option("--cover", o.cover)->required();
    verify->add_option("--samples", o.samples);
    verify->add_option("--out", o.out);

    auto* approx = app.add_subcommand("approx", "Banach-Mazur polytope with a certified sandwich");
    approx->add_option("--body", o.body)->required();
    approx->add_option("--eps", o.eps)->required();
    approx->add_option("--samples", o.samples);
    approx->add_option("--out", o.out);
    approx->add_option("--svg", o.svg);

    auto* cvp = app.add_subcommand("cvp", "(1 + eps)-approximate closest vector");
    cvp->add_option("--instance", o.instance)->required();
    cvp->add_flag("--exact", o.exact, "also report the exact answer");
    cvp->add_option("--out", o.out);

    auto* ip = app.add_subcommand("ip", "approximate integer programming feasibility");
    ip->add_option("--body", o.body)->required();
    ip->add_option("--basis", o.basis)->required();
    ip->add_option("--eps", o.eps)->required();
    ip->add_option("--shift", o.shift, "translation of the body, comma separated")->delimiter(',');
    ip->add_option("--out", o.out);

    auto* scale = app.add_subcommand("scale", "covering size against eps");
    scale->add_option("--body", o.body)->required();
    scale->add_option("--eps-list", o.eps_list)->required()->delimiter(',');
    scale->add_option("--c", o.c);
    scale->add_option("--samples", o.samples);
    scale->add_option("--out", o.out);

    auto* lemmas = app.add_subcommand("lemmas", "run the property suites");
    lemmas->add_option("--suite", o.suite)->check(CLI::IsMember({"all", "caps", "macbeath", "mahler"}));
    lemmas->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    lemmas->add_flag("--json", o.json);
    lemmas->add_option("--out", o.out);

    std::vector<std::string> argv_store{"mcover"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cover) return cmd_cover(o, out);
        if (*verify) return cmd_verify(o, out, err);
        if (*approx) return cmd_approx(o, out, err);
        if (*cvp) return cmd_cvp(o, out);
        if (*ip) return cmd_ip(o, out);
        if (*scale) return cmd_scale(o, out, err);
        if (*lemmas) return cmd_lemmas(o, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "verification failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace mcover
