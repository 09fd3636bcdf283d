#include "mcover/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mcover {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("json: missing field \"") + key + "\"");
    return j.at(key);
}

Json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

}  // namespace

double real_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return INFINITY;
        if (s == "-inf" || s == "-infinity") return -INFINITY;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InputError("json: not a real: " + s);
        }
        if (used != s.size()) throw InputError("json: not a real: " + s);
        return v;
    }
    throw InputError("json: expected a real");
}

Json vec_to_json(const Vec& v) {
    Json a = Json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
    return a;
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("json: expected an array of reals");
    Vec v(static_cast<long>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = real_from_json(j[i]);
    return v;
}

Json mat_to_json(const Mat& M) {
    Json a = Json::array();
    for (long i = 0; i < M.rows(); ++i) a.push_back(vec_to_json(M.row(i).transpose()));
    return a;
}

Mat mat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("json: expected a non-empty list of rows");
    const Vec first = vec_from_json(j[0]);
    Mat M(static_cast<long>(j.size()), first.size());
    for (size_t i = 0; i < j.size(); ++i) {
        const Vec r = vec_from_json(j[i]);
        if (r.size() != first.size()) throw InputError("json: ragged matrix");
        M.row(static_cast<long>(i)) = r.transpose();
    }
    return M;
}

Json body_to_json(const ConvexBody& K) {
    Json j = std::visit(
        overloaded{[](const HPolytope& h) { return Json{{"type", "hpoly"}, {"A", mat_to_json(h.A)}, {"b", vec_to_json(h.b)}}; },
                   [](const VPolytope& v) {
                       return Json{{"type", "vpoly"}, {"vertices", mat_to_json(v.vertices.transpose())}};
                   },
                   [](const Ellipsoid& e) {
                       return Json{{"type", "ellipsoid"}, {"center", vec_to_json(e.center)}, {"shape", mat_to_json(e.shape)}};
                   },
                   [](const LpBall& b) {
                       return Json{{"type", "lpball"}, {"n", b.dim}, {"p", real_to_json(b.p)}, {"radius", real_to_json(b.radius)}};
                   },
                   [](const AffineImage& a) {
                       return Json{{"type", "affine"},
                                   {"inner", body_to_json(*a.inner)},
                                   {"map", mat_to_json(a.map)},
                                   {"shift", vec_to_json(a.shift)}};
                   },
                   [](const PolarBody& q) { return Json{{"type", "polar"}, {"primal", body_to_json(*q.primal)}}; }},
        K.representation());
    j["r"] = K.inner_radius();
    j["r_outer"] = K.outer_radius();
    return j;
}

ConvexBody body_from_json(const Json& j) {
    try {
        const std::string type = field(j, "type").get<std::string>();
        ConvexBody K = [&] {
            if (type == "hpoly") return ConvexBody::hpolytope(mat_from_json(field(j, "A")), vec_from_json(field(j, "b")));
            if (type == "vpoly") return ConvexBody::vpolytope(mat_from_json(field(j, "vertices")).transpose());
            if (type == "ellipsoid")
                return ConvexBody::ellipsoid(vec_from_json(field(j, "center")), mat_from_json(field(j, "shape")));
            if (type == "lpball")
                return ConvexBody::lp_ball(field(j, "n").get<int>(), real_from_json(field(j, "p")),
                                           j.contains("radius") ? real_from_json(j.at("radius")) : 1.0);
            if (type == "affine")
                return ConvexBody::affine(body_from_json(field(j, "inner")), mat_from_json(field(j, "map")),
                                          vec_from_json(field(j, "shift")));
            if (type == "polar") return ConvexBody::polar_of(body_from_json(field(j, "primal")));
            throw InputError("json: unknown body type " + type);
        }();
        if (j.contains("r") || j.contains("r_outer")) {
            const double r = j.contains("r") ? real_from_json(j.at("r")) : K.inner_radius();
            const double ro = j.contains("r_outer") ? real_from_json(j.at("r_outer")) : K.outer_radius();
            K = K.with_radii(r, ro);
        }
        return K;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("json: ") + e.what());
    }
}

Json covering_to_json(const Covering& cov) {
    Json els = Json::array();
    for (const auto& e : cov.elements)
        els.push_back(Json{{"center", vec_to_json(e.center)}, {"scale", e.scale}, {"layer", e.layer}});
    return Json{{"ambient", body_to_json(cov.ambient)},
                {"target", body_to_json(cov.target)},
                {"c", cov.c},
                {"eps", cov.eps},
                {"mnet_provenance", cov.mnet_provenance},
                {"elements", std::move(els)}};
}

Covering covering_from_json(const Json& j) {
    try {
        const ConvexBody ambient = body_from_json(field(j, "ambient"));
        const ConvexBody target = j.contains("target") ? body_from_json(j.at("target")) : ambient;
        Covering cov{ambient, target, real_from_json(field(j, "c")), real_from_json(field(j, "eps")), {},
                     j.value("mnet_provenance", false)};
        for (const auto& e : field(j, "elements")) {
            CoverElement el{vec_from_json(field(e, "center")), real_from_json(field(e, "scale")), e.value("layer", -1)};
            if (el.center.size() != ambient.dim()) throw InputError("json: element dimension mismatch");
            if (!(el.scale > 0)) throw InputError("json: element scale must be positive");
            cov.elements.push_back(std::move(el));
        }
        return cov;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("json: ") + e.what());
    }
}

Json report_to_json(const CoveringReport& rep) {
    Json hist = Json::object();
    for (const auto& [layer, count] : rep.layer_histogram) hist[std::to_string(layer)] = count;
    return Json{{"pass", rep.pass()},
                {"failed", rep.failed},
                {"samples", rep.samples},
                {"covered", rep.covered},
                {"coverage_rate", rep.coverage_rate},
                {"coverage_threshold", rep.coverage_threshold},
                {"coverage_pass", rep.coverage_pass},
                {"buffering_pass", rep.buffering_pass},
                {"buffering_method", rep.buffering_method},
                {"buffering_failures", rep.buffering_failures},
                {"packing_checked", rep.packing_checked},
                {"packing_pass", rep.packing_pass},
                {"packing_violations", rep.packing_violations},
                {"element_count", rep.element_count},
                {"layer_histogram", std::move(hist)}};
}

Json sandwich_to_json(const SandwichReport& rep) {
    Json j{{"pass", rep.pass()},
           {"outer_pass", rep.outer_pass},
           {"outer_margin", rep.outer_margin},
           {"inner_pass", rep.inner_pass},
           {"inner_margin", rep.inner_margin},
           {"inner_method", rep.inner_method},
           {"sampled_directions", rep.sampled_directions},
           {"vertices", rep.vertices},
           {"facets", rep.facets}};
    if (rep.witness) j["witness"] = vec_to_json(*rep.witness);
    return j;
}

Json lattice_to_json(const Lattice& L) { return Json{{"basis", mat_to_json(L.basis().transpose())}}; }

Lattice lattice_from_json(const Json& j) {
    const Mat rows = mat_from_json(field(j, "basis"));
    return Lattice(rows.transpose());
}

Json instance_to_json(const CvpInstance& inst) {
    return Json{{"basis", mat_to_json(inst.lattice.basis().transpose())},
                {"target", vec_to_json(inst.target)},
                {"norm", body_to_json(inst.norm)},
                {"eps", inst.eps}};
}

CvpInstance instance_from_json(const Json& j) {
    try {
        CvpInstance inst{lattice_from_json(j), vec_from_json(field(j, "target")), body_from_json(field(j, "norm")),
                         j.contains("eps") ? real_from_json(j.at("eps")) : 0.1};
        if (inst.target.size() != inst.lattice.dim() || inst.norm.dim() != inst.lattice.dim())
            throw InputError("json: instance dimension mismatch");
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("json: ") + e.what());
    }
}

namespace {

class Canvas {
public:
    explicit Canvas(double R) : R_(1.05 * R) {}
    void path(const std::vector<Vec>& pts, const char* style) {
        out_ << "<path d=\"";
        for (size_t i = 0; i < pts.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%.2f %.2f ", i ? "L" : "M", sx(pts[i](0)), sy(pts[i](1)));
            out_ << buf;
        }
        out_ << "Z\" " << style << "/>\n";
    }
    std::string finish() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n" +
               out_.str() + "</svg>\n";
    }

private:
    double sx(double x) const { return 500 + 500 * x / R_; }
    double sy(double y) const { return 500 - 500 * y / R_; }
    double R_;
    std::ostringstream out_;
};

std::vector<Vec> outline(const ConvexBody& K, int m) {
    std::vector<Vec> pts;
    for (int k = 0; k < m; ++k) {
        const double th = 2 * std::numbers::pi * k / m;
        Vec d(2);
        d << std::cos(th), std::sin(th);
        pts.push_back(boundary_ray(K, d));
    }
    return pts;
}

}  // namespace

std::string covering_svg(const Covering& cov) {
    if (cov.ambient.dim() != 2) throw UnsupportedError("covering_svg: n = 2 only");
    Canvas cv(cov.ambient.outer_radius());
    for (const auto& e : cov.elements) {
        const MacbeathRegion M{cov.ambient, e.center, e.scale};
        std::vector<Vec> pts;
        for (int k = 0; k < 48; ++k) {
            const double th = 2 * std::numbers::pi * k / 48;
            Vec d(2);
            d << std::cos(th), std::sin(th);
            pts.push_back(mac_boundary_point(M, d));
        }
        cv.path(pts, "fill=\"steelblue\" fill-opacity=\"0.15\" stroke=\"steelblue\" stroke-width=\"0.5\"");
    }
    cv.path(outline(cov.target, 512), "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    cv.path(outline(cov.ambient, 512), "fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"");
    return cv.finish();
}

std::string polytope_svg(const ConvexBody& K, const ConvexBody& P, double eps) {
    if (K.dim() != 2 || P.dim() != 2 || !P.polytope()) throw UnsupportedError("polytope_svg: 2-D polytope only");
    Canvas cv((1 + eps) * K.outer_radius());
    const Mat& V = P.polytope()->V;
    std::vector<Vec> pts;
    for (long j = 0; j < V.cols(); ++j) pts.push_back(V.col(j));
    std::sort(pts.begin(), pts.end(),
              [](const Vec& a, const Vec& b) { return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0)); });
    cv.path(pts, "fill=\"orange\" fill-opacity=\"0.2\" stroke=\"orange\"");
    cv.path(outline(K, 512), "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    cv.path(outline(scaled(K, 1 + eps), 512), "fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"");
    return cv.finish();
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mcover
