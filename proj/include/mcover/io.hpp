#pragma once

#include <json.hpp>
#include <string>

#include "mcover/approx.hpp"
#include "mcover/lattice.hpp"

namespace mcover {

using Json = nlohmann::ordered_json;

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
// list of rows
Json mat_to_json(const Mat& M);
Mat mat_from_json(const Json& j);
// reals may also arrive as decimal strings
double real_from_json(const Json& j);

// {"type": "hpoly"|"vpoly"|"ellipsoid"|"lpball"|"affine"|"polar", fields..., "r", "r_outer"}
Json body_to_json(const ConvexBody& K);
ConvexBody body_from_json(const Json& j);

Json covering_to_json(const Covering& cov);
Covering covering_from_json(const Json& j);
Json report_to_json(const CoveringReport& rep);
Json sandwich_to_json(const SandwichReport& rep);

// basis vectors are listed one per entry
Json lattice_to_json(const Lattice& L);
Lattice lattice_from_json(const Json& j);
Json instance_to_json(const CvpInstance& inst);
CvpInstance instance_from_json(const Json& j);

// fixed 1000 x 1000 viewBox, n = 2 only: one closed path per element, then K and K_eps
std::string covering_svg(const Covering& cov);
std::string polytope_svg(const ConvexBody& K, const ConvexBody& P, double eps);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const Json& j);

}  // namespace mcover
