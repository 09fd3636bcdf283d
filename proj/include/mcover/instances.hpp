#pragma once

#include <string>

#include "mcover/body.hpp"

namespace mcover {

// m random unit normals with offsets in [0.5, 1.5]; redrawn until bounded
ConvexBody random_hpolytope(int n, int m, Rng& rng);
// eigenvalues of the shape in [0.25, 1] along a random rotation
ConvexBody random_ellipsoid(int n, Rng& rng, const Vec& center);
ConvexBody random_ellipsoid(int n, Rng& rng);
// integer entries in [-3, 3] with |det| >= 1
Mat random_basis(int n, Rng& rng);

// "square", "diamond", "hpoly" or "ellipse"
ConvexBody norm_family(const std::string& name, int n, Rng& rng);

}  // namespace mcover
