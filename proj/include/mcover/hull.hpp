#pragma once

#include <vector>

#include "mcover/types.hpp"

namespace mcover {

// Convex hull of the columns of `points` (d x k), d >= 1.
// Facets are merged across coplanar simplices; vertices are the extreme points only.
struct Hull {
    int dim = 0;
    std::vector<int> vertices;  // column indices into the input, ascending
    Mat normals;                // one unit outward normal per row
    Vec offsets;                // normals.row(j) . x <= offsets(j)
    double volume = 0.0;
};

Hull convex_hull(const Mat& points);

// vertices of {x : A x <= b}; the system must be bounded with nonempty interior
Mat halfspace_vertices(const Mat& A, const Vec& b);

// volume of a bounded H-system, 0 if it has no interior
double halfspace_volume(const Mat& A, const Vec& b);

}  // namespace mcover
