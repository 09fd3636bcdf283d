#pragma once

#include <vector>

#include "mcover/types.hpp"

namespace mcover {

struct Box {
    Vec lo, hi;
    bool overlaps(const Box& o) const {
        return (lo.array() <= o.hi.array()).all() && (o.lo.array() <= hi.array()).all();
    }
    bool contains(const Vec& x) const { return (lo.array() <= x.array()).all() && (x.array() <= hi.array()).all(); }
};

// uniform grid over a fixed domain; items are boxes, queries return ids whose cells meet a box
class GridIndex {
public:
    GridIndex(const Box& domain, int cells_per_axis);
    void insert(int id, const Box& b);
    // ids are unique and ascending
    std::vector<int> query(const Box& b) const;
    // ids registered in the cell holding x
    const std::vector<int>& at(const Vec& x) const;

private:
    void range(const Box& b, std::vector<int>& lo, std::vector<int>& hi) const;
    int cell_of(double v, int axis) const;
    Box domain_;
    int g_;
    int n_;
    std::vector<std::vector<int>> cells_;
    mutable std::vector<int> stamp_;
    mutable int epoch_ = 0;
};

}  // namespace mcover
