#include "mcover/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace mcover {

GridIndex::GridIndex(const Box& domain, int cells_per_axis)
    : domain_(domain), g_(std::max(1, cells_per_axis)), n_(static_cast<int>(domain.lo.size())) {
    long total = 1;
    for (int i = 0; i < n_; ++i) total *= g_;
    cells_.resize(static_cast<size_t>(total));
}

int GridIndex::cell_of(double v, int axis) const {
    const double span = domain_.hi(axis) - domain_.lo(axis);
    const int c = static_cast<int>(std::floor((v - domain_.lo(axis)) / span * g_));
    return std::clamp(c, 0, g_ - 1);
}

void GridIndex::range(const Box& b, std::vector<int>& lo, std::vector<int>& hi) const {
    lo.resize(n_);
    hi.resize(n_);
    for (int i = 0; i < n_; ++i) {
        lo[i] = cell_of(b.lo(i), i);
        hi[i] = cell_of(b.hi(i), i);
    }
}

void GridIndex::insert(int id, const Box& b) {
    std::vector<int> lo, hi;
    range(b, lo, hi);
    std::vector<int> cur = lo;
    for (;;) {
        long idx = 0;
        for (int i = n_ - 1; i >= 0; --i) idx = idx * g_ + cur[i];
        cells_[static_cast<size_t>(idx)].push_back(id);
        int k = 0;
        while (k < n_ && ++cur[k] > hi[k]) {
            cur[k] = lo[k];
            ++k;
        }
        if (k == n_) break;
    }
    if (static_cast<int>(stamp_.size()) <= id) stamp_.resize(static_cast<size_t>(id) + 1, 0);
}

std::vector<int> GridIndex::query(const Box& b) const {
    std::vector<int> lo, hi, out;
    range(b, lo, hi);
    ++epoch_;
    std::vector<int> cur = lo;
    for (;;) {
        long idx = 0;
        for (int i = n_ - 1; i >= 0; --i) idx = idx * g_ + cur[i];
        for (int id : cells_[static_cast<size_t>(idx)])
            if (stamp_[id] != epoch_) {
                stamp_[id] = epoch_;
                out.push_back(id);
            }
        int k = 0;
        while (k < n_ && ++cur[k] > hi[k]) {
            cur[k] = lo[k];
            ++k;
        }
        if (k == n_) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<int>& GridIndex::at(const Vec& x) const {
    long idx = 0;
    for (int i = n_ - 1; i >= 0; --i) idx = idx * g_ + cell_of(x(i), i);
    return cells_[static_cast<size_t>(idx)];
}

}  // namespace mcover
