#include "mcover/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mcover/lp.hpp"

namespace mcover {

namespace {

struct Facet {
    std::vector<int> v;
    Vec n;
    double off = 0;
    bool alive = true;
};

Vec hyperplane_normal(const Mat& P, const std::vector<int>& v) {
    const int d = static_cast<int>(P.rows());
    if (d == 2) {
        Vec e = P.col(v[1]) - P.col(v[0]);
        Vec n(2);
        n << -e(1), e(0);
        return n.normalized();
    }
    if (d == 3) {
        Eigen::Vector3d a = P.col(v[1]) - P.col(v[0]);
        Eigen::Vector3d b = P.col(v[2]) - P.col(v[0]);
        Eigen::Vector3d n = a.cross(b);
        return Vec(n.normalized());
    }
    Mat M(d - 1, d);
    for (int i = 1; i < d; ++i) M.row(i - 1) = (P.col(v[i]) - P.col(v[0])).transpose();
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    return svd.matrixV().col(d - 1);
}

double factorial(int d) {
    double f = 1;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

Hull hull_1d(const Mat& P) {
    Hull h;
    h.dim = 1;
    Eigen::Index lo = 0, hi = 0;
    P.row(0).minCoeff(&lo);
    P.row(0).maxCoeff(&hi);
    h.vertices = {static_cast<int>(std::min(lo, hi)), static_cast<int>(std::max(lo, hi))};
    if (lo == hi) h.vertices.resize(1);
    h.normals.resize(2, 1);
    h.normals << -1, 1;
    h.offsets.resize(2);
    h.offsets << -P(0, lo), P(0, hi);
    h.volume = P(0, hi) - P(0, lo);
    return h;
}

}  // namespace

Hull convex_hull(const Mat& P) {
    const int d = static_cast<int>(P.rows());
    const int k = static_cast<int>(P.cols());
    if (d < 1 || k < 1) throw InputError("convex_hull: empty input");
    if (d == 1) return hull_1d(P);
    if (k < d + 1) throw InputError("convex_hull: not enough points for a full-dimensional hull");

    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    const double tol = 1e-11 * scale;

    // initial simplex by greedy farthest-from-span selection
    std::vector<int> simplex;
    Eigen::Index first = 0;
    P.row(0).minCoeff(&first);
    simplex.push_back(static_cast<int>(first));
    Mat Q(d, 0);
    for (int step = 0; step < d; ++step) {
        double best = -1;
        int arg = -1;
        Vec bestr;
        for (int j = 0; j < k; ++j) {
            Vec r = P.col(j) - P.col(simplex[0]);
            if (Q.cols() > 0) r -= Q * (Q.transpose() * r);
            const double nr = r.norm();
            if (nr > best) {
                best = nr;
                arg = j;
                bestr = r;
            }
        }
        if (best <= 1e-9 * scale) throw InputError("convex_hull: points are not full-dimensional");
        simplex.push_back(arg);
        Q.conservativeResize(d, Q.cols() + 1);
        Q.col(Q.cols() - 1) = bestr / best;
    }
    Vec c = Vec::Zero(d);
    for (int i : simplex) c += P.col(i);
    c /= (d + 1);

    std::vector<Facet> facets;
    auto make = [&](std::vector<int> v) {
        Facet f;
        f.n = hyperplane_normal(P, v);
        f.off = f.n.dot(P.col(v[0]));
        if (f.n.dot(c) > f.off) {
            f.n = -f.n;
            f.off = -f.off;
        }
        f.v = std::move(v);
        facets.push_back(std::move(f));
    };
    for (int skip = 0; skip <= d; ++skip) {
        std::vector<int> v;
        for (int i = 0; i <= d; ++i)
            if (i != skip) v.push_back(simplex[i]);
        make(v);
    }

    std::vector<char> used(k, 0);
    for (int i : simplex) used[i] = 1;
    size_t dead = 0;
    for (int j = 0; j < k; ++j) {
        if (used[j]) continue;
        const auto p = P.col(j);
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(facets.size()); ++f)
            if (facets[f].alive && facets[f].n.dot(p) - facets[f].off > tol) visible.push_back(f);
        if (visible.empty()) continue;
        std::map<std::vector<int>, int> ridges;
        for (int f : visible) {
            std::vector<int> s = facets[f].v;
            std::sort(s.begin(), s.end());
            for (int skip = 0; skip < d; ++skip) {
                std::vector<int> r;
                r.reserve(d - 1);
                for (int i = 0; i < d; ++i)
                    if (i != skip) r.push_back(s[i]);
                ++ridges[r];
            }
            facets[f].alive = false;
        }
        for (auto& [r, cnt] : ridges)
            if (cnt == 1) {
                std::vector<int> v = r;
                v.push_back(j);
                make(v);
            }
        dead += visible.size();
        if (dead > 1024 && 2 * dead > facets.size()) {
            std::erase_if(facets, [](const Facet& f) { return !f.alive; });
            dead = 0;
        }
    }
    std::erase_if(facets, [](const Facet& f) { return !f.alive; });

    Hull h;
    h.dim = d;
    const double df = factorial(d);
    for (const Facet& f : facets) {
        Mat M(d, d);
        for (int i = 0; i < d; ++i) M.col(i) = P.col(f.v[i]) - c;
        h.volume += std::abs(M.determinant()) / df;
    }

    // merge coplanar simplices into facets
    std::vector<int> order(facets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int i = 0; i < d; ++i)
            if (facets[a].n(i) != facets[b].n(i)) return facets[a].n(i) < facets[b].n(i);
        return facets[a].off < facets[b].off;
    });
    std::vector<int> group(facets.size(), -1);
    std::vector<Vec> gn;
    std::vector<double> goff;
    const double mtol = 1e-9;
    for (size_t a = 0; a < order.size(); ++a) {
        const int fa = order[a];
        if (group[fa] >= 0) continue;
        group[fa] = static_cast<int>(gn.size());
        gn.push_back(facets[fa].n);
        goff.push_back(facets[fa].off);
        for (size_t b = a + 1; b < order.size(); ++b) {
            const int fb = order[b];
            if (facets[fb].n(0) - facets[fa].n(0) > mtol) break;
            if (group[fb] >= 0) continue;
            if ((facets[fb].n - facets[fa].n).norm() <= mtol &&
                std::abs(facets[fb].off - facets[fa].off) <= mtol * scale)
                group[fb] = group[fa];
        }
    }
    h.normals.resize(static_cast<Eigen::Index>(gn.size()), d);
    h.offsets.resize(static_cast<Eigen::Index>(gn.size()));
    for (size_t g = 0; g < gn.size(); ++g) {
        h.normals.row(static_cast<Eigen::Index>(g)) = gn[g].transpose();
        h.offsets(static_cast<Eigen::Index>(g)) = goff[g];
    }

    // a candidate is extreme when the normals of its incident facets span R^d
    std::map<int, std::vector<int>> incident;
    for (size_t f = 0; f < facets.size(); ++f)
        for (int v : facets[f].v) incident[v].push_back(group[f]);
    for (auto& [v, gs] : incident) {
        std::sort(gs.begin(), gs.end());
        gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
        if (static_cast<int>(gs.size()) < d) continue;
        Mat N(static_cast<Eigen::Index>(gs.size()), d);
        for (size_t i = 0; i < gs.size(); ++i) N.row(static_cast<Eigen::Index>(i)) = gn[gs[i]].transpose();
        Eigen::JacobiSVD<Mat> svd(N);
        if (svd.singularValues()(d - 1) > 1e-7) h.vertices.push_back(v);
    }
    return h;
}

Mat halfspace_vertices(const Mat& A, const Vec& b) {
    const int d = static_cast<int>(A.cols());
    ChebyshevResult ch = chebyshev_center(A, b);
    const double scale = std::max(1.0, ch.center.cwiseAbs().maxCoeff());
    if (!(ch.radius > 1e-12 * scale)) throw InputError("halfspace_vertices: system has empty interior");
    const Vec& p = ch.center;
    Mat dual(d, A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        const double s = b(i) - A.row(i).dot(p);
        dual.col(i) = A.row(i).transpose() / s;
    }
    Hull h = convex_hull(dual);
    Mat V(d, h.offsets.size());
    for (int j = 0; j < h.offsets.size(); ++j) {
        if (h.offsets(j) <= 1e-12) throw InputError("halfspace_vertices: system is unbounded");
        V.col(j) = p + h.normals.row(j).transpose() / h.offsets(j);
    }
    return V;
}

double halfspace_volume(const Mat& A, const Vec& b) {
    ChebyshevResult ch = chebyshev_center(A, b);
    const double scale = std::max(1.0, ch.center.cwiseAbs().maxCoeff());
    if (!(ch.radius > 1e-10 * scale)) return 0.0;
    Mat V = halfspace_vertices(A, b);
    if (V.cols() < A.cols() + 1) return 0.0;
    return convex_hull(V).volume;
}

}  // namespace mcover
