#include "mcover/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace mcover {

namespace {

// dense two-phase simplex in the KACTL layout; Bland-style ties on basis index
class Simplex {
public:
    Simplex(const Mat& A, const Vec& b, const Vec& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), N_(n_ + 1), B_(m_),
          D_(m_ + 2, n_ + 2) {
        D_.setZero();
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) D_(i, j) = A(i, j);
            B_[i] = n_ + i;
            D_(i, n_) = -1;
            D_(i, n_ + 1) = b(i);
        }
        for (int j = 0; j < n_; ++j) {
            N_[j] = j;
            D_(m_, j) = -c(j);
        }
        N_[n_] = -1;
        D_(m_ + 1, n_) = 1;
    }

    LpStatus solve(double& value, Vec& x) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (D_(i, n_ + 1) < D_(r, n_ + 1)) r = i;
        if (m_ > 0 && D_(r, n_ + 1) < -kEps) {
            pivot(r, n_);
            if (!simplex(2) || D_(m_ + 1, n_ + 1) < -kEps) return LpStatus::Infeasible;
            for (int i = 0; i < m_; ++i)
                if (B_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (s == -1 || less(D_(i, j), N_[j], D_(i, s), N_[s])) s = j;
                    pivot(i, s);
                }
        }
        bool ok = simplex(1);
        x = Vec::Zero(n_);
        for (int i = 0; i < m_; ++i)
            if (B_[i] < n_) x(B_[i]) = D_(i, n_ + 1);
        value = D_(m_, n_ + 1);
        return ok ? LpStatus::Optimal : LpStatus::Unbounded;
    }

private:
    static constexpr double kEps = 1e-11;

    static bool less(double a, int ia, double b, int ib) { return a < b || (a == b && ia < ib); }

    void pivot(int r, int s) {
        const double inv = 1.0 / D_(r, s);
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r && std::abs(D_(i, s)) > kEps) {
                const double inv2 = D_(i, s) * inv;
                for (int j = 0; j < n_ + 2; ++j) D_(i, j) -= D_(r, j) * inv2;
                D_(i, s) = D_(r, s) * inv2;
            }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_(r, j) *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) D_(i, s) *= -inv;
        D_(r, s) = inv;
        std::swap(B_[r], N_[s]);
    }

    bool simplex(int phase) {
        const int x = m_ + phase - 1;
        for (int guard = 0; guard < 50000; ++guard) {
            int s = -1;
            for (int j = 0; j <= n_; ++j)
                if (N_[j] != -phase && (s == -1 || less(D_(x, j), N_[j], D_(x, s), N_[s]))) s = j;
            if (D_(x, s) >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_(i, s) <= kEps) continue;
                if (r == -1) {
                    r = i;
                    continue;
                }
                const double lhs = D_(i, n_ + 1) / D_(i, s), rhs = D_(r, n_ + 1) / D_(r, s);
                if (lhs < rhs || (lhs == rhs && B_[i] < B_[r])) r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
        return true;
    }

    int m_, n_;
    std::vector<int> N_, B_;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> D_;
};

}  // namespace

LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c) {
    const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != n) throw InputError("lp_maximize: dimension mismatch");
    // free variables split as x = u - v; rows scaled to unit norm for conditioning
    Mat As(m, 2 * n);
    Vec bs(m);
    for (int i = 0; i < m; ++i) {
        double s = A.row(i).norm();
        if (s == 0.0) s = 1.0;
        As.row(i).head(n) = A.row(i) / s;
        As.row(i).tail(n) = -A.row(i) / s;
        bs(i) = b(i) / s;
    }
    Vec cs(2 * n);
    cs.head(n) = c;
    cs.tail(n) = -c;
    Simplex sx(As, bs, cs);
    LpResult out;
    Vec y;
    out.status = sx.solve(out.value, y);
    if (out.status == LpStatus::Optimal) {
        out.x = y.head(n) - y.tail(n);
        out.value = c.dot(out.x);
    } else if (out.status == LpStatus::Unbounded) {
        out.value = std::numeric_limits<double>::infinity();
    } else {
        out.value = -std::numeric_limits<double>::infinity();
    }
    return out;
}

ChebyshevResult chebyshev_center(const Mat& A, const Vec& b, double cap) {
    const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
    Mat M(m + 1, n + 1);
    Vec rhs(m + 1);
    for (int i = 0; i < m; ++i) {
        const double s = A.row(i).norm();
        M.row(i).head(n) = A.row(i);
        M(i, n) = s;
        rhs(i) = b(i);
    }
    M.row(m).setZero();
    M(m, n) = 1;
    rhs(m) = cap;
    Vec obj = Vec::Zero(n + 1);
    obj(n) = 1;
    LpResult r = lp_maximize(M, rhs, obj);
    ChebyshevResult out;
    if (r.status != LpStatus::Optimal) {
        out.radius = -std::numeric_limits<double>::infinity();
        out.center = Vec::Zero(n);
        return out;
    }
    out.radius = r.x(n);
    out.center = r.x.head(n);
    return out;
}

}  // namespace mcover
