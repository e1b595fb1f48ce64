#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace imspe {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// tr(A B) as the sum of element-by-element products of A and B^T.
template <class DA, class DB>
typename DA::Scalar trace_of_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

// Closed-form inverse of a symmetric 3x3 matrix via cofactors.
inline Eigen::Matrix3d inverse_sym3(const Eigen::Matrix3d& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(0, 2), d = m(1, 1), e = m(1, 2), f = m(2, 2);
    const double c00 = d * f - e * e;
    const double c01 = c * e - b * f;
    const double c02 = b * e - c * d;
    const double c11 = a * f - c * c;
    const double c12 = b * c - a * e;
    const double c22 = a * d - b * b;
    const double det = a * c00 + b * c01 + c * c02;
    Eigen::Matrix3d inv;
    inv << c00, c01, c02, c01, c11, c12, c02, c12, c22;
    return inv / det;
}

// Solves L Y = M for the bordered matrix L = [[0, 1^T], [1, V]] through the
// Schur complement of a pivoted LDL^T factorization of the correlation block V.
template <class T>
class BorderedSolver {
public:
    explicit BorderedSolver(const Mat<T>& V) : ldlt_(V) {
        const Vec<T> ones = Vec<T>::Ones(V.rows());
        w_ = ldlt_.solve(ones);
        s_ = w_.sum();
    }

    bool ok() const {
        using std::abs;
        if (ldlt_.info() != Eigen::Success) return false;
        const auto d = ldlt_.vectorD();
        T lo = abs(d(0)), hi = abs(d(0));
        for (Eigen::Index i = 1; i < d.size(); ++i) {
            lo = (abs(d(i)) < lo) ? T(abs(d(i))) : lo;
            hi = (abs(d(i)) > hi) ? T(abs(d(i))) : hi;
        }
        return lo > 0 && lo > hi * T(64) * std::numeric_limits<T>::epsilon() && s_ > 0;
    }

    const Eigen::LDLT<Mat<T>>& ldlt() const { return ldlt_; }

    // M has n + 1 rows; row 0 is the border row.
    Mat<T> solve(const Mat<T>& M) const {
        const Eigen::Index n = w_.size();
        const Mat<T> Z = ldlt_.solve(M.bottomRows(n));
        Mat<T> Y(n + 1, M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            const T y0 = (Z.col(c).sum() - M(0, c)) / s_;
            Y(0, c) = y0;
            Y.col(c).tail(n) = Z.col(c) - w_ * y0;
        }
        return Y;
    }

private:
    Eigen::LDLT<Mat<T>> ldlt_;
    Vec<T> w_;
    T s_{};
};

}  // namespace imspe
