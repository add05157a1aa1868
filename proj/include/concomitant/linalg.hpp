#pragma once

// Small dense helpers on top of Eigen. Everything here is O(n^3) or O(n^6) on
// vectorized n x n matrices; n stays at desk scale.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>

namespace concomitant {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

[[nodiscard]] inline RealVector singular_values(const Matrix& a) {
    if (a.size() == 0) return RealVector{};
    return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

[[nodiscard]] inline RealVector singular_values(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return RealVector{};
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

/// Count of singular values above rel_tol * largest.
[[nodiscard]] inline int rank_from_singular_values(const RealVector& sv, double rel_tol) {
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = rel_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++r;
    }
    return r;
}

template <class M>
[[nodiscard]] int numerical_rank(const M& a, double rel_tol) {
    return rank_from_singular_values(singular_values(a), rel_tol);
}

[[nodiscard]] inline double condition_number(const Matrix& s) {
    const RealVector sv = singular_values(s);
    if (sv.size() == 0) return 1.0;
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

/// Orthonormal basis (as columns) of the column span of a, dropping directions
/// below rel_tol times the largest singular value.
[[nodiscard]] inline Matrix orthonormal_span(const Matrix& a, double rel_tol) {
    if (a.cols() == 0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
    return svd.matrixU().leftCols(r);
}

/// Column-major vectorization.
[[nodiscard]] inline Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

[[nodiscard]] inline Matrix unvec(const Vector& v, Eigen::Index rows) {
    return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

[[nodiscard]] inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

[[nodiscard]] inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Spectral norm of a positive semidefinite (Hermitian) matrix.
[[nodiscard]] inline double hermitian_max_eigenvalue(const Matrix& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace linalg
}  // namespace concomitant
