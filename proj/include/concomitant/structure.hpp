#pragma once

// Irreducibility and the reducible strata X_k (tuples with a common
// k-dimensional invariant subspace).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concomitant/linalg.hpp"
#include "concomitant/mattuple.hpp"
#include "concomitant/rng.hpp"

namespace concomitant {

inline constexpr double span_rank_tolerance = 1e-8;

namespace detail {

inline Matrix normalized_columns(Matrix m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double nj = m.col(j).norm();
        if (nj > 0.0) m.col(j) /= nj;
    }
    return m;
}

/// Smallest subspace containing the columns of start and closed under left
/// multiplication by every Z_i.
inline Matrix cyclic_span(const MatTuple& z, const Matrix& start) {
    Matrix basis = linalg::orthonormal_span(normalized_columns(start), span_rank_tolerance);
    const int n = z.n();
    for (int round = 0; round <= n; ++round) {
        Matrix cand(n, basis.cols() * (z.d() + 1));
        cand.leftCols(basis.cols()) = basis;
        for (int i = 0; i < z.d(); ++i) cand.middleCols((i + 1) * basis.cols(), basis.cols()) = z[i] * basis;
        Matrix next = linalg::orthonormal_span(normalized_columns(cand), span_rank_tolerance);
        if (next.cols() == basis.cols()) return basis;
        basis = std::move(next);
    }
    return basis;
}

/// max_i |(I - P) Z_i P| / (1 + |Z_i|) for the projection P onto span(basis).
inline double invariance_defect(const MatTuple& z, const Matrix& basis) {
    double m = 0.0;
    for (const auto& zi : z.matrices()) {
        const Matrix img = zi * basis;
        const Matrix off = img - basis * (basis.adjoint() * img);
        m = std::max(m, off.norm() / (1.0 + zi.norm()));
    }
    return m;
}

inline Matrix orthogonal_complement(const Matrix& basis) {
    const Eigen::Index n = basis.rows();
    Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(n - basis.cols());
}

}  // namespace detail

/// Dimension of the unital algebra generated by the Z_i (span of all words).
[[nodiscard]] inline int word_span_dimension(const MatTuple& z) {
    const int n = z.n();
    const int nn = n * n;
    Matrix basis = linalg::vec(Matrix::Identity(n, n)) / std::sqrt(static_cast<double>(n));
    for (int round = 0; round < nn; ++round) {
        Matrix cand(nn, basis.cols() * (z.d() + 1));
        cand.leftCols(basis.cols()) = basis;
        Eigen::Index col = basis.cols();
        for (Eigen::Index j = 0; j < basis.cols(); ++j) {
            const Matrix b = linalg::unvec(basis.col(j), n);
            for (const auto& zi : z.matrices()) cand.col(col++) = linalg::vec(b * zi);
        }
        Matrix next = linalg::orthonormal_span(detail::normalized_columns(cand), span_rank_tolerance);
        if (next.cols() == basis.cols()) break;
        basis = std::move(next);
    }
    return static_cast<int>(basis.cols());
}

/// True when the Z_i generate all of M_n(C).
[[nodiscard]] inline bool is_irreducible(const MatTuple& z) { return word_span_dimension(z) == z.n() * z.n(); }

/// Searches for a common proper invariant subspace. Candidates are cyclic
/// subspaces A v for v among the coordinate axes, eigenvectors of random
/// elements of the algebra A and random vectors; the same search on the
/// adjoint tuple yields co-invariant subspaces, whose complements are
/// invariant. Returns an orthonormal basis (columns) of the smallest subspace
/// found with defect at most tol.
[[nodiscard]] inline std::optional<Matrix> find_invariant_subspace(const MatTuple& z, double tol = 1e-8) {
    const int n = z.n();
    if (n < 2) return std::nullopt;
    CounterRng rng(0x1D5u);

    std::vector<Vector> starts;
    for (int i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
    auto add_eigenvectors = [&](const MatTuple& t) {
        for (int rep = 0; rep < 3; ++rep) {
            Matrix a = Matrix::Zero(n, n);
            for (int i = 0; i < t.d(); ++i) {
                a += rng.complex_normal() * t[i];
                for (int j = 0; j < t.d(); ++j) a += 0.5 * rng.complex_normal() * t[i] * t[j];
            }
            Eigen::ComplexEigenSolver<Matrix> es(a);
            if (es.info() != Eigen::Success) continue;
            for (int c = 0; c < n; ++c) starts.push_back(es.eigenvectors().col(c));
        }
        for (int rep = 0; rep < 2; ++rep) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
            starts.push_back(v);
        }
    };

    std::optional<Matrix> best;
    auto consider = [&](Matrix basis) {
        if (basis.cols() == 0 || basis.cols() >= n) return;
        if (detail::invariance_defect(z, basis) > tol) return;
        if (!best || basis.cols() < best->cols()) best = std::move(basis);
    };

    add_eigenvectors(z);
    for (const auto& v : starts) consider(detail::cyclic_span(z, v));

    const MatTuple adj = z.adjoint();
    starts.clear();
    for (int i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
    add_eigenvectors(adj);
    for (const auto& v : starts) {
        const Matrix co = detail::cyclic_span(adj, v);
        if (co.cols() == 0 || co.cols() >= n) continue;
        consider(detail::orthogonal_complement(co));
    }
    return best;
}

/// Random point of X_k: block upper triangular (blocks k, n-k), then conjugated.
[[nodiscard]] inline MatTuple sample_Xk(int d, int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n - 1) {
        throw std::invalid_argument("sample_Xk: need 1 <= k <= n-1, got k=" + std::to_string(k));
    }
    return random_tuple(d, n, Ensemble::reducible(k), seed);
}

[[nodiscard]] inline int xk_expected_dimension(int d, int n, int k) { return d * n * n - (d - 1) * k * (n - k); }

namespace detail {

// Parametrization of X_k:
//   (B_1..B_d block upper triangular, Y in C^{(n-k) x k}, E in C^{n x n})
//     -> A_i = S g B_i g^{-1} S^{-1},  g = [[I,0],[Y,I]],  S = S0 (I + E).
// It over-parametrizes X_k (S0(I+E) ranges over an open set of GL_n), so the
// Jacobian rank at a generic point is dim X_k.
struct XkChart {
    int d, n, k;
    Matrix s0;

    [[nodiscard]] int block_params() const { return n * n - k * (n - k); }
    [[nodiscard]] int param_count() const { return d * block_params() + (n - k) * k + n * n; }

    [[nodiscard]] Eigen::VectorXd image(const Vector& x) const {
        Eigen::Index pos = 0;
        std::vector<Matrix> blocks;
        for (int i = 0; i < d; ++i) {
            Matrix b = Matrix::Zero(n, n);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    if (r >= k && c < k) continue;
                    b(r, c) = x(pos++);
                }
            }
            blocks.push_back(std::move(b));
        }
        Matrix g = Matrix::Identity(n, n);
        Matrix g_inv = Matrix::Identity(n, n);
        for (int r = 0; r < n - k; ++r) {
            for (int c = 0; c < k; ++c) {
                g(k + r, c) = x(pos);
                g_inv(k + r, c) = -x(pos);
                ++pos;
            }
        }
        Matrix e(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) e(r, c) = x(pos++);
        }
        const Matrix s = s0 * (Matrix::Identity(n, n) + e);
        const Matrix left = s * g;
        const Matrix right = g_inv * Eigen::PartialPivLU<Matrix>(s).inverse();
        Eigen::VectorXd out(2 * d * n * n);
        Eigen::Index o = 0;
        for (const auto& b : blocks) {
            const Matrix full = left * b * right;
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    out(o++) = full(r, c).real();
                    out(o++) = full(r, c).imag();
                }
            }
        }
        return out;
    }
};

}  // namespace detail

/// Numerical complex dimension of X_k at a random smooth point, from the rank
/// of a central finite-difference Jacobian of a parametrization. Ranks whose
/// singular-value gap is not clean trigger a resample (up to five retries).
[[nodiscard]] inline int xk_dimension_estimate(int d, int n, int k, std::uint64_t seed, double tol = 1e-7) {
    if (d < 1 || n < 2 || k < 1 || k > n - 1) {
        throw std::invalid_argument("xk_dimension_estimate: need d >= 1 and 1 <= k <= n-1");
    }
    constexpr double step = 1e-5;
    constexpr double min_gap = 1e3;
    CounterRng rng(seed);
    for (int attempt = 0; attempt < 6; ++attempt) {
        detail::XkChart chart{d, n, k, random_invertible(n, rng)};
        const int p = chart.param_count();
        Vector x(p);
        for (int i = 0; i < p; ++i) x(i) = rng.complex_normal();
        // E starts at zero so that S = S0.
        for (int i = p - n * n; i < p; ++i) x(i) = 0.0;

        Eigen::MatrixXd jac(2 * d * n * n, 2 * p);
        for (int j = 0; j < p; ++j) {
            for (int part = 0; part < 2; ++part) {
                const Complex h = part == 0 ? Complex{step, 0.0} : Complex{0.0, step};
                Vector xp = x;
                Vector xm = x;
                xp(j) += h;
                xm(j) -= h;
                jac.col(2 * j + part) = (chart.image(xp) - chart.image(xm)) / (2.0 * step);
            }
        }
        const RealVector sv = linalg::singular_values(jac);
        const int real_rank = linalg::rank_from_singular_values(sv, tol);
        if (real_rank % 2 != 0) continue;
        if (real_rank < sv.size() && sv(real_rank) > 0.0 && sv(real_rank - 1) / sv(real_rank) < min_gap) continue;
        return real_rank / 2;
    }
    throw std::runtime_error("xk_dimension_estimate: no sample point with a clean rank gap");
}

}  // namespace concomitant
