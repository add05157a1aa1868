#pragma once

// Invariant coordinates of the quotient M_n(C)^d // GL_n: traces of words up
// to length 2^n - 1, one per necklace class.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concomitant/linalg.hpp"
#include "concomitant/mattuple.hpp"
#include "concomitant/ncpoly.hpp"

namespace concomitant {

struct GeneratorList {
    int d = 0;
    int n = 0;
    std::vector<Word> cycles;     // canonical cycles, (length, lex) order
    std::vector<TracePoly> gens;  // tr(cycle) for each entry of cycles

    [[nodiscard]] std::size_t size() const noexcept { return cycles.size(); }
};

struct InvariantCoords {
    std::vector<Complex> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

    /// Largest entrywise |a_i - b_i| / (1 + |a_i|).
    [[nodiscard]] double relative_distance(const InvariantCoords& other) const {
        if (other.values.size() != values.size()) throw std::invalid_argument("InvariantCoords: length mismatch");
        double m = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            m = std::max(m, std::abs(values[i] - other.values[i]) / (1.0 + std::abs(values[i])));
        }
        return m;
    }
};

/// Number of necklaces of length len over an alphabet of size d.
[[nodiscard]] inline double necklace_count(int d, int len) {
    auto phi = [](int m) {
        int result = m;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                while (m % p == 0) m /= p;
                result -= result / p;
            }
        }
        if (m > 1) result -= result / m;
        return result;
    };
    double total = 0.0;
    for (int e = 1; e <= len; ++e) {
        if (len % e == 0) total += phi(e) * std::pow(static_cast<double>(d), len / e);
    }
    return total / len;
}

namespace detail {

// Fredricksen-Kessler-Maiorana: necklaces of length len over {1..d} in lex order.
inline void necklaces(int d, int len, std::vector<Word>& out) {
    std::vector<int> a(static_cast<std::size_t>(len) + 1, 0);
    auto gen = [&](auto&& self, int t, int p) -> void {
        if (t > len) {
            if (len % p == 0) {
                Word w;
                w.letters.reserve(static_cast<std::size_t>(len));
                for (int i = 1; i <= len; ++i) w.letters.push_back(static_cast<Letter>(a[i] + 1));
                out.push_back(std::move(w));
            }
            return;
        }
        a[t] = a[t - p];
        self(self, t + 1, p);
        for (int j = a[t - p] + 1; j < d; ++j) {
            a[t] = j;
            self(self, t + 1, t);
        }
    };
    gen(gen, 1, 1);
}

}  // namespace detail

inline constexpr double max_generator_count = 2.0e6;

/// One tr(w) per cyclic class of nonempty words of length <= 2^n - 1.
[[nodiscard]] inline GeneratorList enumerate_trace_generators(int d, int n) {
    if (d < 1 || n < 1) throw std::invalid_argument("enumerate_trace_generators: d and n must be at least 1");
    if (n > 6) throw std::length_error("enumerate_trace_generators: n too large (word bound 2^n - 1)");
    const int max_len = (1 << n) - 1;
    double expected = 0.0;
    for (int len = 1; len <= max_len; ++len) expected += necklace_count(d, len);
    if (expected > max_generator_count) {
        throw std::length_error("enumerate_trace_generators: " + std::to_string(expected) + " generators is too many");
    }
    GeneratorList g;
    g.d = d;
    g.n = n;
    for (int len = 1; len <= max_len; ++len) detail::necklaces(d, len, g.cycles);
    g.gens.reserve(g.cycles.size());
    for (const auto& w : g.cycles) g.gens.push_back(TracePoly::term(d, Monomial{{TraceFactor::trace(w)}, {}}, 1.0));
    return g;
}

namespace detail {

inline void check_generator_shape(const MatTuple& z, const GeneratorList& g) {
    if (z.d() != g.d || z.n() != g.n) {
        throw std::invalid_argument("generator list is for (d,n) = (" + std::to_string(g.d) + "," +
                                    std::to_string(g.n) + "), tuple is (" + std::to_string(z.d()) + "," +
                                    std::to_string(z.n()) + ")");
    }
}

}  // namespace detail

/// Values of the generators at z: the point pi_0(z) of the quotient.
[[nodiscard]] inline InvariantCoords quotient_coords(const MatTuple& z, const GeneratorList& g) {
    detail::check_generator_shape(z, g);
    detail::WordCache cache(z);
    InvariantCoords out;
    out.values.reserve(g.size());
    for (const auto& w : g.cycles) out.values.push_back(cache.trace_of(w));
    return out;
}

/// (tr Z1, tr Z2, det Z1, det Z2, tr Z1 Z2): the chart Q(2,2) = C^5.
[[nodiscard]] inline std::array<Complex, 5> coords22(const MatTuple& z) {
    if (z.d() != 2 || z.n() != 2) throw std::invalid_argument("coords22: needs d = n = 2");
    return {z[0].trace(), z[1].trace(), z[0].determinant(), z[1].determinant(), (z[0] * z[1]).trace()};
}

/// The chart components as TracePolys, det written through traces.
[[nodiscard]] inline std::array<TracePoly, 5> coords22_polys() {
    const TracePoly x1 = TracePoly::generator(2, 1);
    const TracePoly x2 = TracePoly::generator(2, 2);
    auto det = [](const TracePoly& x) { return Complex{0.5} * (trace(x) * trace(x) - trace(x * x)); };
    return {trace(x1), trace(x2), det(x1), det(x2), trace(x1 * x2)};
}

// ---------------------------------------------------------------------------
// Orbit transport

struct TransportResult {
    std::optional<Matrix> conjugator;
    int null_dimension = 0;
    double residual = 0.0;
};

inline constexpr double default_rank_tolerance = 1e-8;

/// Solves Z_i S = S W_i for all i. When the solution space is a line spanned by
/// an invertible S, returns S (unit Frobenius norm, first significant entry
/// real positive) so that conjugate(z, S) = w.
[[nodiscard]] inline TransportResult transport_analysis(const MatTuple& z, const MatTuple& w, double tol) {
    z.check_same_shape(w);
    const int n = z.n();
    const int nn = n * n;
    const Matrix id = Matrix::Identity(n, n);
    Matrix system(static_cast<Eigen::Index>(z.d()) * nn, nn);
    for (int i = 0; i < z.d(); ++i) {
        system.middleRows(static_cast<Eigen::Index>(i) * nn, nn) =
            linalg::kron(id, z[i]) - linalg::kron(w[i].transpose(), id);
    }
    Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const int rank = linalg::rank_from_singular_values(sv, default_rank_tolerance);
    TransportResult out;
    out.null_dimension = nn - rank;
    if (sv(0) == 0.0) out.null_dimension = nn;
    if (out.null_dimension != 1) return out;

    Matrix s = linalg::unvec(svd.matrixV().col(nn - 1), n);
    s /= s.norm();
    double res = 0.0;
    for (int i = 0; i < z.d(); ++i) res = std::max(res, (z[i] * s - s * w[i]).norm());
    out.residual = res;
    if (res > tol || !(linalg::condition_number(s) <= default_condition_cap)) return out;

    const double cut = 1e-8 * s.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex e = s(i, j);
            if (std::abs(e) > cut) {
                s *= std::conj(e) / std::abs(e);
                out.conjugator = std::move(s);
                return out;
            }
        }
    }
    return out;
}

[[nodiscard]] inline std::optional<Matrix> similarity_transport(const MatTuple& z, const MatTuple& w,
                                                                double tol = 1e-8) {
    return transport_analysis(z, w, tol).conjugator;
}

// ---------------------------------------------------------------------------
// Jacobian of the coordinate map

enum class JacobianMethod { analytic, finite_difference };

/// Complex Jacobian of quotient_coords at z; column (i, a, b) -> i*n*n + a*n + b.
[[nodiscard]] inline Matrix coords_jacobian(const MatTuple& z, const GeneratorList& g, JacobianMethod method,
                                            double step = 1e-5) {
    detail::check_generator_shape(z, g);
    const int n = z.n();
    const int nn = n * n;
    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(z.d()) * nn);
    if (method == JacobianMethod::analytic) {
        // d tr(w) / dZ_i = sum over occurrences of i of (cyclic remainder)^T.
        detail::WordCache cache(z);
        for (std::size_t r = 0; r < g.size(); ++r) {
            const Word& w = g.cycles[r];
            for (std::size_t p = 0; p < w.size(); ++p) {
                Word rest = rotate(w, p + 1);
                rest.letters.pop_back();
                const Matrix& m = cache.product(rest);
                const int i = w[p] - 1;
                for (int a = 0; a < n; ++a) {
                    for (int b = 0; b < n; ++b) jac(static_cast<Eigen::Index>(r), i * nn + a * n + b) += m(b, a);
                }
            }
        }
        return jac;
    }
    std::vector<Matrix> mats(z.matrices().begin(), z.matrices().end());
    for (int i = 0; i < z.d(); ++i) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const Complex orig = mats[static_cast<std::size_t>(i)](a, b);
                mats[static_cast<std::size_t>(i)](a, b) = orig + step;
                const InvariantCoords plus = quotient_coords(MatTuple(mats), g);
                mats[static_cast<std::size_t>(i)](a, b) = orig - step;
                const InvariantCoords minus = quotient_coords(MatTuple(mats), g);
                mats[static_cast<std::size_t>(i)](a, b) = orig;
                for (std::size_t r = 0; r < g.size(); ++r) {
                    jac(static_cast<Eigen::Index>(r), i * nn + a * n + b) =
                        (plus.values[r] - minus.values[r]) / (2.0 * step);
                }
            }
        }
    }
    return jac;
}

/// Numerical rank over C of the coordinate Jacobian. Rows are normalized first
/// since generator degrees (and so row magnitudes) vary widely.
[[nodiscard]] inline int coords_jacobian_rank(const MatTuple& z, const GeneratorList& g,
                                              double tol = default_rank_tolerance,
                                              JacobianMethod method = JacobianMethod::analytic) {
    Matrix jac = coords_jacobian(z, g, method);
    for (Eigen::Index r = 0; r < jac.rows(); ++r) {
        const double nr = jac.row(r).norm();
        if (nr > 0.0) jac.row(r) /= nr;
    }
    return linalg::numerical_rank(jac, tol);
}

}  // namespace concomitant
