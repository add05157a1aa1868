#pragma once

// Numeric side: d-tuples of n x n complex matrices, the conjugation action,
// evaluation of TracePolys, random ensembles and the row-contraction norm.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concomitant/linalg.hpp"
#include "concomitant/ncpoly.hpp"
#include "concomitant/rng.hpp"

namespace concomitant {

/// z = (Z_1, ..., Z_d), each Z_i an n x n complex matrix. Indexing is 0-based.
class MatTuple {
public:
    explicit MatTuple(std::vector<Matrix> matrices) : mats_{std::move(matrices)} {
        if (mats_.empty()) throw std::invalid_argument("MatTuple: need at least one matrix");
        const Eigen::Index n = mats_.front().rows();
        if (n < 1) throw std::invalid_argument("MatTuple: matrix size must be at least 1");
        for (const auto& m : mats_) {
            if (m.rows() != n || m.cols() != n) {
                throw std::invalid_argument("MatTuple: all matrices must be " + std::to_string(n) + "x" +
                                            std::to_string(n));
            }
            if (!m.allFinite()) throw std::invalid_argument("MatTuple: non-finite entry");
        }
    }

    [[nodiscard]] static MatTuple zeros(int d, int n) {
        if (d < 1 || n < 1) throw std::invalid_argument("MatTuple: d and n must be at least 1");
        return MatTuple(std::vector<Matrix>(static_cast<std::size_t>(d), Matrix::Zero(n, n)));
    }

    [[nodiscard]] int d() const noexcept { return static_cast<int>(mats_.size()); }
    [[nodiscard]] int n() const noexcept { return static_cast<int>(mats_.front().rows()); }
    [[nodiscard]] const Matrix& operator[](std::size_t i) const { return mats_[i]; }
    [[nodiscard]] std::span<const Matrix> matrices() const noexcept { return mats_; }

    /// Largest Frobenius norm among the components.
    [[nodiscard]] double max_norm() const noexcept {
        double m = 0.0;
        for (const auto& z : mats_) m = std::max(m, z.norm());
        return m;
    }

    /// (Z_1^*, ..., Z_d^*).
    [[nodiscard]] MatTuple adjoint() const {
        std::vector<Matrix> out;
        out.reserve(mats_.size());
        for (const auto& z : mats_) out.push_back(z.adjoint());
        return MatTuple(std::move(out));
    }

    friend MatTuple operator+(const MatTuple& a, const MatTuple& b) {
        a.check_same_shape(b);
        std::vector<Matrix> out;
        for (std::size_t i = 0; i < a.mats_.size(); ++i) out.push_back(a.mats_[i] + b.mats_[i]);
        return MatTuple(std::move(out));
    }
    friend MatTuple operator*(Complex s, const MatTuple& a) {
        std::vector<Matrix> out;
        for (const auto& z : a.mats_) out.push_back(s * z);
        return MatTuple(std::move(out));
    }

    void check_same_shape(const MatTuple& b) const {
        if (b.d() != d() || b.n() != n()) {
            throw std::invalid_argument("MatTuple: shape mismatch (" + std::to_string(d()) + "," +
                                        std::to_string(n()) + ") vs (" + std::to_string(b.d()) + "," +
                                        std::to_string(b.n()) + ")");
        }
    }

private:
    std::vector<Matrix> mats_;
};

/// A representative (z, A) of the class [z, A] in V x_G M_n.
struct FiberPoint {
    MatTuple base;
    Matrix value;

    FiberPoint(MatTuple b, Matrix v) : base{std::move(b)}, value{std::move(v)} {
        if (value.rows() != base.n() || value.cols() != base.n()) {
            throw std::invalid_argument("FiberPoint: value must be n x n with n = " + std::to_string(base.n()));
        }
    }
};

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluation {
    Matrix value;
    /// Largest |term| (Frobenius) in the sum; the natural scale for roundoff.
    double scale = 0.0;
};

namespace detail {

/// Memoized word products for one tuple. Products are built from the longest
/// cached prefix.
class WordCache {
public:
    explicit WordCache(const MatTuple& z) : z_{z} {}

    const Matrix& product(const Word& w) {
        if (auto it = cache_.find(w); it != cache_.end()) return it->second;
        Matrix m;
        if (w.empty()) {
            m = Matrix::Identity(z_.n(), z_.n());
        } else {
            Word prefix(std::vector<Letter>(w.letters.begin(), w.letters.end() - 1));
            m = product(prefix) * z_[w.letters.back() - 1u];
        }
        return cache_.emplace(w, std::move(m)).first->second;
    }

    Complex trace_of(const Word& w) { return product(w).trace(); }

private:
    const MatTuple& z_;
    std::map<Word, Matrix> cache_;
};

inline Complex factor_value(const TraceFactor& t, WordCache& cache, int n) {
    switch (t.kind) {
        case TraceKind::dimension: return static_cast<double>(n);
        case TraceKind::trace: return cache.trace_of(t.cycle);
        case TraceKind::normalized: return cache.trace_of(t.cycle) / static_cast<double>(n);
    }
    return 0.0;
}

inline void check_generators(const TracePoly& p, const MatTuple& z) {
    if (p.generators() != z.d()) {
        throw std::invalid_argument("evaluate: polynomial has " + std::to_string(p.generators()) +
                                    " generators but tuple has d=" + std::to_string(z.d()));
    }
}

}  // namespace detail

[[nodiscard]] inline Evaluation evaluate_detailed(const TracePoly& p, const MatTuple& z) {
    detail::check_generators(p, z);
    const int n = z.n();
    detail::WordCache cache(z);
    Evaluation out{Matrix::Zero(n, n), 0.0};
    for (const auto& [m, c] : p.terms()) {
        Complex s = c;
        for (const auto& t : m.traces) s *= detail::factor_value(t, cache, n);
        const Matrix& w = cache.product(m.word);
        out.value.noalias() += s * w;
        out.scale = std::max(out.scale, std::abs(s) * w.norm());
    }
    return out;
}

/// p(z) as an n x n matrix; pure-scalar polynomials give scalar * I.
[[nodiscard]] inline Matrix evaluate(const TracePoly& p, const MatTuple& z) {
    return evaluate_detailed(p, z).value;
}

/// Scalar value of a pure-scalar polynomial at z.
[[nodiscard]] inline Complex evaluate_scalar(const TracePoly& p, const MatTuple& z) {
    if (!p.is_pure_scalar()) throw std::invalid_argument("evaluate_scalar: polynomial is not pure-scalar");
    detail::check_generators(p, z);
    detail::WordCache cache(z);
    Complex sum = 0.0;
    for (const auto& [m, c] : p.terms()) {
        Complex s = c;
        for (const auto& t : m.traces) s *= detail::factor_value(t, cache, z.n());
        sum += s;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Conjugation

inline constexpr double default_condition_cap = 1e12;

/// s^{-1} a s.
[[nodiscard]] inline Matrix conjugate_matrix(const Matrix& a, const Matrix& s,
                                             double cond_cap = default_condition_cap) {
    if (s.rows() != a.rows() || s.cols() != a.cols()) throw std::invalid_argument("conjugate: shape mismatch");
    const double cond = linalg::condition_number(s);
    if (!(cond <= cond_cap)) {
        throw std::domain_error("conjugate: conjugator singular or ill-conditioned (cond = " + std::to_string(cond) + ")");
    }
    return Eigen::PartialPivLU<Matrix>(s).solve(a * s);
}

/// z . s = (s^{-1} Z_1 s, ..., s^{-1} Z_d s).
[[nodiscard]] inline MatTuple conjugate(const MatTuple& z, const Matrix& s, double cond_cap = default_condition_cap) {
    if (s.rows() != z.n() || s.cols() != z.n()) throw std::invalid_argument("conjugate: conjugator must be n x n");
    const double cond = linalg::condition_number(s);
    if (!(cond <= cond_cap)) {
        throw std::domain_error("conjugate: conjugator singular or ill-conditioned (cond = " + std::to_string(cond) + ")");
    }
    const Eigen::PartialPivLU<Matrix> lu(s);
    const Matrix s_inv = lu.inverse();
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(z.d()));
    for (const auto& m : z.matrices()) out.push_back(s_inv * m * s);
    return MatTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Random matrices

[[nodiscard]] inline Matrix ginibre_matrix(int n, CounterRng& rng) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) m(i, j) = rng.complex_normal();
    }
    return m;
}

/// Ginibre matrix resampled until its condition number is at most cond_cap.
[[nodiscard]] inline Matrix random_invertible(int n, CounterRng& rng, double cond_cap = 1e2) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Matrix s = ginibre_matrix(n, rng);
        if (linalg::condition_number(s) <= cond_cap) return s;
    }
    throw std::runtime_error("random_invertible: could not meet condition cap");
}

/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal made
/// positive.
[[nodiscard]] inline Matrix haar_unitary(int n, CounterRng& rng) {
    if (n < 1) throw std::invalid_argument("haar_unitary: n must be at least 1");
    const Matrix g = ginibre_matrix(n, rng);
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    return q;
}

[[nodiscard]] inline Matrix haar_unitary(int n, std::uint64_t seed) {
    CounterRng rng(seed);
    return haar_unitary(n, rng);
}

enum class EnsembleKind { ginibre, disc, commuting, reducible };

struct Ensemble {
    EnsembleKind kind = EnsembleKind::ginibre;
    int k = 0;  // invariant-subspace dimension for reducible

    [[nodiscard]] static Ensemble ginibre() { return {EnsembleKind::ginibre, 0}; }
    [[nodiscard]] static Ensemble disc() { return {EnsembleKind::disc, 0}; }
    [[nodiscard]] static Ensemble commuting() { return {EnsembleKind::commuting, 0}; }
    [[nodiscard]] static Ensemble reducible(int k) { return {EnsembleKind::reducible, k}; }

    /// Accepts "ginibre", "disc", "commuting", "reducible(k)" or "reducible:k".
    [[nodiscard]] static Ensemble parse(std::string_view s) {
        if (s == "ginibre") return ginibre();
        if (s == "disc") return disc();
        if (s == "commuting") return commuting();
        if (s.starts_with("reducible")) {
            std::string_view rest = s.substr(9);
            if (!rest.empty() && (rest.front() == '(' || rest.front() == ':')) {
                const bool paren = rest.front() == '(';
                rest.remove_prefix(1);
                if (paren) {
                    if (rest.empty() || rest.back() != ')') throw std::invalid_argument("bad ensemble: " + std::string(s));
                    rest.remove_suffix(1);
                }
                try {
                    std::size_t used = 0;
                    const int k = std::stoi(std::string(rest), &used);
                    if (used == rest.size()) return reducible(k);
                } catch (const std::exception&) {
                }
            }
        }
        throw std::invalid_argument("unknown ensemble '" + std::string(s) + "'");
    }
};

/// Row contraction sum Z_i Z_i^* (the default) or column contraction sum Z_i^* Z_i.
enum class Contraction { row, column };

/// Largest eigenvalue of sum_i Z_i Z_i^* (or Z_i^* Z_i). z is in the matrix disc
/// when this is below 1.
[[nodiscard]] inline double op_norm(const MatTuple& z, Contraction c = Contraction::row) {
    Matrix h = Matrix::Zero(z.n(), z.n());
    for (const auto& m : z.matrices()) h += c == Contraction::row ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    return linalg::hermitian_max_eigenvalue(h);
}

[[nodiscard]] inline bool in_disc(const MatTuple& z, Contraction c = Contraction::row) { return op_norm(z, c) < 1.0; }

[[nodiscard]] inline MatTuple random_tuple(int d, int n, Ensemble ens, CounterRng& rng) {
    if (d < 1 || n < 1) throw std::invalid_argument("random_tuple: d and n must be at least 1");
    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(d));
    switch (ens.kind) {
        case EnsembleKind::ginibre:
            for (int i = 0; i < d; ++i) mats.push_back(ginibre_matrix(n, rng));
            return MatTuple(std::move(mats));
        case EnsembleKind::disc: {
            for (int i = 0; i < d; ++i) mats.push_back(ginibre_matrix(n, rng));
            MatTuple z(std::move(mats));
            const double target = rng.uniform();
            const double scale = std::sqrt(target / op_norm(z));
            return Complex{scale} * z;
        }
        case EnsembleKind::commuting:
            for (int i = 0; i < d; ++i) {
                Matrix m = Matrix::Zero(n, n);
                for (int j = 0; j < n; ++j) m(j, j) = rng.complex_normal();
                mats.push_back(std::move(m));
            }
            return MatTuple(std::move(mats));
        case EnsembleKind::reducible: {
            if (ens.k < 1 || ens.k > n - 1) {
                throw std::invalid_argument("random_tuple: reducible(k) needs 1 <= k <= n-1, got k=" +
                                            std::to_string(ens.k) + " with n=" + std::to_string(n));
            }
            for (int i = 0; i < d; ++i) {
                Matrix m = ginibre_matrix(n, rng);
                m.bottomLeftCorner(n - ens.k, ens.k).setZero();
                mats.push_back(std::move(m));
            }
            const Matrix s = random_invertible(n, rng);
            return conjugate(MatTuple(std::move(mats)), s);
        }
    }
    throw std::logic_error("random_tuple: unhandled ensemble");
}

[[nodiscard]] inline MatTuple random_tuple(int d, int n, Ensemble ens, std::uint64_t seed) {
    CounterRng rng(seed);
    return random_tuple(d, n, ens, rng);
}

}  // namespace concomitant
