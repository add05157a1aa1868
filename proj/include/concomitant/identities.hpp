#pragma once

// Polynomial identities and central polynomials of M_n(C), tested by random
// evaluation. A failed check is certain and carries the witness tuple; a
// passed check is high-confidence only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "concomitant/linalg.hpp"
#include "concomitant/mattuple.hpp"
#include "concomitant/ncpoly.hpp"
#include "concomitant/rng.hpp"
#include "concomitant/structure.hpp"

namespace concomitant {

struct IdentityVerdict {
    bool verdict = true;
    std::size_t trials = 0;
    double max_defect = 0.0;
    std::optional<MatTuple> witness;
    std::string reason;

    explicit operator bool() const noexcept { return verdict; }
};

inline constexpr double default_identity_tolerance = 1e-10;

/// p vanishes on M_n(C)^d: |p(z)| <= tol * (1 + scale) at every sampled
/// Ginibre z, where scale is the largest term magnitude at z.
[[nodiscard]] inline IdentityVerdict is_identity(const TracePoly& p, int n, std::size_t trials, std::uint64_t seed,
                                                 double tol = default_identity_tolerance) {
    if (trials < 1) throw std::invalid_argument("is_identity: trials must be at least 1");
    if (n < 1) throw std::invalid_argument("is_identity: n must be at least 1");
    IdentityVerdict out;
    const CounterRng root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng = root.split(t);
        MatTuple z = random_tuple(p.generators(), n, Ensemble::ginibre(), rng);
        const Evaluation ev = evaluate_detailed(p, z);
        const double defect = ev.value.norm() / (1.0 + ev.scale);
        out.max_defect = std::max(out.max_defect, defect);
        out.trials = t + 1;
        if (defect > tol) {
            out.verdict = false;
            out.witness = std::move(z);
            out.reason = "nonzero value at witness";
            return out;
        }
    }
    return out;
}

/// p has no constant term, is scalar valued on every sample and is not itself
/// an identity.
[[nodiscard]] inline IdentityVerdict is_central(const TracePoly& p, int n, std::size_t trials, std::uint64_t seed,
                                                double tol = default_identity_tolerance) {
    if (p.has_constant_term()) throw std::invalid_argument("is_central: polynomial has a constant term");
    if (trials < 1) throw std::invalid_argument("is_central: trials must be at least 1");
    IdentityVerdict out;
    const CounterRng root(seed);
    const Matrix id = Matrix::Identity(n, n);
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng = root.split(t);
        MatTuple z = random_tuple(p.generators(), n, Ensemble::ginibre(), rng);
        const Evaluation ev = evaluate_detailed(p, z);
        const Matrix off = ev.value - (ev.value.trace() / static_cast<double>(n)) * id;
        const double defect = off.norm() / (1.0 + ev.scale);
        out.max_defect = std::max(out.max_defect, defect);
        out.trials = t + 1;
        if (defect > tol) {
            out.verdict = false;
            out.witness = std::move(z);
            out.reason = "value is not a scalar matrix at witness";
            return out;
        }
    }
    if (is_identity(p, n, trials, seed, tol).verdict) {
        out.verdict = false;
        out.reason = "polynomial is an identity of M_n";
    }
    return out;
}

/// c with [Z_i, Z_j]^2 = c I for 2x2 matrices, c = -det[Z_i, Z_j]. Indices are
/// 1-based.
[[nodiscard]] inline Complex wagner_scalar(const MatTuple& z, int i, int j) {
    if (z.n() != 2) throw std::invalid_argument("wagner_scalar: needs n = 2");
    if (i < 1 || j < 1 || i > z.d() || j > z.d() || i == j) {
        throw std::invalid_argument("wagner_scalar: need distinct indices in 1.." + std::to_string(z.d()));
    }
    const Matrix c = linalg::commutator(z[static_cast<std::size_t>(i - 1)], z[static_cast<std::size_t>(j - 1)]);
    return -c.determinant();
}

namespace detail {

/// All nonempty words of length <= max_len over d letters, (length, lex) order.
inline std::vector<Word> words_up_to(int d, int max_len) {
    std::vector<Word> out;
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer) {
            for (int a = 1; a <= d; ++a) {
                Word x = w;
                x.letters.push_back(static_cast<Letter>(a));
                next.push_back(std::move(x));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace detail

struct RvNormalization {
    TracePoly poly;
    Word u;
    Word v;
    Complex det;  // det[u(z), v(z)]
};

/// Central polynomial p = (-1/det[u(z), v(z)]) [u, v]^2 with p(z) = I, for the
/// word pair (u, v) of length <= max_word_len maximizing |det[u(z), v(z)]|.
/// Pairs are scanned by (|u| + |v|, u, v); the first maximum wins.
[[nodiscard]] inline RvNormalization rv_normalize_detailed(const MatTuple& z, int max_word_len) {
    if (z.n() != 2) throw std::invalid_argument("rv_normalize: needs n = 2");
    if (max_word_len < 1) throw std::invalid_argument("rv_normalize: max_word_len must be at least 1");
    if (!is_irreducible(z)) throw std::invalid_argument("rv_normalize: tuple is not irreducible");

    const std::vector<Word> words = detail::words_up_to(z.d(), max_word_len);
    detail::WordCache cache(z);
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;  // (total length, u index, v index)
    for (std::size_t a = 0; a < words.size(); ++a) {
        for (std::size_t b = a + 1; b < words.size(); ++b) pairs.emplace_back(words[a].size() + words[b].size(), a, b);
    }
    std::sort(pairs.begin(), pairs.end());

    double best_abs = 0.0;
    std::size_t best_u = 0;
    std::size_t best_v = 0;
    Complex best_det = 0.0;
    for (const auto& [len, a, b] : pairs) {
        const Complex det = linalg::commutator(cache.product(words[a]), cache.product(words[b])).determinant();
        if (std::abs(det) > best_abs) {
            best_abs = std::abs(det);
            best_u = a;
            best_v = b;
            best_det = det;
        }
    }
    if (best_abs <= 1e-10) {
        throw std::runtime_error("rv_normalize: every candidate |det[u(z), v(z)]| is below 1e-10 (max_word_len " +
                                 std::to_string(max_word_len) + ")");
    }
    const int d = z.d();
    const TracePoly c = commutator(TracePoly::word(d, words[best_u]), TracePoly::word(d, words[best_v]));
    return {(-1.0 / best_det) * (c * c), words[best_u], words[best_v], best_det};
}

[[nodiscard]] inline TracePoly rv_normalize(const MatTuple& z, int max_word_len = 2) {
    return rv_normalize_detailed(z, max_word_len).poly;
}

/// Scalar value tr(p(z)) / n of a central polynomial.
[[nodiscard]] inline Complex central_value(const TracePoly& p, const MatTuple& z) {
    return evaluate(p, z).trace() / static_cast<double>(z.n());
}

/// Greedy cover by central polynomials: repeatedly normalize at the
/// worst-covered sample until every sample has some |p_j(z)| >= delta.
[[nodiscard]] inline std::vector<TracePoly> partition_of_unity(const std::vector<MatTuple>& samples,
                                                               int max_word_len = 2, double delta = 0.5) {
    if (samples.empty()) throw std::invalid_argument("partition_of_unity: no samples");
    if (!(delta > 0.0)) throw std::invalid_argument("partition_of_unity: delta must be positive");
    for (const auto& z : samples) {
        if (z.n() != 2) throw std::invalid_argument("partition_of_unity: needs n = 2");
        z.check_same_shape(samples.front());
    }
    std::vector<double> coverage(samples.size(), 0.0);
    std::vector<TracePoly> chosen;
    for (std::size_t iter = 0; iter <= samples.size(); ++iter) {
        const auto worst = std::min_element(coverage.begin(), coverage.end());
        if (*worst >= delta) return chosen;
        if (iter == samples.size()) break;
        const auto idx = static_cast<std::size_t>(worst - coverage.begin());
        chosen.push_back(rv_normalize(samples[idx], max_word_len));
        for (std::size_t j = 0; j < samples.size(); ++j) {
            coverage[j] = std::max(coverage[j], std::abs(central_value(chosen.back(), samples[j])));
        }
    }
    const auto worst = std::min_element(coverage.begin(), coverage.end());
    throw std::runtime_error("partition_of_unity: sample " + std::to_string(worst - coverage.begin()) +
                             " not covered to delta");
}

}  // namespace concomitant
