#pragma once

// Test-only reference computations. Nothing here calls into the code paths it
// is used to check (no WordCache, no FKM, no canonical_cycle).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include "concomitant/concomitant.hpp"

namespace oracle {

using concomitant::Complex;
using concomitant::Matrix;

/// Matrix unit E_ij (1-based) of size n.
inline Matrix unit(int n, int i, int j) {
    Matrix m = Matrix::Zero(n, n);
    m(i - 1, j - 1) = 1.0;
    return m;
}

inline Matrix diag(std::initializer_list<Complex> entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(n, n);
    Eigen::Index i = 0;
    for (Complex c : entries) m(i, i) = c, ++i;
    return m;
}

inline Matrix swap2() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

/// Minimum over all rotations, by explicit enumeration.
inline std::vector<int> min_rotation(const std::vector<int>& w) {
    std::vector<int> best = w;
    for (std::size_t k = 1; k < w.size(); ++k) {
        std::vector<int> r(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
        r.insert(r.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        best = std::min(best, r);
    }
    return best;
}

/// Cyclic classes of words of length 1..max_len over {1..d}: every word is
/// enumerated and deduplicated by the set of all its rotations.
inline std::size_t brute_force_cyclic_classes(int d, int max_len) {
    std::set<std::vector<int>> classes;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<int> w(static_cast<std::size_t>(len), 1);
        for (;;) {
            classes.insert(min_rotation(w));
            int pos = len - 1;
            while (pos >= 0 && w[static_cast<std::size_t>(pos)] == d) w[static_cast<std::size_t>(pos--)] = 1;
            if (pos < 0) break;
            ++w[static_cast<std::size_t>(pos)];
        }
    }
    return classes.size();
}

/// Product Z_{w1} ... Z_{wm}, left to right, no caching.
inline Matrix word_product(const concomitant::MatTuple& z, const concomitant::Word& w) {
    Matrix m = Matrix::Identity(z.n(), z.n());
    for (auto l : w.letters) m = m * z[l - 1u];
    return m;
}

/// Term-by-term evaluation straight from the definition.
inline Matrix naive_evaluate(const concomitant::TracePoly& p, const concomitant::MatTuple& z) {
    const int n = z.n();
    Matrix out = Matrix::Zero(n, n);
    for (const auto& [m, c] : p.terms()) {
        Complex s = c;
        for (const auto& t : m.traces) {
            switch (t.kind) {
                case concomitant::TraceKind::dimension: s *= static_cast<double>(n); break;
                case concomitant::TraceKind::trace: s *= word_product(z, t.cycle).trace(); break;
                case concomitant::TraceKind::normalized: s *= word_product(z, t.cycle).trace() / double(n); break;
            }
        }
        out += s * word_product(z, m.word);
    }
    return out;
}

/// Haar average of k C k^* is (tr C / n) I (Schur orthogonality).
inline Matrix schur_average(const Matrix& c) {
    const auto n = c.rows();
    return (c.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
}

/// Random TracePoly with Gaussian-integer coefficients (so symbolic arithmetic
/// is exact in double), up to `terms` terms, words of length <= max_word,
/// up to two trace factors per term.
inline concomitant::TracePoly random_poly(int d, concomitant::CounterRng& rng, int terms, int max_word,
                                          bool allow_traces = true, bool allow_normalized = false) {
    using namespace concomitant;
    TracePoly p(d);
    auto small_int = [&](int lo, int hi) {
        return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    auto random_word = [&](int min_len) {
        Word w;
        const int len = small_int(min_len, max_word);
        for (int i = 0; i < len; ++i) w.letters.push_back(static_cast<Letter>(small_int(1, d)));
        return w;
    };
    const int count = small_int(1, terms);
    for (int t = 0; t < count; ++t) {
        Monomial m;
        m.word = random_word(0);
        if (allow_traces) {
            const int k = small_int(0, 2);
            for (int j = 0; j < k; ++j) {
                const bool normalized = allow_normalized && small_int(0, 1) == 1;
                const Word w = random_word(1);
                m.traces.push_back(normalized ? TraceFactor::normalized(w) : TraceFactor::trace(w));
            }
        }
        Complex c{static_cast<double>(small_int(-4, 4)), static_cast<double>(small_int(-2, 2))};
        if (c == Complex{0.0}) c = 1.0;
        p += TracePoly::term(d, m, c);
    }
    return p;
}

/// Largest relative coefficient difference between two polynomials.
inline double coefficient_distance(const concomitant::TracePoly& a, const concomitant::TracePoly& b) {
    double m = 0.0;
    for (const auto& [k, c] : a.terms()) {
        const auto it = b.terms().find(k);
        const Complex other = it == b.terms().end() ? Complex{0.0} : it->second;
        m = std::max(m, std::abs(c - other) / std::max(1.0, std::abs(c)));
    }
    for (const auto& [k, c] : b.terms()) {
        if (!a.terms().contains(k)) m = std::max(m, std::abs(c) / std::max(1.0, std::abs(c)));
    }
    return m;
}

}  // namespace oracle
