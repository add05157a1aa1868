#pragma once

// Free algebra on X1..Xd extended by formal trace factors.
//
// A TracePoly is a finite sum of terms  c * t_1 * ... * t_m * w  where c is a
// complex coefficient, each t_j is a trace factor (a scalar-valued symbol) and
// w is a plain word in the generators. Pure-scalar polynomials (every plain
// word empty) are the invariant part; everything else is matrix valued.

#include <algorithm>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace concomitant {

using Complex = std::complex<double>;
using Letter = std::uint16_t;

/// Monomial of the free algebra: a sequence of 1-based generator indices.
/// Ordered by (length, lex).
struct Word {
    std::vector<Letter> letters;

    Word() = default;
    Word(std::initializer_list<Letter> l) : letters(l) {}
    explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

    [[nodiscard]] std::size_t size() const noexcept { return letters.size(); }
    [[nodiscard]] bool empty() const noexcept { return letters.empty(); }
    [[nodiscard]] Letter operator[](std::size_t i) const { return letters[i]; }
    [[nodiscard]] Letter max_letter() const noexcept {
        return letters.empty() ? Letter{0} : *std::max_element(letters.begin(), letters.end());
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() <=> b.size();
        return a.letters <=> b.letters;
    }
};

[[nodiscard]] inline Word concat(const Word& a, const Word& b) {
    Word out;
    out.letters.reserve(a.size() + b.size());
    out.letters.insert(out.letters.end(), a.letters.begin(), a.letters.end());
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

/// Left rotation by k positions (k taken modulo the length).
[[nodiscard]] inline Word rotate(const Word& w, std::size_t k) {
    if (w.empty()) return w;
    Word out = w;
    std::rotate(out.letters.begin(), out.letters.begin() + static_cast<std::ptrdiff_t>(k % w.size()),
                out.letters.end());
    return out;
}

/// Lexicographically minimal rotation. Quadratic, which is fine for the word
/// lengths that occur here (at most 2^n - 1).
[[nodiscard]] inline Word canonical_cycle(const Word& w) {
    if (w.empty()) throw std::invalid_argument("canonical_cycle: empty word");
    const std::size_t len = w.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < len; ++r) {
        for (std::size_t i = 0; i < len; ++i) {
            const Letter a = w.letters[(r + i) % len];
            const Letter b = w.letters[(best + i) % len];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    return rotate(w, best);
}

enum class TraceKind : std::uint8_t {
    dimension,   // tr(I) = n, produced by tr of a scalar subexpression
    trace,       // tr(w), unnormalized
    normalized,  // ntr(w) = tr(w) / n
};

/// Scalar symbol tr(w), ntr(w) or the dimension n. The cycle is stored in
/// canonical form so that cyclically equivalent traces coincide.
struct TraceFactor {
    TraceKind kind = TraceKind::trace;
    Word cycle;

    [[nodiscard]] static TraceFactor trace(const Word& w) { return {TraceKind::trace, canonical_cycle(w)}; }
    [[nodiscard]] static TraceFactor normalized(const Word& w) {
        return {TraceKind::normalized, canonical_cycle(w)};
    }
    [[nodiscard]] static TraceFactor dimension() { return {TraceKind::dimension, {}}; }

    friend bool operator==(const TraceFactor&, const TraceFactor&) = default;
    friend std::strong_ordering operator<=>(const TraceFactor& a, const TraceFactor& b) {
        if (auto c = a.cycle <=> b.cycle; c != 0) return c;
        return a.kind <=> b.kind;
    }
};

/// Key of a TracePoly term: a sorted multiset of trace factors and a word.
struct Monomial {
    std::vector<TraceFactor> traces;  // sorted ascending
    Word word;

    [[nodiscard]] bool is_unit() const noexcept { return traces.empty() && word.empty(); }
    [[nodiscard]] bool is_scalar() const noexcept { return word.empty(); }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        const auto c = std::lexicographical_compare_three_way(a.traces.begin(), a.traces.end(),
                                                              b.traces.begin(), b.traces.end());
        if (c != 0) return c;
        return a.word <=> b.word;
    }
};

[[nodiscard]] inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.traces.reserve(a.traces.size() + b.traces.size());
    std::merge(a.traces.begin(), a.traces.end(), b.traces.begin(), b.traces.end(),
               std::back_inserter(out.traces));
    out.word = concat(a.word, b.word);
    return out;
}

class TracePoly {
public:
    using TermMap = std::map<Monomial, Complex>;

    /// The zero polynomial in d generators.
    explicit TracePoly(int d) : d_{d} {
        if (d < 1) throw std::invalid_argument("TracePoly: generator count must be at least 1");
    }

    [[nodiscard]] static TracePoly constant(int d, Complex c) {
        TracePoly p(d);
        p.add_term(Monomial{}, c);
        return p;
    }

    /// The coordinate X_i, 1-based.
    [[nodiscard]] static TracePoly generator(int d, int i) {
        if (i < 1 || i > d) {
            throw std::out_of_range("generator X" + std::to_string(i) + " out of range for d=" +
                                    std::to_string(d));
        }
        TracePoly p(d);
        p.add_term(Monomial{{}, Word{static_cast<Letter>(i)}}, Complex{1.0});
        return p;
    }

    [[nodiscard]] static TracePoly word(int d, const Word& w, Complex c = 1.0) {
        return term(d, Monomial{{}, w}, c);
    }

    [[nodiscard]] static TracePoly term(int d, Monomial m, Complex c) {
        TracePoly p(d);
        std::sort(m.traces.begin(), m.traces.end());
        for (const auto& t : m.traces) p.check_letters(t.cycle);
        p.check_letters(m.word);
        p.add_term(std::move(m), c);
        return p;
    }

    [[nodiscard]] int generators() const noexcept { return d_; }
    [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

    /// True when every term has an empty plain word (an invariant).
    [[nodiscard]] bool is_pure_scalar() const noexcept {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_scalar(); });
    }

    [[nodiscard]] bool has_constant_term() const noexcept {
        return !terms_.empty() && terms_.begin()->first.is_unit();
    }

    /// Largest total word length, counting letters inside trace factors.
    [[nodiscard]] std::size_t degree() const noexcept {
        std::size_t deg = 0;
        for (const auto& [m, c] : terms_) {
            std::size_t k = m.word.size();
            for (const auto& t : m.traces) k += t.cycle.size();
            deg = std::max(deg, k);
        }
        return deg;
    }

    TracePoly& operator+=(const TracePoly& q) {
        check_compatible(q);
        for (const auto& [m, c] : q.terms_) add_term(m, c);
        return *this;
    }
    TracePoly& operator-=(const TracePoly& q) {
        check_compatible(q);
        for (const auto& [m, c] : q.terms_) add_term(m, -c);
        return *this;
    }
    TracePoly& operator*=(Complex s) {
        if (s == Complex{0.0}) {
            terms_.clear();
            return *this;
        }
        TermMap out;
        for (const auto& [m, c] : terms_) {
            const Complex v = clean(c * s);
            if (v != Complex{0.0}) out.emplace(m, v);
        }
        terms_ = std::move(out);
        return *this;
    }

    friend TracePoly operator+(TracePoly p, const TracePoly& q) { return p += q; }
    friend TracePoly operator-(TracePoly p, const TracePoly& q) { return p -= q; }
    friend TracePoly operator-(TracePoly p) { return p *= Complex{-1.0}; }
    friend TracePoly operator*(TracePoly p, Complex s) { return p *= s; }
    friend TracePoly operator*(Complex s, TracePoly p) { return p *= s; }

    /// Noncommutative product: words concatenate, trace multisets merge.
    friend TracePoly operator*(const TracePoly& p, const TracePoly& q) {
        p.check_compatible(q);
        TracePoly out(p.d_);
        for (const auto& [mp, cp] : p.terms_) {
            for (const auto& [mq, cq] : q.terms_) out.add_term(mp * mq, cp * cq);
        }
        return out;
    }

    friend bool operator==(const TracePoly& a, const TracePoly& b) {
        return a.d_ == b.d_ && a.terms_ == b.terms_;
    }

    /// Adds c to the coefficient of m, dropping it if the sum is zero.
    void add_term(const Monomial& m, Complex c) {
        c = clean(c);
        if (c == Complex{0.0}) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = clean(it->second + c);
            if (it->second == Complex{0.0}) terms_.erase(it);
        }
    }

private:
    // Maps -0.0 components to +0.0 so equal values compare and print alike.
    static Complex clean(Complex c) noexcept { return {c.real() + 0.0, c.imag() + 0.0}; }

    void check_compatible(const TracePoly& q) const {
        if (q.d_ != d_) {
            throw std::invalid_argument("TracePoly: mismatched generator counts " + std::to_string(d_) +
                                        " and " + std::to_string(q.d_));
        }
    }

    void check_letters(const Word& w) const {
        for (Letter l : w.letters) {
            if (l < 1 || l > d_) {
                throw std::out_of_range("generator X" + std::to_string(l) + " out of range for d=" +
                                        std::to_string(d_));
            }
        }
    }

    int d_;
    TermMap terms_;
};

[[nodiscard]] inline TracePoly pow(const TracePoly& p, unsigned k) {
    TracePoly out = TracePoly::constant(p.generators(), 1.0);
    for (unsigned i = 0; i < k; ++i) out = out * p;
    return out;
}

[[nodiscard]] inline TracePoly commutator(const TracePoly& a, const TracePoly& b) { return a * b - b * a; }

namespace detail {

template <class MakeFactor>
TracePoly apply_trace(const TracePoly& p, MakeFactor&& make, bool drop_on_empty) {
    TracePoly out(p.generators());
    for (const auto& [m, c] : p.terms()) {
        Monomial r;
        r.traces = m.traces;
        if (!m.word.empty()) {
            r.traces.push_back(make(m.word));
        } else if (!drop_on_empty) {
            r.traces.push_back(TraceFactor::dimension());
        }
        std::sort(r.traces.begin(), r.traces.end());
        out.add_term(r, c);
    }
    return out;
}

}  // namespace detail

/// Unnormalized trace, extended linearly. tr of a scalar term s gives n*s.
[[nodiscard]] inline TracePoly trace(const TracePoly& p) {
    return detail::apply_trace(p, [](const Word& w) { return TraceFactor::trace(w); }, false);
}

/// Normalized trace ntr = tr / n; ntr of a scalar term is the term itself.
[[nodiscard]] inline TracePoly normalized_trace(const TracePoly& p) {
    return detail::apply_trace(p, [](const Word& w) { return TraceFactor::normalized(w); }, true);
}

}  // namespace concomitant
