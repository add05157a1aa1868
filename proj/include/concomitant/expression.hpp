#pragma once

// Text form of TracePoly.
//
//   expr    := ('+'|'-')? term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := atom ('^' UINT)?
//   atom    := 'X' UINT | 'tr' '(' expr ')' | 'ntr' '(' expr ')'
//            | FLOAT 'i'? | 'i' | '(' expr ')'
//
// Whitespace is ignored. A parenthesised complex literal such as (2-3i) is just
// a parenthesised expr. The printer emits shortest round-trip decimal
// coefficients, so parse(format(p)) reproduces p bit for bit.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "concomitant/ncpoly.hpp"

namespace concomitant {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_{position} {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

namespace detail {

inline constexpr unsigned max_exponent = 64;

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, int d) : text_{text}, d_{d} {}

    TracePoly parse() {
        TracePoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    TracePoly expr() {
        TracePoly out(d_);
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        out = term();
        if (negate) out = -out;
        for (;;) {
            if (accept('+')) {
                out += term();
            } else if (accept('-')) {
                out -= term();
            } else {
                break;
            }
        }
        return out;
    }

    TracePoly term() {
        TracePoly out = factor();
        while (accept('*')) out = out * factor();
        return out;
    }

    TracePoly factor() {
        TracePoly base = atom();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            const unsigned k = uint_literal("exponent");
            if (k > max_exponent) fail_at("exponent " + std::to_string(k) + " too large", at);
            return pow(base, k);
        }
        return base;
    }

    unsigned uint_literal(const char* what) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail_at(std::string("expected ") + what, start);
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{}) fail_at(std::string(what) + " out of range", start);
        return value;
    }

    std::string_view identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    TracePoly atom() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];

        if (c == '(') {
            ++pos_;
            TracePoly inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const double v = float_literal();
            if (pos_ < text_.size() && text_[pos_] == 'i' &&
                !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
                ++pos_;
                return TracePoly::constant(d_, Complex{0.0, v});
            }
            return TracePoly::constant(d_, Complex{v, 0.0});
        }
        if (c == 'X') {
            ++pos_;
            const std::size_t at = pos_;
            const unsigned idx = uint_literal("generator index after 'X'");
            if (idx < 1 || idx > static_cast<unsigned>(d_)) {
                fail_at("generator X" + std::to_string(idx) + " out of range for d=" + std::to_string(d_), at);
            }
            return TracePoly::generator(d_, static_cast<int>(idx));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::string_view id = identifier();
            if (id == "i") return TracePoly::constant(d_, Complex{0.0, 1.0});
            if (id == "tr" || id == "ntr") {
                expect('(');
                TracePoly inner = expr();
                expect(')');
                return id == "tr" ? trace(inner) : normalized_trace(inner);
            }
            fail_at("unknown identifier '" + std::string(id) + "'", start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    double float_literal() {
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return pos_ - s;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) fail_at("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(value)) {
            fail_at("malformed number", start);
        }
        return value;
    }

    std::string_view text_;
    int d_;
    std::size_t pos_ = 0;
};

inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void append_word(std::string& out, const Word& w) {
    for (std::size_t i = 0; i < w.size();) {
        std::size_t run = 1;
        while (i + run < w.size() && w[i + run] == w[i]) ++run;
        if (i > 0) out += '*';
        out += 'X';
        out += std::to_string(w[i]);
        if (run > 1) out += '^' + std::to_string(run);
        i += run;
    }
}

inline std::string format_trace_factor(const TraceFactor& t) {
    std::string out;
    switch (t.kind) {
        case TraceKind::dimension: return "tr(1)";
        case TraceKind::trace: out = "tr("; break;
        case TraceKind::normalized: out = "ntr("; break;
    }
    append_word(out, t.cycle);
    out += ')';
    return out;
}

inline std::string format_monomial(const Monomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.traces.size();) {
        std::size_t run = 1;
        while (i + run < m.traces.size() && m.traces[i + run] == m.traces[i]) ++run;
        if (!out.empty()) out += '*';
        out += format_trace_factor(m.traces[i]);
        if (run > 1) out += '^' + std::to_string(run);
        i += run;
    }
    if (!m.word.empty()) {
        if (!out.empty()) out += '*';
        append_word(out, m.word);
    }
    return out;
}

// Writes the term with its sign split off: returns true when the term is
// printed as a subtraction.
inline bool format_term(std::string& body, const Monomial& m, Complex c) {
    const double re = c.real();
    const double im = c.imag();
    bool negative = false;
    std::string coeff;
    if (im == 0.0) {
        negative = re < 0.0;
        coeff = format_real(std::abs(re));
    } else if (re == 0.0) {
        negative = im < 0.0;
        coeff = std::abs(im) == 1.0 ? "i" : format_real(std::abs(im)) + "i";
    } else {
        coeff = "(" + format_real(re) + (im < 0.0 ? "-" : "+") +
                (std::abs(im) == 1.0 ? "" : format_real(std::abs(im))) + "i)";
    }
    if (m.is_unit()) {
        body = coeff;
    } else if (im == 0.0 && std::abs(re) == 1.0) {
        body = format_monomial(m);
    } else {
        body = coeff + "*" + format_monomial(m);
    }
    return negative;
}

}  // namespace detail

/// Parses text into a canonical TracePoly over d generators. Throws ParseError
/// (carrying the byte offset) on malformed input or out-of-range generators.
[[nodiscard]] inline TracePoly parse_expression(std::string_view text, int d) {
    if (d < 1) throw std::invalid_argument("parse_expression: generator count must be at least 1");
    return detail::ExpressionParser(text, d).parse();
}

/// Deterministic printer; term order follows the Monomial order.
[[nodiscard]] inline std::string format_expression(const TracePoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        std::string body;
        const bool negative = detail::format_term(body, m, c);
        if (first) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        out += body;
        first = false;
    }
    return out;
}

}  // namespace concomitant
