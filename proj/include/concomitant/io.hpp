#pragma once

// JSON forms.
//   complex:  [re, im]
//   matrix:   row-major array of rows of complex
//   MatTuple: {"d": int, "n": int, "matrices": [matrix, ...]}
//   FiberPoint: {"base": MatTuple, "value": matrix}

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "concomitant/mattuple.hpp"

namespace concomitant::io {

using nlohmann::json;

/// Malformed JSON document for one of the formats above.
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[nodiscard]] inline json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

[[nodiscard]] inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(Complex(m(i, j))));
        rows.push_back(std::move(row));
    }
    return rows;
}

[[nodiscard]] inline json to_json(const MatTuple& z) {
    json mats = json::array();
    for (const auto& m : z.matrices()) mats.push_back(to_json(m));
    return json{{"d", z.d()}, {"n", z.n()}, {"matrices", std::move(mats)}};
}

[[nodiscard]] inline json to_json(const FiberPoint& f) {
    return json{{"base", to_json(f.base)}, {"value", to_json(f.value)}};
}

[[nodiscard]] inline json to_json(const std::vector<Complex>& v) {
    json out = json::array();
    for (Complex c : v) out.push_back(to_json(c));
    return out;
}

[[nodiscard]] inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("expected [re, im] pair, got " + j.dump());
    }
    const Complex c{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw FormatError("non-finite matrix entry");
    return c;
}

[[nodiscard]] inline Matrix matrix_from_json(const json& j, Eigen::Index n) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
        throw FormatError("expected " + std::to_string(n) + " rows");
    }
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw FormatError("row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
        }
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

/// Square matrix whose size is inferred from the row count.
[[nodiscard]] inline Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty array of rows");
    return matrix_from_json(j, static_cast<Eigen::Index>(j.size()));
}

[[nodiscard]] inline MatTuple mattuple_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("MatTuple must be a JSON object");
    for (const char* key : {"d", "n", "matrices"}) {
        if (!j.contains(key)) throw FormatError(std::string("MatTuple missing key '") + key + "'");
    }
    if (!j["d"].is_number_integer() || !j["n"].is_number_integer()) throw FormatError("d and n must be integers");
    const auto d = j["d"].get<long long>();
    const auto n = j["n"].get<long long>();
    if (d < 1 || n < 1) throw FormatError("d and n must be positive");
    const json& mats = j["matrices"];
    if (!mats.is_array() || static_cast<long long>(mats.size()) != d) {
        throw FormatError("expected " + std::to_string(d) + " matrices");
    }
    std::vector<Matrix> out;
    for (const auto& m : mats) out.push_back(matrix_from_json(m, static_cast<Eigen::Index>(n)));
    return MatTuple(std::move(out));
}

[[nodiscard]] inline FiberPoint fiberpoint_from_json(const json& j) {
    if (!j.is_object() || !j.contains("base") || !j.contains("value")) {
        throw FormatError("FiberPoint must be an object with 'base' and 'value'");
    }
    MatTuple base = mattuple_from_json(j["base"]);
    Matrix value = matrix_from_json(j["value"], base.n());
    return FiberPoint(std::move(base), std::move(value));
}

}  // namespace concomitant::io
