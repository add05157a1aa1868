#pragma once

// Randomized checks of the concomitant equation f(s^{-1} z s) = s^{-1} f(z) s,
// Haar (Reynolds) averaging, the trace expectation onto the center, fiber-pair
// equivalence in V x_G M_n, maximum-modulus checks on analytic discs and the
// blow-up of 1/det[Z1,Z2] toward the reducible locus.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "concomitant/invariants.hpp"
#include "concomitant/io.hpp"
#include "concomitant/mattuple.hpp"
#include "concomitant/ncpoly.hpp"
#include "concomitant/rng.hpp"

namespace concomitant {

/// Outcome of a randomized property check. pass == (max_defect <= tolerance).
struct CheckReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double max_defect = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<std::string> witnesses;  // JSON text, at most max_witnesses

    static constexpr std::size_t max_witnesses = 3;

    void record(double defect, const std::function<nlohmann::json()>& witness) {
        max_defect = std::max(max_defect, defect);
        if (!(defect <= tolerance)) {
            pass = false;
            if (witnesses.size() < max_witnesses) witnesses.push_back(witness().dump());
        }
    }
};

namespace io {

[[nodiscard]] inline json to_json(const CheckReport& r) {
    json w = json::array();
    for (const auto& s : r.witnesses) w.push_back(json::parse(s));
    return json{{"trials", r.trials},         {"seed", r.seed},
                {"max_defect", r.max_defect}, {"tolerance", r.tolerance},
                {"verdict", r.pass ? "pass" : "fail"}, {"witnesses", std::move(w)}};
}

}  // namespace io

/// Conjugating group: G = GL_n (Ginibre conjugators) or K = U_n (Haar).
enum class Group { G, K };

using MatrixMap = std::function<Matrix(const MatTuple&)>;

[[nodiscard]] inline MatrixMap as_map(const TracePoly& p) {
    return [p](const MatTuple& z) { return evaluate(p, z); };
}

/// Samples (z, s) with z Ginibre and s from the group; the defect of a trial is
/// |f(s^{-1} z s) - s^{-1} f(z) s| / (1 + |f(z)|) in Frobenius norm. Ginibre
/// conjugators are resampled above condition number 1e2.
[[nodiscard]] inline CheckReport check_equivariance(const MatrixMap& f, int d, int n, Group group,
                                                    std::size_t trials, double tol, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("check_equivariance: trials must be at least 1");
    CheckReport report;
    report.trials = trials;
    report.seed = seed;
    report.tolerance = tol;
    const CounterRng root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng = root.split(t);
        const MatTuple z = random_tuple(d, n, Ensemble::ginibre(), rng);
        const Matrix s = group == Group::G ? random_invertible(n, rng) : haar_unitary(n, rng);
        const Matrix fz = f(z);
        const Matrix lhs = f(conjugate(z, s));
        const Matrix rhs = conjugate_matrix(fz, s);
        const double defect = (lhs - rhs).norm() / (1.0 + fz.norm());
        report.record(defect, [&] {
            return io::json{{"z", io::to_json(z)}, {"s", io::to_json(s)}, {"defect", defect}};
        });
    }
    return report;
}

[[nodiscard]] inline CheckReport check_equivariance(const TracePoly& p, int n, Group group, std::size_t trials,
                                                    double tol, std::uint64_t seed) {
    return check_equivariance(as_map(p), p.generators(), n, group, trials, tol, seed);
}

// ---------------------------------------------------------------------------
// Reynolds averaging over the unitary group

struct ReynoldsEstimate {
    Matrix mean;
    /// max_j |T_j - T_0| / (1 + |T_0|) over the sample terms T_j = k_j f(k_j^* z k_j) k_j^*.
    double spread = 0.0;
};

/// Monte-Carlo estimate of the Haar integral of k f(k^{-1} z k) k^{-1}. The
/// sample set depends only on (n, samples, seed), so estimates at different
/// base points share their random numbers.
[[nodiscard]] inline ReynoldsEstimate reynolds_average(const MatrixMap& f, const MatTuple& z, std::size_t samples,
                                                       std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("reynolds_average: samples must be at least 1");
    const int n = z.n();
    CounterRng rng(seed);
    ReynoldsEstimate out{Matrix::Zero(n, n), 0.0};
    Matrix first;
    for (std::size_t j = 0; j < samples; ++j) {
        const Matrix k = haar_unitary(n, rng);
        std::vector<Matrix> moved;
        moved.reserve(static_cast<std::size_t>(z.d()));
        for (const auto& zi : z.matrices()) moved.push_back(k.adjoint() * zi * k);
        const Matrix term = k * f(MatTuple(std::move(moved))) * k.adjoint();
        if (j == 0) {
            first = term;
        } else {
            out.spread = std::max(out.spread, (term - first).norm() / (1.0 + first.norm()));
        }
        out.mean += term;
    }
    out.mean /= static_cast<double>(samples);
    return out;
}

// ---------------------------------------------------------------------------
// Conditional expectation onto the center

/// T(p): every plain word w becomes the scalar ntr(w) = tr(w)/n. The result is
/// pure-scalar; n enters only at evaluation through ntr.
[[nodiscard]] inline TracePoly conditional_expectation(const TracePoly& p, int n) {
    if (n < 1) throw std::invalid_argument("conditional_expectation: n must be at least 1");
    return normalized_trace(p);
}

// ---------------------------------------------------------------------------
// Fiber pairs

/// [a.base, a.value] == [b.base, b.value]: some S carries a.base to b.base and
/// S^{-1} a.value S to b.value. For K, S must be a scalar multiple of a unitary.
[[nodiscard]] inline bool fiber_pair_equivalent(const FiberPoint& a, const FiberPoint& b, Group group,
                                                double tol = 1e-8) {
    a.base.check_same_shape(b.base);
    const TransportResult tr = transport_analysis(a.base, b.base, tol);
    if (!tr.conjugator) return false;
    const Matrix& s = *tr.conjugator;
    const int n = a.base.n();
    const MatTuple moved = conjugate(a.base, s);
    for (int i = 0; i < moved.d(); ++i) {
        if ((moved[i] - b.base[i]).norm() > tol * (1.0 + b.base[i].norm())) return false;
    }
    if ((conjugate_matrix(a.value, s) - b.value).norm() > tol * (1.0 + b.value.norm())) return false;
    if (group == Group::K) {
        const Matrix g = s.adjoint() * s;
        const Matrix off = g - (g.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
        if (off.norm() > tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Maximum modulus on analytic discs  lambda -> center + lambda * direction

struct DiscSample {
    Complex lambda;
    double modulus = 0.0;
    bool boundary = false;
};

namespace detail {

inline void check_disc_args(const TracePoly& f, const MatTuple& center, const MatTuple& direction, double radius) {
    if (!f.is_pure_scalar()) throw std::invalid_argument("max-modulus check needs a pure-scalar polynomial");
    center.check_same_shape(direction);
    if (!(radius > 0.0)) throw std::invalid_argument("max-modulus check needs a positive radius");
}

inline double disc_modulus(const TracePoly& f, const MatTuple& center, const MatTuple& direction, Complex lambda) {
    return std::abs(evaluate_scalar(f, center + lambda * direction));
}

}  // namespace detail

/// Boundary points evenly spaced on |lambda| = radius, interior points on a
/// sunflower (Vogel) spiral strictly inside.
[[nodiscard]] inline std::vector<DiscSample> disc_profile(const TracePoly& f, const MatTuple& center,
                                                          const MatTuple& direction, double radius,
                                                          std::size_t boundary_samples, std::size_t interior_samples) {
    detail::check_disc_args(f, center, direction, radius);
    std::vector<DiscSample> out;
    out.reserve(boundary_samples + interior_samples);
    for (std::size_t j = 0; j < boundary_samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(boundary_samples);
        const Complex lambda = std::polar(radius, theta);
        out.push_back({lambda, detail::disc_modulus(f, center, direction, lambda), true});
    }
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t j = 0; j < interior_samples; ++j) {
        const double rho = radius * std::sqrt((static_cast<double>(j) + 0.5) / static_cast<double>(interior_samples));
        const Complex lambda = std::polar(rho, golden_angle * static_cast<double>(j));
        out.push_back({lambda, detail::disc_modulus(f, center, direction, lambda), false});
    }
    return out;
}

/// Passes when max |f| over the interior samples is at most the boundary
/// maximum plus tol. The boundary maximum is refined by golden-section search
/// around the best few boundary samples.
[[nodiscard]] inline CheckReport max_modulus_disc_check(const TracePoly& f, const MatTuple& center,
                                                        const MatTuple& direction, double radius,
                                                        std::size_t boundary_samples, std::size_t interior_samples,
                                                        double tol) {
    if (boundary_samples < 3 || interior_samples < 1) {
        throw std::invalid_argument("max-modulus check needs >= 3 boundary and >= 1 interior samples");
    }
    const auto samples = disc_profile(f, center, direction, radius, boundary_samples, interior_samples);
    double boundary_max = 0.0;
    double interior_max = 0.0;
    Complex interior_arg = 0.0;
    std::vector<std::pair<double, double>> boundary;  // (modulus, theta)
    for (const auto& s : samples) {
        if (s.boundary) {
            boundary.emplace_back(s.modulus, std::arg(s.lambda));
            boundary_max = std::max(boundary_max, s.modulus);
        } else if (s.modulus > interior_max) {
            interior_max = s.modulus;
            interior_arg = s.lambda;
        }
    }
    std::sort(boundary.begin(), boundary.end(), std::greater<>{});
    const double spacing = 2.0 * std::numbers::pi / static_cast<double>(boundary_samples);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto modulus_at = [&](double theta) {
        return detail::disc_modulus(f, center, direction, std::polar(radius, theta));
    };
    for (std::size_t c = 0; c < std::min<std::size_t>(3, boundary.size()); ++c) {
        double lo = boundary[c].second - spacing;
        double hi = boundary[c].second + spacing;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = modulus_at(x1);
        double f2 = modulus_at(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = modulus_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = modulus_at(x1);
            }
        }
        boundary_max = std::max({boundary_max, f1, f2});
    }

    CheckReport report;
    report.trials = samples.size();
    report.tolerance = tol;
    report.record(std::max(0.0, interior_max - boundary_max), [&] {
        return io::json{{"lambda", io::to_json(interior_arg)},
                        {"interior_max", interior_max},
                        {"boundary_max", boundary_max}};
    });
    return report;
}

// ---------------------------------------------------------------------------
// Non-extension witness

/// Along z_t = (Z1, t Z2), t = 1, 1/2, 1/4, ..., reports (t, 1/|det[Z1, t Z2]|).
[[nodiscard]] inline std::vector<std::pair<double, double>> nonextension_profile(const MatTuple& at_one,
                                                                                 std::size_t steps) {
    if (at_one.d() != 2 || at_one.n() != 2) throw std::invalid_argument("nonextension: needs a pair of 2x2 matrices");
    if (steps < 2) throw std::invalid_argument("nonextension: steps must be at least 2");
    std::vector<std::pair<double, double>> out;
    out.reserve(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        const double t = std::ldexp(1.0, -static_cast<int>(j));
        const Matrix c = linalg::commutator(at_one[0], t * at_one[1]);
        out.emplace_back(t, 1.0 / std::abs(c.determinant()));
    }
    return out;
}

/// The documented path Z1 = diag(1, -1), Z2 = [[0,1],[1,0]], where
/// det[Z1, t Z2] = 4 t^2.
[[nodiscard]] inline MatTuple nonextension_default_pair() {
    Matrix z1 = Matrix::Zero(2, 2);
    z1(0, 0) = 1.0;
    z1(1, 1) = -1.0;
    Matrix z2 = Matrix::Zero(2, 2);
    z2(0, 1) = 1.0;
    z2(1, 0) = 1.0;
    return MatTuple({z1, z2});
}

[[nodiscard]] inline std::vector<std::pair<double, double>> nonextension_witness(std::size_t steps) {
    return nonextension_profile(nonextension_default_pair(), steps);
}

}  // namespace concomitant
