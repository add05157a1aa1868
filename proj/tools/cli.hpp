#pragma once

// concomitant command-line front end. run() is separate from main() so the
// test suites can drive it in-process.
//
// Exit codes: 0 success, 1 a property check failed (its report is printed),
// 2 usage or input error (one-line diagnostic on stderr).

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "concomitant/concomitant.hpp"

namespace concomitant::cli {

using nlohmann::json;

/// Input problem that maps to exit code 2.
class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    std::istream& in;
    std::ostream& out;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::size_t trials = 100;
    bool json_mode = false;
    std::optional<int> d;
    std::optional<int> n;

    [[nodiscard]] double tol_or(double fallback) const { return tol.value_or(fallback); }
};

inline json read_json(Context& ctx, const std::string& path) {
    try {
        if (path.empty() || path == "-") return json::parse(ctx.in);
        std::ifstream f(path);
        if (!f) throw InputError("cannot open '" + path + "'");
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

inline MatTuple read_tuple(Context& ctx, const std::string& path) { return io::mattuple_from_json(read_json(ctx, path)); }

/// Generator count: --d if given, else the largest Xk index in the text (at least 1).
inline int infer_d(const Context& ctx, const std::string& expr) {
    if (ctx.d) return *ctx.d;
    int d = 1;
    static const std::regex gen("X\\s*([0-9]+)");
    for (auto it = std::sregex_iterator(expr.begin(), expr.end(), gen); it != std::sregex_iterator(); ++it) {
        try {
            d = std::max(d, std::stoi((*it)[1].str()));
        } catch (const std::out_of_range&) {
        }
    }
    return d;
}

inline TracePoly read_poly(const std::string& expr, int d) { return parse_expression(expr, d); }

inline json coeff_terms(const TracePoly& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) {
        json traces = json::array();
        for (const auto& t : m.traces) {
            const char* kind = t.kind == TraceKind::trace ? "tr" : t.kind == TraceKind::normalized ? "ntr" : "dim";
            traces.push_back(json{{"kind", kind}, {"cycle", t.cycle.letters}});
        }
        terms.push_back(json{{"coeff", io::to_json(c)}, {"traces", std::move(traces)}, {"word", m.word.letters}});
    }
    return terms;
}

inline void print_value(Context& ctx, const json& j) { ctx.out << j.dump() << '\n'; }

inline std::string complex_text(Complex c) { return io::to_json(c).dump(); }

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trace polynomials, matrix concomitants and the quotient of matrix tuples under conjugation",
                 "concomitant"};
    app.require_subcommand(1);
    app.fallthrough();

    Context ctx{in, out};
    if (const char* env = std::getenv("CONCOMITANT_SEED")) {
        try {
            ctx.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: CONCOMITANT_SEED is not an unsigned integer\n";
            return 2;
        }
    }
    double tol_value = 0.0;
    int d_value = 0;
    int n_value = 0;
    auto* tol_opt = app.add_option("--tol", tol_value, "tolerance (each command has its own default)");
    auto* d_opt = app.add_option("--d", d_value, "number of generators / tuple length")->check(CLI::PositiveNumber);
    auto* n_opt = app.add_option("--n", n_value, "matrix size")->check(CLI::PositiveNumber);
    app.add_option("--seed", ctx.seed, "random seed (default: $CONCOMITANT_SEED or 0)");
    app.add_option("--trials", ctx.trials, "number of random trials")->check(CLI::PositiveNumber);
    app.add_flag("--json", ctx.json_mode, "machine-readable JSON output");

    std::string expr;
    std::string file;
    std::string other;
    std::string group_name = "G";
    bool csv = false;

    auto add_expr = [&](CLI::App* sub) { sub->add_option("--expr,-e", expr, "polynomial in the expression grammar")->required(); };
    auto add_file = [&](CLI::App* sub, const char* what) { sub->add_option("--file,-f", file, what); };
    auto add_group = [&](CLI::App* sub) {
        sub->add_option("--group", group_name, "conjugating group: G (GL_n) or K (U_n)")
            ->check(CLI::IsMember({"G", "K"}));
    };

    auto* parse_cmd = app.add_subcommand("parse", "parse and print an expression in canonical form");
    add_expr(parse_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression at a tuple");
    add_expr(eval_cmd);
    add_file(eval_cmd, "MatTuple JSON (default: stdin)");

    auto* equiv_cmd = app.add_subcommand("equivariance", "randomized check of f(s^-1 z s) = s^-1 f(z) s");
    add_expr(equiv_cmd);
    add_group(equiv_cmd);

    auto* gens_cmd = app.add_subcommand("generators", "trace generators of the invariant ring");

    auto* coords_cmd = app.add_subcommand("coords", "invariant coordinates of a tuple");
    add_file(coords_cmd, "MatTuple JSON (default: stdin)");

    auto* coords22_cmd = app.add_subcommand("coords22", "(tr Z1, tr Z2, det Z1, det Z2, tr Z1Z2) for a 2x2 pair");
    add_file(coords22_cmd, "MatTuple JSON (default: stdin)");

    auto* similar_cmd = app.add_subcommand("similar", "find S with S^-1 Z_i S = W_i");
    add_file(similar_cmd, "first MatTuple JSON (default: stdin)");
    similar_cmd->add_option("--other", other, "second MatTuple JSON")->required();

    auto* irr_cmd = app.add_subcommand("irreducible", "test whether the tuple generates M_n");
    add_file(irr_cmd, "MatTuple JSON (default: stdin)");

    auto* subspace_cmd = app.add_subcommand("subspace", "search for a common invariant subspace");
    add_file(subspace_cmd, "MatTuple JSON (default: stdin)");

    std::size_t samples = 1024;
    auto* reyn_cmd = app.add_subcommand("reynolds", "Haar average of k f(k^-1 z k) k^-1");
    add_expr(reyn_cmd);
    add_file(reyn_cmd, "MatTuple JSON (default: stdin)");
    reyn_cmd->add_option("--samples", samples, "number of Haar samples")->check(CLI::PositiveNumber);

    auto* expect_cmd = app.add_subcommand("expect", "conditional expectation T(p) = ntr(p)");
    add_expr(expect_cmd);

    auto* fiber_cmd = app.add_subcommand("fiber-eq", "test [z, A] == [w, B] in the associated bundle");
    add_file(fiber_cmd, "first FiberPoint JSON (default: stdin)");
    fiber_cmd->add_option("--other", other, "second FiberPoint JSON")->required();
    add_group(fiber_cmd);

    std::string center_file;
    std::string direction_file;
    double radius = 1.0;
    std::size_t boundary = 256;
    std::size_t interior = 256;
    auto* maxmod_cmd = app.add_subcommand("maxmod", "maximum-modulus check on an analytic disc");
    add_expr(maxmod_cmd);
    maxmod_cmd->add_option("--center", center_file, "center MatTuple JSON (default: random)");
    maxmod_cmd->add_option("--direction", direction_file, "direction MatTuple JSON (default: random)");
    maxmod_cmd->add_option("--radius", radius, "disc radius")->check(CLI::PositiveNumber);
    maxmod_cmd->add_option("--boundary", boundary, "boundary samples")->check(CLI::Range(3, 1 << 20));
    maxmod_cmd->add_option("--interior", interior, "interior samples")->check(CLI::PositiveNumber);
    maxmod_cmd->add_flag("--csv", csv, "emit lambda_re,lambda_im,modulus,boundary rows");

    std::size_t steps = 11;
    auto* nonext_cmd = app.add_subcommand("nonextension", "1/|det[Z1, t Z2]| as t halves");
    nonext_cmd->add_option("--steps", steps, "number of halvings")->check(CLI::Range(2, 1000));
    add_file(nonext_cmd, "pair used at t = 1 (default: diag(1,-1), [[0,1],[1,0]])");
    nonext_cmd->add_flag("--csv", csv, "emit t,value rows");

    int k_value = 1;
    auto* xk_cmd = app.add_subcommand("xk-dim", "numerical dimension of the stratum X_k");
    xk_cmd->add_option("--k", k_value, "invariant subspace dimension")->required();

    auto* pit_cmd = app.add_subcommand("pit", "randomized identity test on M_n");
    add_expr(pit_cmd);

    auto* central_cmd = app.add_subcommand("central", "randomized centrality test on M_n");
    add_expr(central_cmd);

    int wi = 1;
    int wj = 2;
    auto* wagner_cmd = app.add_subcommand("wagner", "c with [Z_i, Z_j]^2 = c I for 2x2 matrices");
    add_file(wagner_cmd, "MatTuple JSON (default: stdin)");
    wagner_cmd->add_option("--i", wi, "first index (1-based)");
    wagner_cmd->add_option("--j", wj, "second index (1-based)");

    int max_len = 2;
    auto* rv_cmd = app.add_subcommand("rv-normalize", "central polynomial p with p(z) = I");
    add_file(rv_cmd, "MatTuple JSON (default: stdin)");
    rv_cmd->add_option("--max-len", max_len, "maximum word length")->check(CLI::PositiveNumber);

    double delta = 0.5;
    std::size_t count = 100;
    auto* cover_cmd = app.add_subcommand("cover", "central partition-of-unity cover of sample tuples");
    cover_cmd->add_option("--file,-f", file, "JSON array of MatTuples (default: random disc samples)");
    cover_cmd->add_option("--count", count, "number of random disc samples")->check(CLI::PositiveNumber);
    cover_cmd->add_option("--max-len", max_len, "maximum word length")->check(CLI::PositiveNumber);
    cover_cmd->add_option("--delta", delta, "coverage floor")->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.push_back("concomitant");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (tol_opt->count() > 0) ctx.tol = tol_value;
    if (d_opt->count() > 0) ctx.d = d_value;
    if (n_opt->count() > 0) ctx.n = n_value;

    const Group group = group_name == "K" ? Group::K : Group::G;

    try {
        if (*parse_cmd) {
            const TracePoly p = read_poly(expr, infer_d(ctx, expr));
            const std::string text = format_expression(p);
            if (ctx.json_mode) {
                print_value(ctx, json{{"d", p.generators()}, {"expr", text}, {"terms", coeff_terms(p)}});
            } else {
                out << text << '\n';
            }
            return 0;
        }
        if (*eval_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const Matrix v = evaluate(read_poly(expr, z.d()), z);
            print_value(ctx, ctx.json_mode ? json{{"matrix", io::to_json(v)}} : io::to_json(v));
            return 0;
        }
        if (*equiv_cmd) {
            const TracePoly p = read_poly(expr, infer_d(ctx, expr));
            const CheckReport r = check_equivariance(p, ctx.n.value_or(2), group, ctx.trials, ctx.tol_or(1e-8), ctx.seed);
            print_value(ctx, io::to_json(r));
            return r.pass ? 0 : 1;
        }
        if (*gens_cmd) {
            if (!ctx.d || !ctx.n) throw InputError("generators needs --d and --n");
            const GeneratorList g = enumerate_trace_generators(*ctx.d, *ctx.n);
            json list = json::array();
            for (const auto& p : g.gens) list.push_back(format_expression(p));
            if (ctx.json_mode) {
                print_value(ctx, json{{"d", g.d}, {"n", g.n}, {"count", g.size()}, {"generators", list}});
            } else {
                for (const auto& s : list) out << s.get<std::string>() << '\n';
            }
            return 0;
        }
        if (*coords_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const GeneratorList g = enumerate_trace_generators(z.d(), z.n());
            const InvariantCoords c = quotient_coords(z, g);
            if (ctx.json_mode) {
                json list = json::array();
                for (const auto& p : g.gens) list.push_back(format_expression(p));
                print_value(ctx, json{{"generators", list}, {"coords", io::to_json(c.values)}});
            } else {
                print_value(ctx, io::to_json(c.values));
            }
            return 0;
        }
        if (*coords22_cmd) {
            const auto c = coords22(read_tuple(ctx, file));
            const json v = io::to_json(std::vector<Complex>(c.begin(), c.end()));
            print_value(ctx, ctx.json_mode ? json{{"coords22", v}} : v);
            return 0;
        }
        if (*similar_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const MatTuple w = io::mattuple_from_json(read_json(ctx, other));
            const TransportResult r = transport_analysis(z, w, ctx.tol_or(1e-8));
            const json s = r.conjugator ? io::to_json(*r.conjugator) : json(nullptr);
            if (ctx.json_mode) {
                print_value(ctx, json{{"conjugator", s}, {"null_dimension", r.null_dimension}, {"residual", r.residual}});
            } else {
                print_value(ctx, s);
            }
            return 0;
        }
        if (*irr_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const int dim = word_span_dimension(z);
            const bool irr = dim == z.n() * z.n();
            if (ctx.json_mode) {
                print_value(ctx, json{{"irreducible", irr}, {"span_dimension", dim}, {"n", z.n()}});
            } else {
                out << (irr ? "true" : "false") << '\n';
            }
            return 0;
        }
        if (*subspace_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const auto basis = find_invariant_subspace(z, ctx.tol_or(1e-8));
            const json b = basis ? io::to_json(*basis) : json(nullptr);
            if (ctx.json_mode) {
                print_value(ctx, json{{"dimension", basis ? basis->cols() : 0}, {"basis", b}});
            } else {
                print_value(ctx, b);
            }
            return 0;
        }
        if (*reyn_cmd) {
            const MatTuple z = read_tuple(ctx, file);
            const ReynoldsEstimate r = reynolds_average(as_map(read_poly(expr, z.d())), z, samples, ctx.seed);
            if (ctx.json_mode) {
                print_value(ctx, json{{"mean", io::to_json(r.mean)}, {"spread", r.spread}, {"samples", samples}, {"seed", ctx.seed}});
            } else {
                print_value(ctx, io::to_json(r.mean));
            }
            return 0;
        }
        if (*expect_cmd) {
            const TracePoly p = read_poly(expr, infer_d(ctx, expr));
            const std::string text = format_expression(conditional_expectation(p, ctx.n.value_or(2)));
            if (ctx.json_mode) {
                print_value(ctx, json{{"expr", text}});
            } else {
                out << text << '\n';
            }
            return 0;
        }
        if (*fiber_cmd) {
            const FiberPoint a = io::fiberpoint_from_json(read_json(ctx, file));
            const FiberPoint b = io::fiberpoint_from_json(read_json(ctx, other));
            const bool eq = fiber_pair_equivalent(a, b, group, ctx.tol_or(1e-8));
            if (ctx.json_mode) {
                print_value(ctx, json{{"equivalent", eq}, {"group", group_name}});
            } else {
                out << (eq ? "true" : "false") << '\n';
            }
            return 0;
        }
        if (*maxmod_cmd) {
            const int d = infer_d(ctx, expr);
            const int n = ctx.n.value_or(2);
            const TracePoly f = read_poly(expr, d);
            CounterRng rng(ctx.seed);
            const MatTuple center = center_file.empty() ? random_tuple(d, n, Ensemble::ginibre(), rng)
                                                        : io::mattuple_from_json(read_json(ctx, center_file));
            const MatTuple direction = direction_file.empty()
                                           ? random_tuple(center.d(), center.n(), Ensemble::ginibre(), rng)
                                           : io::mattuple_from_json(read_json(ctx, direction_file));
            if (csv) {
                out << "lambda_re,lambda_im,modulus,boundary\n";
                for (const auto& s : disc_profile(f, center, direction, radius, boundary, interior)) {
                    out << json(s.lambda.real()).dump() << ',' << json(s.lambda.imag()).dump() << ','
                        << json(s.modulus).dump() << ',' << (s.boundary ? 1 : 0) << '\n';
                }
                return 0;
            }
            CheckReport r = max_modulus_disc_check(f, center, direction, radius, boundary, interior, ctx.tol_or(1e-9));
            r.seed = ctx.seed;
            print_value(ctx, io::to_json(r));
            return r.pass ? 0 : 1;
        }
        if (*nonext_cmd) {
            const auto seq = file.empty() ? nonextension_witness(steps)
                                          : nonextension_profile(read_tuple(ctx, file), steps);
            if (csv) {
                out << "t,value\n";
                for (const auto& [t, v] : seq) out << json(t).dump() << ',' << json(v).dump() << '\n';
            } else if (ctx.json_mode) {
                json rows = json::array();
                for (const auto& [t, v] : seq) rows.push_back(json{{"t", t}, {"value", v}});
                print_value(ctx, json{{"path", rows}});
            } else {
                for (const auto& [t, v] : seq) out << json(t).dump() << ' ' << json(v).dump() << '\n';
            }
            return 0;
        }
        if (*xk_cmd) {
            if (!ctx.d || !ctx.n) throw InputError("xk-dim needs --d and --n");
            const int dim = xk_dimension_estimate(*ctx.d, *ctx.n, k_value, ctx.seed, ctx.tol_or(1e-7));
            if (ctx.json_mode) {
                print_value(ctx, json{{"d", *ctx.d}, {"n", *ctx.n}, {"k", k_value}, {"dimension", dim},
                                      {"formula", xk_expected_dimension(*ctx.d, *ctx.n, k_value)}});
            } else {
                out << dim << '\n';
            }
            return 0;
        }
        if (*pit_cmd || *central_cmd) {
            const TracePoly p = read_poly(expr, infer_d(ctx, expr));
            const int n = ctx.n.value_or(2);
            const IdentityVerdict v = *pit_cmd ? is_identity(p, n, ctx.trials, ctx.seed, ctx.tol_or(1e-10))
                                               : is_central(p, n, ctx.trials, ctx.seed, ctx.tol_or(1e-10));
            if (ctx.json_mode) {
                print_value(ctx, json{{"verdict", v.verdict},
                                      {"trials", v.trials},
                                      {"max_defect", v.max_defect},
                                      {"reason", v.reason},
                                      {"witness", v.witness ? io::to_json(*v.witness) : json(nullptr)}});
            } else {
                out << (v.verdict ? "true" : "false") << '\n';
            }
            return 0;
        }
        if (*wagner_cmd) {
            const Complex c = wagner_scalar(read_tuple(ctx, file), wi, wj);
            print_value(ctx, ctx.json_mode ? json{{"c", io::to_json(c)}} : io::to_json(c));
            return 0;
        }
        if (*rv_cmd) {
            const RvNormalization r = rv_normalize_detailed(read_tuple(ctx, file), max_len);
            const std::string text = format_expression(r.poly);
            if (ctx.json_mode) {
                print_value(ctx, json{{"expr", text}, {"u", r.u.letters}, {"v", r.v.letters}, {"det", io::to_json(r.det)}});
            } else {
                out << text << '\n';
            }
            return 0;
        }
        if (*cover_cmd) {
            std::vector<MatTuple> pts;
            if (!file.empty()) {
                const json j = read_json(ctx, file);
                if (!j.is_array()) throw InputError("cover --file expects a JSON array of MatTuples");
                for (const auto& e : j) pts.push_back(io::mattuple_from_json(e));
            } else {
                CounterRng rng(ctx.seed);
                for (std::size_t i = 0; i < count; ++i) {
                    pts.push_back(random_tuple(ctx.d.value_or(2), 2, Ensemble::disc(), rng));
                }
            }
            const auto polys = partition_of_unity(pts, max_len, delta);
            json list = json::array();
            for (const auto& p : polys) list.push_back(format_expression(p));
            if (ctx.json_mode) {
                print_value(ctx, json{{"size", polys.size()}, {"samples", pts.size()}, {"delta", delta}, {"polys", list}});
            } else {
                for (const auto& s : list) out << s.get<std::string>() << '\n';
            }
            return 0;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace concomitant::cli
