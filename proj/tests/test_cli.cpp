#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"
#include "oracles.hpp"

using namespace concomitant;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const json& j) {
    const auto path = std::filesystem::temp_directory_path() / ("concomitant_test_" + name + ".json");
    std::ofstream(path) << j.dump();
    return path.string();
}

json pair_json(const Matrix& a, const Matrix& b) { return io::to_json(MatTuple({a, b})); }

}  // namespace

TEST(Cli, Coords22OnIdentityPair) {
    const auto file = write_temp("ii", pair_json(Matrix::Identity(2, 2), Matrix::Identity(2, 2)));
    const Result r = run_cli({"coords22", "--file", file});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out), json::parse("[[2,0],[2,0],[1,0],[1,0],[2,0]]"));
}

TEST(Cli, TupleFromStdin) {
    const Result r = run_cli({"coords22"}, pair_json(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).dump());
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)[4], json::parse("[2,0]"));
}

TEST(Cli, EquivariancePasses) {
    const Result r = run_cli({"equivariance", "--expr", "tr(X1)*X2", "--d", "2", "--n", "3", "--trials", "100",
                              "--seed", "7"});
    EXPECT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["trials"], 100);
    EXPECT_EQ(j["seed"], 7);
}

TEST(Cli, XkDimension) {
    const Result r = run_cli({"xk-dim", "--d", "2", "--n", "2", "--k", "1", "--seed", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "7\n");
}

TEST(Cli, ParseErrorsExitTwoWithPosition) {
    const Result r = run_cli({"parse", "--expr", "X1 + * X2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("position 5"), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, UsageAndInputErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"coords22"}, "{not json").code, 2);
    EXPECT_EQ(run_cli({"coords22"}, R"({"d":1,"n":2,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})").code, 2);
    EXPECT_EQ(run_cli({"eval", "--expr", "X3"}, pair_json(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).dump()).code,
              2);
    EXPECT_EQ(run_cli({"generators", "--d", "2"}).code, 2);
}

TEST(Cli, FailedCheckExitsOne) {
    // tr(X1) at a disc of radius 1 passes, but a negative tolerance cannot.
    const Result r = run_cli({"maxmod", "--expr", "tr(X1)", "--d", "1", "--n", "2", "--tol", "-1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.out)["verdict"], "fail");
}

TEST(Cli, ParseAndExpect) {
    EXPECT_EQ(run_cli({"parse", "--expr", "X2*X1 + X1"}).out, "X1 + X2*X1\n");
    EXPECT_EQ(run_cli({"expect", "--expr", "tr(X1)*X2 + 3"}).out, "3 + tr(X1)*ntr(X2)\n");
}

TEST(Cli, IdentityAndCentralityVerdicts) {
    const std::string hall = "(X1*X2-X2*X1)^2*X3 - X3*(X1*X2-X2*X1)^2";
    EXPECT_EQ(run_cli({"pit", "--expr", hall, "--n", "2"}).out, "true\n");
    EXPECT_EQ(run_cli({"pit", "--expr", hall, "--n", "3"}).out, "false\n");
    EXPECT_EQ(run_cli({"central", "--expr", "(X1*X2-X2*X1)^2", "--n", "2"}).out, "true\n");
    EXPECT_EQ(run_cli({"central", "--expr", "X1 + 1", "--n", "2"}).code, 2);
}

TEST(Cli, WagnerAndRvNormalize) {
    const auto file = write_temp("ds", pair_json(oracle::diag({1.0, -1.0}), oracle::swap2()));
    EXPECT_EQ(json::parse(run_cli({"wagner", "--file", file}).out), json::parse("[-4,0]"));
    const Result r = run_cli({"rv-normalize", "--file", file, "--max-len", "1", "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["det"], json::parse("[4,0]"));
}

TEST(Cli, SimilarAndFiberEquivalence) {
    CounterRng rng(61);
    const MatTuple z = random_tuple(2, 3, Ensemble::ginibre(), rng);
    const Matrix s = random_invertible(3, rng);
    const MatTuple w = conjugate(z, s);
    const auto fz = write_temp("z", io::to_json(z));
    const auto fw = write_temp("w", io::to_json(w));
    const Result r = run_cli({"similar", "--file", fz, "--other", fw, "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["null_dimension"], 1);
    EXPECT_FALSE(json::parse(r.out)["conjugator"].is_null());

    const auto a = write_temp("fa", io::to_json(FiberPoint{z, z[0] * z[1]}));
    const auto b = write_temp("fb", io::to_json(FiberPoint{w, w[0] * w[1]}));
    EXPECT_EQ(run_cli({"fiber-eq", "--file", a, "--other", b}).out, "true\n");
    EXPECT_EQ(run_cli({"fiber-eq", "--file", a, "--other", b, "--group", "K"}).out, "false\n");
}

TEST(Cli, NonextensionCsv) {
    const Result r = run_cli({"nonextension", "--steps", "3", "--csv"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "t,value\n1.0,0.25\n0.5,1.0\n0.25,4.0\n");
}

TEST(Cli, SeedFromEnvironment) {
    ::setenv("CONCOMITANT_SEED", "11", 1);
    const Result a = run_cli({"equivariance", "--expr", "X1*X2", "--trials", "3"});
    ::unsetenv("CONCOMITANT_SEED");
    EXPECT_EQ(json::parse(a.out)["seed"], 11);
    const Result b = run_cli({"equivariance", "--expr", "X1*X2", "--trials", "3", "--seed", "11"});
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> commands{
        {"equivariance", "--expr", "tr(X1)*X2", "--n", "3", "--seed", "5", "--json"},
        {"reynolds", "--expr", "X1*X2", "--samples", "32", "--seed", "3"},
        {"maxmod", "--expr", "tr(X1*X2)", "--seed", "2", "--json"},
        {"cover", "--count", "20", "--seed", "4", "--json"},
        {"xk-dim", "--d", "3", "--n", "2", "--k", "1", "--seed", "9", "--json"},
        {"pit", "--expr", "X1*X2-X2*X1", "--n", "2", "--seed", "8", "--json"},
    };
    const std::string tuple = io::to_json(random_tuple(2, 2, Ensemble::ginibre(), 12)).dump();
    for (const auto& c : commands) {
        const Result a = run_cli(c, tuple);
        const Result b = run_cli(c, tuple);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << c.front();
        EXPECT_FALSE(a.out.empty()) << c.front() << a.err;
    }
}
