#include <gtest/gtest.h>

#include "concomitant/concomitants.hpp"
#include "concomitant/expression.hpp"
#include "concomitant/identities.hpp"
#include "oracles.hpp"

using namespace concomitant;
using oracle::diag;
using oracle::swap2;
using oracle::unit;

namespace {

const char* const hall = "(X1*X2-X2*X1)^2*X3 - X3*(X1*X2-X2*X1)^2";

MatTuple irreducible_pair(CounterRng& rng) {
    for (;;) {
        MatTuple z = random_tuple(2, 2, Ensemble::ginibre(), rng);
        if (is_irreducible(z)) return z;
    }
}

}  // namespace

TEST(Identity, Examples) {
    const TracePoly comm = parse_expression("X1*X2 - X2*X1", 2);
    EXPECT_TRUE(is_identity(comm, 1, 20, 1).verdict);
    EXPECT_TRUE(is_identity(parse_expression(hall, 3), 2, 50, 1).verdict);
    const IdentityVerdict v = is_identity(comm, 2, 20, 1);
    EXPECT_FALSE(v.verdict);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_GT(evaluate(comm, *v.witness).norm(), 1e-3);
}

TEST(Identity, HallStableAcrossSeeds) {
    const TracePoly p = parse_expression(hall, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_TRUE(is_identity(p, 2, 20, seed).verdict);
        EXPECT_FALSE(is_identity(p, 3, 20, seed).verdict);
    }
}

TEST(Identity, CayleyHamiltonAsTracePolynomial) {
    // X^2 - tr(X) X + det(X) I = 0 on 2x2 matrices.
    const TracePoly ch = parse_expression("X1^2 - tr(X1)*X1 + 0.5*tr(X1)^2 - 0.5*tr(X1^2)", 1);
    EXPECT_TRUE(is_identity(ch, 2, 50, 3).verdict);
    EXPECT_FALSE(is_identity(ch, 3, 50, 3).verdict);
}

// Verdicts do not change when every sample is conjugated: the polynomial's
// defect at s^{-1} z s is s^{-1} p(z) s.
TEST(Identity, ConjugationStable) {
    CounterRng rng(51);
    for (const char* e : {hall, "X1*X2 - X2*X1", "(X1*X2-X2*X1)^2"}) {
        const TracePoly p = parse_expression(e, 3);
        for (int trial = 0; trial < 20; ++trial) {
            const MatTuple z = random_tuple(3, 2, Ensemble::ginibre(), rng);
            const MatTuple w = conjugate(z, haar_unitary(2, rng));
            const Evaluation a = evaluate_detailed(p, z);
            const Evaluation b = evaluate_detailed(p, w);
            const bool va = a.value.norm() <= 1e-10 * (1.0 + a.scale);
            const bool vb = b.value.norm() <= 1e-10 * (1.0 + b.scale);
            EXPECT_EQ(va, vb) << e;
        }
    }
}

TEST(Central, Examples) {
    const TracePoly w = parse_expression("(X1*X2-X2*X1)^2", 2);
    EXPECT_TRUE(is_central(w, 2, 50, 1).verdict);
    const IdentityVerdict v3 = is_central(w, 3, 50, 1);
    EXPECT_FALSE(v3.verdict);
    EXPECT_TRUE(v3.witness.has_value());
    for (int n = 2; n <= 4; ++n) EXPECT_FALSE(is_central(TracePoly::generator(1, 1), n, 20, 1).verdict);
}

TEST(Central, IdentitiesAreNotCentral) {
    const IdentityVerdict v = is_central(parse_expression("X1*X2 - X2*X1", 2), 1, 10, 1);
    EXPECT_FALSE(v.verdict);
    EXPECT_FALSE(v.witness.has_value());
}

TEST(Central, RejectsConstantTerm) {
    EXPECT_THROW((void)is_central(parse_expression("X1 + 1", 1), 2, 10, 1), std::invalid_argument);
}

TEST(Wagner, Examples) {
    EXPECT_LE(std::abs(wagner_scalar(MatTuple({unit(2, 1, 2), unit(2, 2, 1)}), 1, 2) - 1.0), 1e-15);
    EXPECT_EQ(wagner_scalar(MatTuple({diag({1.0, 2.0}), diag({5.0, -1.0})}), 1, 2), Complex(0.0));
    // [Z1, Z2] = [[0,2],[-2,0]]; its square is -4 I.
    EXPECT_LE(std::abs(wagner_scalar(MatTuple({diag({1.0, -1.0}), swap2()}), 1, 2) + 4.0), 1e-15);
}

TEST(Wagner, Errors) {
    EXPECT_THROW((void)wagner_scalar(MatTuple::zeros(2, 3), 1, 2), std::invalid_argument);
    EXPECT_THROW((void)wagner_scalar(MatTuple::zeros(2, 2), 1, 1), std::invalid_argument);
    EXPECT_THROW((void)wagner_scalar(MatTuple::zeros(2, 2), 1, 3), std::invalid_argument);
}

TEST(Wagner, SquaredCommutatorIsScalar) {
    CounterRng rng(52);
    for (int trial = 0; trial < 1000; ++trial) {
        const MatTuple z = random_tuple(2, 2, Ensemble::ginibre(), rng);
        const Matrix c = linalg::commutator(z[0], z[1]);
        const double scale = 1.0 + z[0].squaredNorm() * z[1].squaredNorm();
        ASSERT_LE((c * c + c.determinant() * Matrix::Identity(2, 2)).norm(), 1e-10 * scale);
        ASSERT_LE((c * c - wagner_scalar(z, 1, 2) * Matrix::Identity(2, 2)).norm(), 1e-10 * scale);
    }
}

TEST(RvNormalize, MatrixUnits) {
    const MatTuple z({unit(2, 1, 2), unit(2, 2, 1)});
    const RvNormalization r = rv_normalize_detailed(z, 1);
    EXPECT_EQ(r.u, (Word{1}));
    EXPECT_EQ(r.v, (Word{2}));
    EXPECT_LE(oracle::coefficient_distance(r.poly, parse_expression("(X1*X2-X2*X1)^2", 2)), 1e-15);
}

TEST(RvNormalize, DiagonalAndSwap) {
    // det[Z1, Z2] = 4, so the scale is -1/4.
    const MatTuple z({diag({1.0, -1.0}), swap2()});
    const TracePoly p = rv_normalize(z, 1);
    EXPECT_LE(oracle::coefficient_distance(p, parse_expression("-0.25*(X1*X2-X2*X1)^2", 2)), 1e-15);
    EXPECT_LE((evaluate(p, z) - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(RvNormalize, RandomTuplesNormalizeToIdentity) {
    CounterRng rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const MatTuple z = irreducible_pair(rng);
        const TracePoly p = rv_normalize(z);
        EXPECT_LE((evaluate(p, z) - Matrix::Identity(2, 2)).norm(), 1e-8);
        EXPECT_TRUE(is_central(p, 2, 20, trial).verdict);
        EXPECT_TRUE(check_equivariance(p, 2, Group::G, 20, 1e-8, trial).pass);
        const MatTuple w = conjugate(z, random_invertible(2, rng));
        EXPECT_LE(std::abs(central_value(p, w) - central_value(p, z)), 1e-9);
    }
}

TEST(RvNormalize, Errors) {
    EXPECT_THROW((void)rv_normalize(MatTuple({diag({1.0, 2.0}), diag({3.0, 4.0})})), std::invalid_argument);
    EXPECT_THROW((void)rv_normalize(random_tuple(2, 3, Ensemble::ginibre(), 1)), std::invalid_argument);
}

TEST(PartitionOfUnity, SingleSample) {
    CounterRng rng(54);
    const MatTuple z = irreducible_pair(rng);
    const auto polys = partition_of_unity({z});
    ASSERT_EQ(polys.size(), 1u);
    EXPECT_LE(std::abs(central_value(polys[0], z) - 1.0), 1e-8);
}

TEST(PartitionOfUnity, OrbitNeedsOnePolynomial) {
    CounterRng rng(55);
    const MatTuple z = irreducible_pair(rng);
    std::vector<MatTuple> orbit{z};
    for (int j = 0; j < 20; ++j) orbit.push_back(conjugate(z, random_invertible(2, rng)));
    EXPECT_EQ(partition_of_unity(orbit).size(), 1u);
}

TEST(PartitionOfUnity, DiscSamplesAreCovered) {
    CounterRng rng(56);
    std::vector<MatTuple> samples;
    for (int j = 0; j < 100; ++j) samples.push_back(random_tuple(2, 2, Ensemble::disc(), rng));
    const auto polys = partition_of_unity(samples, 2, 0.5);
    EXPECT_GE(polys.size(), 1u);
    EXPECT_LE(polys.size(), 100u);
    for (const auto& z : samples) {
        double best = 0.0;
        for (const auto& p : polys) best = std::max(best, std::abs(central_value(p, z)));
        EXPECT_GE(best, 0.5);
    }
}
