#include <gtest/gtest.h>

#include <random>

#include "moduli_lab/conjugacy.hpp"
#include "test_oracles.hpp"

using namespace moduli_lab;
using namespace std::complex_literals;

namespace {

void expect_family_verifies(const Mat2& a, const Mat2& b, const ConjugacySolution& sol, double tol) {
    const double bound = tol * (frobenius_norm(a) + frobenius_norm(b));
    for (const auto& p : sol.basis) EXPECT_LE(conjugacy_residual(a, b, p), bound);
    const auto& fam = sol.det1_family;
    if (fam.kind == Det1Kind::full_sl2 || fam.empty()) return;
    for (std::size_t j = 0; j < fam.branch_count(); ++j) {
        for (complex q : {complex(1.0), complex(0.3, -0.7), complex(-2.0, 0.5)}) {
            const Mat2 p = fam.member(j, q);
            EXPECT_LE(conjugacy_residual(a, b, p), bound) << p;
            EXPECT_LE(std::abs(det(p) - 1.0), tol) << p;
        }
    }
}

}  // namespace

TEST(SolveConjugacy, ScalarPairIsFullSpace) {
    const auto sol = solve_conjugacy(Mat2::scalar(2.0), Mat2::scalar(2.0));
    EXPECT_EQ(sol.basis.size(), 4u);
    EXPECT_TRUE(sol.full_space);
    EXPECT_FALSE(sol.empty);
    EXPECT_EQ(sol.det1_family.kind, Det1Kind::full_sl2);
}

// Jordan pair [[2,t],[0,2]] vs [[2,t^3],[0,2]]: det-1 intertwiners are
// [[+-1/t, q],[0, +-t]] in the AP = PB convention.
TEST(SolveConjugacy, JordanPairRecoversAffineBranches) {
    for (double t : {0.5, 0.1, 0.01}) {
        const Mat2 a{2.0, t, 0.0, 2.0};
        const Mat2 b{2.0, t * t * t, 0.0, 2.0};
        const auto sol = solve_conjugacy(a, b);
        ASSERT_FALSE(sol.empty) << t;
        const auto& fam = sol.det1_family;
        ASSERT_EQ(fam.kind, Det1Kind::lines) << t;
        ASSERT_EQ(fam.branch_count(), 2u);
        EXPECT_EQ(fam.free_parameters, 1);
        // Free direction is the (1,2) entry alone.
        const Mat2 k = (1.0 / fam.direction[1]) * fam.direction;
        EXPECT_LT(frobenius_norm(k - Mat2{0.0, 1.0, 0.0, 0.0}), 1e-12);
        // Branches are +- diag(1/t, t) modulo the free direction.
        int plus = 0;
        int minus = 0;
        for (const auto& rep : fam.representatives) {
            const Mat2 base = rep - rep[1] * k;
            const Mat2 expected = Mat2::diag(1.0 / t, t);
            const double scale = frobenius_norm(expected);
            if (frobenius_norm(base - expected) <= 1e-9 * scale) ++plus;
            if (frobenius_norm(base + expected) <= 1e-9 * scale) ++minus;
        }
        EXPECT_EQ(plus, 1) << t;
        EXPECT_EQ(minus, 1) << t;
        expect_family_verifies(a, b, sol, default_tol);
    }
}

TEST(SolveConjugacy, DyadicInputsTakeExactPath) {
    EXPECT_TRUE(solve_conjugacy(Mat2{2.0, 0.5, 0.0, 2.0}, Mat2{2.0, 0.125, 0.0, 2.0}).exact);
    EXPECT_FALSE(solve_conjugacy(Mat2{2.0, 0.1, 0.0, 2.0}, Mat2{2.0, 0.001, 0.0, 2.0}).exact);
    EXPECT_FALSE(solve_conjugacy(Mat2{2.0, 0.5, 0.0, 2.0}, Mat2{2.0, 0.125, 0.0, 2.0}, {default_tol, false}).exact);
}

TEST(SolveConjugacy, ExactAndFloatPathsAgreeOnShape) {
    const Mat2 a{2.0, 0.5, 0.0, 2.0};
    const Mat2 b = a.transpose();
    const auto exact = solve_conjugacy(a, b);
    const auto flt = solve_conjugacy(a, b, {default_tol, false});
    ASSERT_EQ(exact.basis.size(), flt.basis.size());
    for (std::size_t i = 0; i < exact.basis.size(); ++i)
        EXPECT_LT(frobenius_norm(exact.basis[i] - flt.basis[i]), 1e-12);
    EXPECT_EQ(exact.det1_family.kind, flt.det1_family.kind);
}

// Transpose of a Jordan block: det-1 intertwiners are [[alpha, +-i],[+-i, 0]].
TEST(SolveConjugacy, TransposeOfJordanBlock) {
    const double t = 0.5;
    const Mat2 a{2.0, t, 0.0, 2.0};
    const auto sol = solve_conjugacy(a, a.transpose());
    const auto& fam = sol.det1_family;
    ASSERT_EQ(fam.kind, Det1Kind::lines);
    ASSERT_EQ(fam.branch_count(), 2u);
    const Mat2 k = (1.0 / fam.direction[0]) * fam.direction;
    EXPECT_LT(frobenius_norm(k - Mat2{1.0, 0.0, 0.0, 0.0}), 1e-15);
    std::vector<complex> offdiag;
    for (const auto& rep : fam.representatives) {
        const Mat2 base = rep - rep[0] * k;
        EXPECT_LT(std::abs(base[3]), 1e-15);
        EXPECT_LT(std::abs(base[1] - base[2]), 1e-15);
        offdiag.push_back(base[1]);
    }
    EXPECT_LT(std::min(std::abs(offdiag[0] - 1i), std::abs(offdiag[0] + 1i)), 1e-15);
    EXPECT_LT(std::abs(offdiag[0] + offdiag[1]), 1e-15);
    expect_family_verifies(a, a.transpose(), sol, default_tol);
}

TEST(SolveConjugacy, DistinctSpectraHaveOnlyZeroSolution) {
    const Mat2 a = Mat2::diag(1.0, 2.0);
    const Mat2 b = Mat2::diag(3.0, 4.0);
    // Independent check: the Sylvester operator is nonsingular.
    EXPECT_GT(std::abs(oracle::sylvester_determinant(a, b)), 0.5);
    const auto sol = solve_conjugacy(a, b);
    EXPECT_TRUE(sol.basis.empty());
    EXPECT_TRUE(sol.empty);
    EXPECT_FALSE(min_norm_conjugator(a, b).has_value());
}

TEST(SolveConjugacy, SharedEigenvalueGivesSingularLine) {
    const auto sol = solve_conjugacy(Mat2::diag(1.0, 2.0), Mat2::diag(2.0, 3.0));
    EXPECT_EQ(sol.basis.size(), 1u);
    EXPECT_TRUE(sol.empty);
}

TEST(SolveConjugacy, ScalarVersusJordanIsEmpty) {
    const auto sol = solve_conjugacy(Mat2::scalar(2.0), Mat2{2.0, 1.0, 0.0, 2.0});
    EXPECT_EQ(sol.basis.size(), 2u);
    EXPECT_TRUE(sol.empty);
    const auto flt = solve_conjugacy(Mat2::scalar(2.0), Mat2{2.0, 1.0, 0.0, 2.0}, {default_tol, false});
    EXPECT_TRUE(flt.empty);
}

TEST(SolveConjugacy, RejectsNegativeTolerance) {
    EXPECT_THROW(solve_conjugacy(Mat2::identity(), Mat2::identity(), -1.0), std::invalid_argument);
}

TEST(MinNormConjugator, IdentityForEqualDiagonal) {
    const auto r = min_norm_conjugator(Mat2::diag(1.0, 2.0), Mat2::diag(1.0, 2.0));
    ASSERT_TRUE(r);
    EXPECT_LT(frobenius_norm(r->matrix - Mat2::identity()), 1e-15);
    EXPECT_NEAR(r->norm, std::sqrt(2.0), 1e-15);
}

TEST(MinNormConjugator, ScalarPairGivesIdentity) {
    const auto r = min_norm_conjugator(Mat2::scalar(3.0), Mat2::scalar(3.0));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->matrix, Mat2::identity());
}

TEST(MinNormConjugator, JordanPairNormIsDominatedByInverseT) {
    for (double t : {0.5, 0.1, 0.01}) {
        const auto r = min_norm_conjugator(Mat2{2.0 + t, t, 0.0, 2.0 + t}, Mat2{2.0 + t, t * t * t, 0.0, 2.0 + t});
        ASSERT_TRUE(r);
        EXPECT_GE(r->norm, 0.99 / t);
        // Minimizer sits at q = 0: diag(1/t, t).
        EXPECT_NEAR(r->norm, std::hypot(1.0 / t, t), 1e-9 / t);
    }
    const auto r = min_norm_conjugator(Mat2{2.1, 0.1, 0.0, 2.1}, Mat2{2.1, 0.001, 0.0, 2.1});
    ASSERT_TRUE(r);
    EXPECT_GE(r->norm, 10.0 - 1e-9);
}

// Random sample of pairs: plain random, float conjugates, exact Jordan
// conjugates, scalar pairs.
class ConjugacyProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{20240517};
    std::uniform_real_distribution<double> unit{-3.0, 3.0};

    complex rc() { return {unit(rng), unit(rng)}; }
    Mat2 random_mat() { return {rc(), rc(), rc(), rc()}; }

    std::pair<Mat2, Mat2> sample_pair(int kind) {
        switch (kind % 5) {
            case 0: return {random_mat(), random_mat()};
            case 1: {
                const Mat2 a = random_mat();
                Mat2 p = random_mat();
                while (std::abs(det(p)) < 0.5) p = random_mat();
                return {a, *inverse(p) * a * p};
            }
            case 2: {
                // Exact Jordan blocks with the same dyadic eigenvalue.
                const auto lam = std::round(unit(rng) * 64.0) / 64.0;
                const auto x = oracle::random_unimodular(rng);
                const auto y = oracle::random_unimodular(rng);
                const Mat2 n{0.0, 1.0, 0.0, 0.0};
                return {Mat2::scalar(lam) + x * n * *inverse(x), Mat2::scalar(lam) + 0.25 * (y * n * *inverse(y))};
            }
            case 3: {
                const complex s = rc();
                return {Mat2::scalar(s), unit(rng) > 0 ? Mat2::scalar(s) : Mat2{s, 1.0, 0.0, s}};
            }
            default: {
                const Mat2 a = random_mat();
                return {a, a.transpose()};
            }
        }
    }
};

TEST_F(ConjugacyProperties, OracleAgreementOn1000Pairs) {
    int conjugate = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto [a, b] = sample_pair(i);
        const bool expected = oracle::conjugate_by_invariants(a, b, default_tol);
        const auto sol = solve_conjugacy(a, b);
        EXPECT_EQ(!sol.empty, expected) << i << " " << a << " " << b;
        conjugate += expected;
    }
    // The sample must exercise both outcomes.
    EXPECT_GT(conjugate, 300);
    EXPECT_LT(conjugate, 900);
}

TEST_F(ConjugacyProperties, SymmetryUnderSwap) {
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = sample_pair(i);
        const auto ab = solve_conjugacy(a, b);
        const auto ba = solve_conjugacy(b, a);
        ASSERT_EQ(ab.empty, ba.empty) << i;
        if (ab.empty) continue;
        // The inverse of a witness for (A,B) is a witness for (B,A).
        const Mat2 p = ab.det1_family.representatives.front();
        const Mat2 pinv = *inverse(p);
        const double bound = default_tol * (frobenius_norm(a) + frobenius_norm(b)) * std::max(1.0, frobenius_norm(pinv));
        EXPECT_LE(conjugacy_residual(b, a, pinv), bound);
    }
}

TEST_F(ConjugacyProperties, Det1FamilyVerifies) {
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = sample_pair(i);
        expect_family_verifies(a, b, solve_conjugacy(a, b), default_tol);
    }
}

TEST_F(ConjugacyProperties, MinNormBeatsParameterGrid) {
    for (int i = 0; i < 300; ++i) {
        const auto [a, b] = sample_pair(i);
        const auto sol = solve_conjugacy(a, b);
        const auto best = min_norm_member(sol.det1_family);
        ASSERT_EQ(best.has_value(), !sol.empty);
        if (!best || sol.det1_family.kind == Det1Kind::full_sl2) continue;
        const auto& fam = sol.det1_family;
        for (std::size_t j = 0; j < fam.branch_count(); ++j) {
            for (int g = 0; g < 100; ++g) {
                // 10 x 10 grid in the complex parameter plane; skip alpha = 0.
                const complex q{-2.0 + 4.0 * (g % 10) / 9.0, -2.0 + 4.0 * (g / 10) / 9.0 + 1e-3};
                EXPECT_LE(best->norm, frobenius_norm(fam.member(j, q)) * (1.0 + 1e-12));
            }
        }
    }
}
