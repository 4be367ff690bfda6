#include "linx/error.hpp"
#include "linx/iterative.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

using namespace linx;
using namespace linx::testing;

namespace {

TagSet spd_tags()
{
    TagSet t;
    t.symmetric = t.positive_semidefinite = true;
    return t;
}

IterativeOptions tight(double rtol = 1e-12)
{
    IterativeOptions o;
    o.rtol = rtol;
    return o;
}

// Wraps A so that solvers can only reach it through matvecs.
OperatorPtr matrix_free(const OperatorPtr& a) { return std::make_shared<CountingOperator>(a, true); }

Solution solve(const Solver& s, const OperatorPtr& a, const std::vector<double>& b)
{
    return linear_solve(a, TreeVector(a->out_structure(), b), s);
}

} // namespace

TEST(Cg, Identity)
{
    const Solution s = solve(CgSolver(), matrix_free(identity_operator(TreeStructure(4))), {1, 2, 3, 4});
    EXPECT_TRUE(s.ok());
    EXPECT_EQ(s.diagnostics.iterations, 1u);
    EXPECT_EQ(flatten(s.value), (std::vector<double>{1, 2, 3, 4}));
}

TEST(Cg, TwoByTwoWithinTwoIterations)
{
    const Solution s = solve(CgSolver(tight()), matrix_free(matrix_operator(Matrix{{4, 1}, {1, 3}}, spd_tags())), {1, 2});
    EXPECT_TRUE(s.ok());
    EXPECT_LE(s.diagnostics.iterations, 2u);
    EXPECT_LE(rel_err(flatten(s.value), std::vector<double>{1.0 / 11, 7.0 / 11}), 1e-12);
}

TEST(Cg, DiagonalSpectrum)
{
    SplitMix64 rng(41);
    const auto b = random_vector(rng, 5);
    const auto a = diagonal_operator({1, 2, 3, 4, 5}, spd_tags());
    const Solution s = solve(CgSolver(tight(1e-10)), matrix_free(a), b);
    ASSERT_TRUE(s.ok());
    EXPECT_LE(s.diagnostics.residual_norm, 1e-10 * vec::norm(b));
    EXPECT_LE(rel_err(flatten(s.value), pinv_solve(a->as_matrix(), b)), 1e-8);
}

TEST(Cg, NeedsTags)
{
    EXPECT_THROW(check_compatibility(CgSolver(), *matrix_operator(Matrix{{4, 1}, {1, 3}})), ContractError);
    TagSet sym;
    sym.symmetric = true;
    try {
        check_compatibility(CgSolver(), *matrix_operator(Matrix{{4, 1}, {1, 3}}, sym));
        FAIL();
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find("positive_semidefinite"), std::string::npos);
    }
}

TEST(Cg, IndefiniteBreaksDown)
{
    const Solution s = solve(CgSolver(), matrix_operator(Matrix{{1, 0}, {0, -1}}, spd_tags()), {1, 1});
    EXPECT_EQ(s.result, Result::breakdown);
}

TEST(Cg, MaxSteps)
{
    IterativeOptions o = tight(1e-14);
    o.max_steps = 1;
    SplitMix64 rng(42);
    const Solution s = solve(CgSolver(o), matrix_operator(spd(rng, 6), spd_tags()), random_vector(rng, 6));
    EXPECT_EQ(s.result, Result::max_steps_reached);
}

TEST(CgProperty, IntegerSpdWithinNIterations)
{
    SplitMix64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.integer(0, 5);
        Matrix b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = static_cast<double>(rng.integer(-3, 3));
        Matrix a = b.transposed() * b;
        for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
        std::vector<double> rhs(n);
        for (double& x : rhs) x = static_cast<double>(rng.integer(-5, 5));
        if (vec::norm(rhs) == 0) rhs[0] = 1;

        IterativeOptions o = tight();
        o.max_steps = n;
        const Solution s = solve(CgSolver(o), matrix_free(matrix_operator(a, spd_tags())), rhs);
        ASSERT_TRUE(s.ok()) << "n=" << n << " result=" << to_string(s.result);
        ASSERT_LE(s.diagnostics.iterations, n);
        ASSERT_LE(s.diagnostics.residual_norm, 1e-12 * vec::norm(rhs));
    }
}

TEST(Gmres, Examples)
{
    const Solution id = solve(GmresSolver(), matrix_free(identity_operator(TreeStructure(3))), {1, 2, 3});
    EXPECT_EQ(id.diagnostics.iterations, 1u);
    EXPECT_EQ(flatten(id.value), (std::vector<double>{1, 2, 3}));
    const Solution perm = solve(GmresSolver(tight()), matrix_free(matrix_operator(Matrix{{0, 1}, {1, 0}})), {5, 7});
    EXPECT_LE(rel_err(flatten(perm.value), std::vector<double>{7, 5}), 1e-12);
}

TEST(Gmres, RestartedStillConverges)
{
    SplitMix64 rng(44);
    IterativeOptions o = tight(1e-10);
    o.restart = 3;
    o.max_steps = 400;
    const Matrix a = diagonally_dominant(rng, 12);
    const auto b = random_vector(rng, 12);
    const Solution s = solve(GmresSolver(o), matrix_free(matrix_operator(a)), b);
    ASSERT_TRUE(s.ok());
    EXPECT_LE(rel_err(flatten(s.value), pinv_solve(a, b)), 1e-8);
}

TEST(Bicgstab, Examples)
{
    const Solution id = solve(BicgstabSolver(), matrix_free(identity_operator(TreeStructure(3))), {1, 2, 3});
    EXPECT_TRUE(id.ok());
    EXPECT_LE(id.diagnostics.iterations, 1u);
    EXPECT_EQ(flatten(id.value), (std::vector<double>{1, 2, 3}));

    SplitMix64 rng(45);
    const Matrix a = diagonally_dominant(rng, 8);
    const auto b = random_vector(rng, 8);
    const Solution s = solve(BicgstabSolver(tight()), matrix_free(matrix_operator(a)), b);
    ASSERT_TRUE(s.ok());
    EXPECT_LE(rel_err(flatten(s.value), pinv_solve(a, b)), 1e-8);
}

TEST(Bicgstab, SingularNeverSucceeds)
{
    const Solution s = solve(BicgstabSolver(), diagonal_operator({1, 0}), {1, 1});
    EXPECT_TRUE(s.result == Result::breakdown || s.result == Result::max_steps_reached) << to_string(s.result);
}

TEST(IterativeProperty, MatchDenseSolves)
{
    SplitMix64 rng(46);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.integer(0, 7);
        const Matrix a = well_conditioned(rng, n, n, 20.0);
        const auto b = random_vector(rng, n);
        const auto want = pinv_solve(a, b);
        for (const SolverPtr& s : {SolverPtr(std::make_shared<GmresSolver>(tight())),
                                   SolverPtr(std::make_shared<BicgstabSolver>(tight()))}) {
            auto op = std::make_shared<CountingOperator>(matrix_operator(a), true);
            const Solution sol = solve(*s, op, b);
            ASSERT_TRUE(sol.ok()) << s->name() << " " << to_string(sol.result);
            ASSERT_LE(rel_err(flatten(sol.value), want), 1e-8) << s->name();
            ASSERT_EQ(op->counts().materializations, 0);
            ASSERT_EQ(op->counts().transpose_applies, 0);
            const double r = vec::norm(vec::sub(b, a * sol.value.values()));
            ASSERT_NEAR(sol.diagnostics.residual_norm, r, 1e-12);
        }
    }
}

TEST(IterativeProperty, TransposeSolvesAgainstTranspose)
{
    SplitMix64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.integer(0, 6);
        const Matrix a = diagonally_dominant(rng, n);
        const auto c = random_vector(rng, n);
        for (const SolverPtr& s : {SolverPtr(std::make_shared<GmresSolver>(tight())),
                                   SolverPtr(std::make_shared<BicgstabSolver>(tight()))}) {
            const StatePtr state = s->init(matrix_operator(a));
            const Solution x = s->compute(s->transpose(state), TreeVector(c));
            ASSERT_TRUE(x.ok());
            ASSERT_LE(rel_err(flatten(x.value), pinv_solve(a.transposed(), c)), 1e-8);
        }
    }
}

TEST(IterativeOptions, Validation)
{
    IterativeOptions o;
    o.rtol = -1;
    EXPECT_THROW(o.validate(), ContractError);
    o = {};
    o.max_steps = 0;
    EXPECT_THROW(o.validate(), ContractError);
    EXPECT_EQ(IterativeOptions{}.steps_for(7), 70u);
}
