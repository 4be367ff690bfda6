#include "linx/direct.hpp"
#include "linx/error.hpp"
#include "support/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace linx;
using namespace linx::testing;

namespace {

Solution solve(const Solver& s, const OperatorPtr& a, std::vector<double> b)
{
    return linear_solve(a, TreeVector(a->out_structure(), std::move(b)), s);
}

std::vector<double> x_of(const Solution& s) { return flatten(s.value); }

} // namespace

TEST(Lu, Examples)
{
    const LuSolver lu;
    const auto id = solve(lu, matrix_operator(Matrix::identity(3)), {1, 2, 3});
    EXPECT_TRUE(id.ok());
    EXPECT_EQ(x_of(id), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(x_of(solve(lu, matrix_operator(Matrix{{0, 1}, {1, 0}}), {5, 7})), (std::vector<double>{7, 5}));
    EXPECT_EQ(solve(lu, matrix_operator(Matrix{{1, 2}, {2, 4}}), {1, 1}).result, Result::singular);
    EXPECT_THROW(check_compatibility(lu, *matrix_operator(Matrix{{1, 2}})), ContractError);
}

TEST(Qr, LeastSquaresAndMinimumNorm)
{
    const QrSolver qr;
    // Normal equations: [1 1][1 1]ᵀ x = [1 1]·[1 3] gives 2x = 4.
    EXPECT_NEAR(x_of(solve(qr, matrix_operator(Matrix{{1}, {1}}), {1, 3}))[0], 2.0, 1e-15);
    // Aᵀ(AAᵀ)⁻¹b = [1 1]ᵀ · 2 / 2.
    const auto wide = x_of(solve(qr, matrix_operator(Matrix{{1, 1}}), {2}));
    EXPECT_NEAR(wide[0], 1.0, 1e-15);
    EXPECT_NEAR(wide[1], 1.0, 1e-15);
}

TEST(Qr, OrthogonalMatrix)
{
    const double c = std::cos(0.3), s = std::sin(0.3);
    const Matrix q{{c, -s}, {s, c}};
    const std::vector<double> b{1, 2};
    EXPECT_LE(rel_err(x_of(solve(QrSolver(), matrix_operator(q), b)), q.transpose_times(b)), 1e-15);
}

TEST(Qr, RankDeficientShortDimensionIsSingular)
{
    EXPECT_EQ(solve(QrSolver(), matrix_operator(Matrix{{1, 2}, {2, 4}, {3, 6}}), {1, 1, 1}).result, Result::singular);
    EXPECT_EQ(solve(QrSolver(), matrix_operator(Matrix{{1, 2, 3}, {2, 4, 6}}), {1, 1}).result, Result::singular);
}

TEST(Qr, Flags)
{
    const QrSolver qr;
    EXPECT_TRUE(qr.allow_dependent_rows({5, 3, {}}));
    EXPECT_FALSE(qr.allow_dependent_columns({5, 3, {}}));
    EXPECT_TRUE(qr.allow_dependent_columns({3, 5, {}}));
    EXPECT_FALSE(qr.allow_dependent_rows({3, 3, {}}));
}

TEST(Svd, ZeroAndTruncated)
{
    const SvdSolver svd_solver;
    EXPECT_EQ(x_of(solve(svd_solver, matrix_operator(Matrix(2, 3)), {1, 2})), (std::vector<double>{0, 0, 0}));
    const auto x = x_of(solve(svd_solver, matrix_operator(Matrix{{2, 0}, {0, 0}}), {4, 5}));
    EXPECT_NEAR(x[0], 2.0, 1e-15);
    EXPECT_EQ(x[1], 0.0);
}

TEST(Svd, SingularValuesMatchEigen)
{
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng.integer(0, 7), n = 1 + rng.integer(0, 7);
        const Matrix a = random_matrix(rng, m, n);
        const Svd s = svd(a);
        ASSERT_TRUE(s.converged);
        const Eigen::VectorXd want = singular_values(a);
        ASSERT_EQ(s.sigma.size(), static_cast<std::size_t>(want.size()));
        for (std::size_t i = 0; i < s.sigma.size(); ++i) ASSERT_NEAR(s.sigma[i], want(i), 1e-12);
        // U Σ Vᵀ reconstructs A.
        Matrix usv(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < s.sigma.size(); ++k) usv(i, j) += s.u(i, k) * s.sigma[k] * s.v(j, k);
        ASSERT_LE(frobenius_norm(usv - a), 1e-13 * std::max(1.0, frobenius_norm(a)));
    }
}

TEST(Cholesky, Examples)
{
    const CholeskySolver chol;
    const TagSet spd = tags_named({"symmetric", "positive_semidefinite"});
    // Dense LU by hand: 11 y = 5 after elimination, x = [1/11, 7/11].
    const auto x = x_of(solve(chol, matrix_operator(Matrix{{4, 1}, {1, 3}}, spd), {1, 2}));
    EXPECT_NEAR(x[0], 1.0 / 11.0, 1e-15);
    EXPECT_NEAR(x[1], 7.0 / 11.0, 1e-15);
    EXPECT_EQ(x_of(solve(chol, matrix_operator(Matrix::identity(3), spd), {1, 2, 3})), (std::vector<double>{1, 2, 3}));
    // Eigenvalues of [[1,2],[2,1]] are 3 and -1.
    EXPECT_EQ(solve(chol, matrix_operator(Matrix{{1, 2}, {2, 1}}, spd), {1, 1}).result, Result::singular);
    EXPECT_THROW(check_compatibility(chol, *matrix_operator(Matrix{{4, 1}, {1, 3}})), ContractError);
}

TEST(Diagonal, Examples)
{
    const DiagonalSolver diag;
    EXPECT_EQ(x_of(solve(diag, diagonal_operator({2, 4}), {2, 8})), (std::vector<double>{1, 2}));
    EXPECT_EQ(solve(diag, diagonal_operator({1, 0}), {1, 1}).result, Result::singular);
    EXPECT_EQ(x_of(solve(DiagonalSolver(true), diagonal_operator({2, 0}), {4, 5})), (std::vector<double>{2, 0}));
}

TEST(Triangular, Examples)
{
    const TriangularSolver tri;
    const auto l = matrix_operator(Matrix{{1, 0}, {2, 1}}, tags_named({"lower_triangular", "unit_diagonal"}));
    EXPECT_EQ(x_of(solve(tri, l, {1, 4})), (std::vector<double>{1, 2}));
    const auto u = matrix_operator(Matrix::identity(3), tags_named({"upper_triangular"}));
    EXPECT_EQ(x_of(solve(tri, u, {3, 2, 1})), (std::vector<double>{3, 2, 1}));
    const auto z = matrix_operator(Matrix{{1, 0}, {2, 0}}, tags_named({"lower_triangular"}));
    EXPECT_EQ(solve(tri, z, {1, 1}).result, Result::singular);
}

TEST(Tridiagonal, Examples)
{
    const TridiagonalSolver thomas;
    const auto x = x_of(solve(thomas, tridiagonal_operator({1, 1}, {2, 2, 2}, {1, 1}), {4, 8, 8}));
    EXPECT_LE(rel_err(x, std::vector<double>{1, 2, 3}), 1e-15);
    EXPECT_EQ(x_of(solve(thomas, tridiagonal_operator({0, 0}, {1, 1, 1}, {0, 0}), {5, 6, 7})),
              (std::vector<double>{5, 6, 7}));
    EXPECT_EQ(solve(thomas, tridiagonal_operator({1}, {0, 1}, {1}), {1, 1}).result, Result::singular);
}

TEST(Tridiagonal, MatchesLuOnDiagonallyDominant)
{
    SplitMix64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 200;
        auto main = random_vector(rng, n);
        for (double& d : main) d += 3.0;
        const auto t = tridiagonal_operator(random_vector(rng, n - 1), main, random_vector(rng, n - 1));
        const auto b = random_vector(rng, n);
        const auto thomas = x_of(solve(TridiagonalSolver(), t, b));
        const auto lu = x_of(solve(LuSolver(), matrix_operator(t->as_matrix()), b));
        ASSERT_LE(rel_err(thomas, lu), 1e-10);
    }
}


TEST(DirectProperty, MatchesPseudoinverseOracle)
{
    SplitMix64 rng(33);
    for (const auto& name : direct_solver_names())
        for (int trial = 0; trial < 100; ++trial) {
            const SolverInstance in = instance_for(name, rng);
            const auto b = random_vector(rng, in.op->rows());
            const Solution s = solve(*in.solver, in.op, b);
            ASSERT_TRUE(s.ok()) << name;
            ASSERT_LE(rel_err(x_of(s), pinv_solve(in.op->as_matrix(), b)), 1e-8) << name;
        }
}

TEST(DirectProperty, ResidualIsRecomputed)
{
    SplitMix64 rng(34);
    for (const auto& name : direct_solver_names())
        for (int trial = 0; trial < 20; ++trial) {
            const SolverInstance in = instance_for(name, rng);
            const auto b = random_vector(rng, in.op->rows());
            const Solution s = solve(*in.solver, in.op, b);
            const double r = vec::norm(vec::sub(b, in.op->as_matrix() * s.value.values()));
            ASSERT_NEAR(s.diagnostics.residual_norm, r, 1e-12) << name;
        }
}

TEST(DirectProperty, TransposeConsistency)
{
    SplitMix64 rng(35);
    for (const auto& name : direct_solver_names())
        for (int trial = 0; trial < 30; ++trial) {
            const SolverInstance in = instance_for(name, rng);
            const auto c = random_vector(rng, in.op->cols());
            const TreeVector ct(in.op->in_structure(), c);
            const StatePtr state = in.solver->init(in.op);
            const Solution via_state = in.solver->compute(in.solver->transpose(state), ct);
            const OperatorPtr at = in.op->transpose();
            const Solution fresh = in.solver->compute(in.solver->init(at), ct);
            ASSERT_TRUE(via_state.ok() && fresh.ok()) << name;
            ASSERT_LE(rel_err(x_of(via_state), x_of(fresh)), 1e-10) << name;
            // Transposing twice returns to A.
            const auto b = random_vector(rng, in.op->rows());
            const TreeVector bt(in.op->out_structure(), b);
            ASSERT_LE(rel_err(x_of(in.solver->compute(in.solver->transpose(in.solver->transpose(state)), bt)),
                              x_of(in.solver->compute(state, bt))),
                      1e-12)
                << name;
        }
}

TEST(DirectProperty, StateReuseIsBitwise)
{
    SplitMix64 rng(36);
    for (const auto& name : direct_solver_names())
        for (int trial = 0; trial < 10; ++trial) {
            const SolverInstance in = instance_for(name, rng);
            const StatePtr state = in.solver->init(in.op);
            for (int k = 0; k < 5; ++k) {
                const TreeVector b(in.op->out_structure(), random_vector(rng, in.op->rows()));
                ASSERT_EQ(x_of(in.solver->compute(state, b)), x_of(in.solver->compute(in.solver->init(in.op), b)));
            }
        }
}

TEST(SvdProperty, MoorePenroseConditions)
{
    SplitMix64 rng(37);
    const SvdSolver svd_solver;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + rng.integer(0, 6), n = 2 + rng.integer(0, 6);
        const std::size_t r = 1 + rng.integer(0, static_cast<std::int64_t>(std::min(m, n)) - 2);
        const Matrix a = random_rank(rng, m, n, r);
        const Matrix p = materialize_solution_map(svd_solver, matrix_operator(a));
        const Matrix ap = a * p, pa = p * a;
        ASSERT_LE(frobenius_norm(ap * a - a), 1e-8);
        ASSERT_LE(frobenius_norm(pa * p - p), 1e-8);
        ASSERT_LE(frobenius_norm(ap.transposed() - ap), 1e-8);
        ASSERT_LE(frobenius_norm(pa.transposed() - pa), 1e-8);
    }
}

TEST(Solvers, TreeStructuredSolve)
{
    const auto s = TreeStructure::dict({{"u", TreeStructure(1)}, {"v", TreeStructure::leaf({})}});
    const auto a = std::make_shared<MatrixOperator>(Matrix{{2, 0}, {0, 4}}, TagSet{}, s, s);
    const Solution sol = linear_solve(a, TreeVector(s, {2, 8}), LuSolver());
    EXPECT_EQ(sol.value.structure(), s);
    EXPECT_EQ(x_of(sol), (std::vector<double>{1, 2}));
    EXPECT_THROW(linear_solve(a, TreeVector({2.0, 8.0}), LuSolver()), StructureError);
}
