#pragma once

// Instances for each derivative case and the two derivative oracles:
// central finite differences and the pairing identity
// ⟨x̄, ẋ⟩ = ⟨V̄, V⟩_F + ⟨b̄, v⟩.

#include "support/instances.hpp"

namespace linx::testing {

struct CaseInstance {
    JvpCase formula;
    SolverPtr solver;
    Matrix a;
    OperatorPtr op;
    TreeVector b;
    bool rank_deficient = false;
};

/// well_posed: square via LU; independent_columns: tall via QR;
/// independent_rows: wide via QR; general: rank deficient via SVD.
inline CaseInstance case_instance(JvpCase c, SplitMix64& rng, std::size_t max_dim = 6)
{
    const auto dim = [&](std::size_t lo) {
        return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(max_dim)));
    };
    CaseInstance in{c, nullptr, Matrix(), nullptr, TreeVector(), false};
    switch (c) {
    case JvpCase::well_posed: {
        const std::size_t n = dim(1);
        in.solver = std::make_shared<LuSolver>();
        in.a = well_conditioned(rng, n, n, 100.0);
        break;
    }
    case JvpCase::independent_columns: {
        const std::size_t cols = static_cast<std::size_t>(rng.integer(1, max_dim - 1));
        const std::size_t rows = dim(cols + 1);
        in.solver = std::make_shared<QrSolver>();
        in.a = well_conditioned(rng, rows, cols, 100.0);
        break;
    }
    case JvpCase::independent_rows: {
        const std::size_t rows = static_cast<std::size_t>(rng.integer(1, max_dim - 1));
        const std::size_t cols = dim(rows + 1);
        in.solver = std::make_shared<QrSolver>();
        in.a = well_conditioned(rng, rows, cols, 100.0);
        break;
    }
    case JvpCase::general: {
        const std::size_t m = dim(2), n = dim(2);
        const std::size_t r = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(std::min(m, n)) - 1));
        in.solver = std::make_shared<SvdSolver>();
        in.a = random_rank(rng, m, n, r);
        in.rank_deficient = true;
        break;
    }
    }
    in.op = matrix_operator(in.a);
    in.b = TreeVector(random_vector(rng, in.a.rows()));
    return in;
}

/// Full-rank instances take any tangent; rank-deficient ones take V = MA or
/// V = AN, which keep rank(A + hV) fixed.
inline Matrix tangent_for(const CaseInstance& in, SplitMix64& rng, std::size_t k)
{
    const std::size_t m = in.a.rows(), n = in.a.cols();
    if (!in.rank_deficient) return random_matrix(rng, m, n);
    return k % 2 == 0 ? random_matrix(rng, m, m) * in.a : in.a * random_matrix(rng, n, n);
}

inline OperatorPtr tangent_operator(const CaseInstance& in, const Matrix& V)
{
    return std::make_shared<MatrixOperator>(V, TagSet{}, in.op->in_structure(), in.op->out_structure());
}

inline std::vector<double> jvp_of(const CaseInstance& in, JvpCase formula, const Matrix& V, const TreeVector& v)
{
    const JvpResult r = jvp_solve_as(formula, *in.solver, in.op, in.b, {tangent_operator(in, V), v});
    if (!r.tangent) throw std::runtime_error("jvp failed: " + std::string(to_string(r.tangent_result)));
    return flatten(*r.tangent);
}

inline double symmetric_rel_err(std::span<const double> a, std::span<const double> b)
{
    const double scale = std::max({vec::norm(a), vec::norm(b), 1e-300});
    return vec::norm(vec::sub(a, b)) / scale;
}

/// Relative distance between the JVP and the central difference with step h.
inline double jvp_fd_error(const CaseInstance& in, const Matrix& V, const TreeVector& v, double h)
{
    const auto x_dot = jvp_of(in, in.formula, V, v);
    const TreeVector fd = finite_difference_jvp(in.a, in.b, V, v, h);
    return symmetric_rel_err(x_dot, fd.values());
}

inline double pairing_error(const CaseInstance& in, const Matrix& V, const TreeVector& v, const TreeVector& x_bar)
{
    const auto x_dot = jvp_of(in, in.formula, V, v);
    const VjpResult r = vjp_solve_as(in.formula, *in.solver, in.op, in.b, x_bar);
    if (!r.cotangent) throw std::runtime_error("vjp failed");
    const double lhs = vec::dot(x_bar.values(), x_dot);
    const double rhs = frobenius_dot(r.cotangent->V_bar, V) + dot(r.cotangent->b_bar, v);
    const double scale = std::max({vec::norm(x_bar.values()) * vec::norm(x_dot),
                                   frobenius_norm(r.cotangent->V_bar) * frobenius_norm(V)
                                       + norm(r.cotangent->b_bar) * norm(v),
                                   1e-300});
    return std::abs(lhs - rhs) / scale;
}

inline const std::vector<JvpCase>& all_cases()
{
    static const std::vector<JvpCase> cases{JvpCase::well_posed, JvpCase::independent_columns,
                                            JvpCase::independent_rows, JvpCase::general};
    return cases;
}

} // namespace linx::testing
