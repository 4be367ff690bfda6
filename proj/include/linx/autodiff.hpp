#pragma once

// Forward- and reverse-mode derivatives of x = A†b.
//
// With x = A†b, r = b − Ax and z = Vᵀ(A†)ᵀx, the tangent of x along (V, v) is
//
//   general              A†(−Vx + (A†)ᵀVᵀr − Az + v) + z
//   independent columns  A†(−Vx + (A†)ᵀVᵀr + v)          (A†A = I)
//   independent rows     A†(−Vx − Az + v) + z            (r = 0)
//   well posed           A⁻¹(−Vx + v)
//
// The case is chosen from the solver's allow_dependent_rows/columns flags,
// not from the operator's entries. Every application of A† reuses the single
// state from the primal solve, and (A†)ᵀ = (Aᵀ)† uses solver.transpose(state).
//
// The reverse rule is the transpose of the general formula. With
// w = (A†)ᵀx and y = (A†)ᵀx̄:
//
//   b̄ = y
//   V̄ = −y xᵀ + r (A†y)ᵀ − w (Aᵀy)ᵀ + w x̄ᵀ
//
// where independent columns drop the two w terms, independent rows drop the
// r term, and well posed keeps only −y xᵀ.

#include "linx/matrix.hpp"
#include "linx/operator.hpp"
#include "linx/solver.hpp"

#include <optional>
#include <string_view>

namespace linx {

enum class JvpCase { well_posed, independent_rows, independent_columns, general };

std::string_view to_string(JvpCase c);
JvpCase parse_jvp_case(std::string_view text);

JvpCase jvp_case(const Solver& solver, const LinearOperator& a);

/// Tangent (V, v). A null V is the zero tangent operator; an empty v is the
/// zero vector.
struct SolveTangent {
    OperatorPtr V;
    std::optional<TreeVector> v;
};

struct JvpResult {
    Solution primal;
    /// Present only when the primal solve and every inner solve succeeded.
    std::optional<TreeVector> tangent;
    Result tangent_result = Result::success;
    JvpCase formula = JvpCase::well_posed;
};

JvpResult jvp_solve(const Solver& solver, const OperatorPtr& a, const TreeVector& b, const SolveTangent& tangent);
/// Same, but evaluates the given formula regardless of the solver's flags.
JvpResult jvp_solve_as(JvpCase formula, const Solver& solver, const OperatorPtr& a, const TreeVector& b,
                       const SolveTangent& tangent);

struct SolveCotangent {
    Matrix V_bar;     // rows(A) x cols(A), over flattened structures
    TreeVector b_bar; // matches b
};

struct VjpResult {
    Solution primal;
    std::optional<SolveCotangent> cotangent;
    Result cotangent_result = Result::success;
    JvpCase formula = JvpCase::well_posed;
};

VjpResult vjp_solve(const Solver& solver, const OperatorPtr& a, const TreeVector& b, const TreeVector& x_bar);
VjpResult vjp_solve_as(JvpCase formula, const Solver& solver, const OperatorPtr& a, const TreeVector& b,
                       const TreeVector& x_bar);

/// Maps a dense operator cotangent onto the operator's own parameters:
/// matrix entries (row-major) for MatrixOperator, the diagonal for
/// DiagonalOperator, lower|main|upper for TridiagonalOperator, the scalar
/// for ScaledOperator of a fixed operator. nullopt for operators without
/// stored parameters.
std::optional<std::vector<double>> project_cotangent(const LinearOperator& a, const Matrix& V_bar);

/// Central difference of the dense pseudoinverse solve P(A)b:
/// [P(A + hV)(b + hv) − P(A − hV)(b − hv)] / 2h. Only meaningful where the
/// rank of A + tV is constant for |t| <= h.
TreeVector finite_difference_jvp(const Matrix& a, const TreeVector& b, const Matrix& V, const TreeVector& v, double h);

} // namespace linx
