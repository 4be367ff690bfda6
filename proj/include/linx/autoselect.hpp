#pragma once

// Unified entry point and the tag-driven solver polyalgorithm.
//
// Selection is a pure function of (rows, cols, tags, mode); it never reads
// operator entries, so it only ever sees an OperatorShape.
//
//   mode = yes   square required; then diagonal -> tridiagonal -> triangular
//                -> cholesky (symmetric + positive_semidefinite) -> lu
//   mode = none  square: same chain as yes; non-square: qr
//   mode = no    diagonal -> diagonal (pseudoinverse division); else svd

#include "linx/iterative.hpp"
#include "linx/solver.hpp"

#include <string>
#include <string_view>

namespace linx {

/// The well_posed flag: yes (true), no (false) or none.
enum class WellPosed { yes, no, none };

WellPosed parse_well_posed(std::string_view text);
std::string_view to_string(WellPosed mode);

SolverPtr auto_select(const OperatorShape& shape, WellPosed mode);

class AutoLinearSolver final : public Solver {
public:
    explicit AutoLinearSolver(WellPosed mode = WellPosed::yes) : mode_(mode) {}

    WellPosed mode() const { return mode_; }
    /// The concrete solver chosen for this shape.
    SolverPtr select(const OperatorShape& shape) const { return auto_select(shape, mode_); }

    std::string name() const override { return "auto"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape& shape) const override;
    bool allow_dependent_columns(const OperatorShape& shape) const override;

private:
    WellPosed mode_;
};

/// Validates the solver's tag and shape preconditions; throws ContractError.
void check_compatibility(const Solver& solver, const LinearOperator& op);

/// Solves Ax = b with pseudoinverse semantics. Throws StructureError when b
/// does not match A's output structure and ContractError when the solver
/// cannot handle A. Numerical failures are reported through Solution::result.
Solution linear_solve(const OperatorPtr& a, const TreeVector& b,
                      const Solver& solver = AutoLinearSolver(WellPosed::yes));

/// Solver by name: auto, lu, qr, svd, cholesky, diagonal, triangular,
/// tridiagonal, cg, gmres, bicgstab. Throws ContractError on unknown names.
SolverPtr make_solver(std::string_view name, WellPosed mode = WellPosed::yes, IterativeOptions options = {});
const std::vector<std::string>& solver_names();

} // namespace linx
