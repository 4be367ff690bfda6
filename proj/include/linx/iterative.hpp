#pragma once

// Matrix-free Krylov solvers. They touch the operator only through apply()
// and always start from x0 = 0, so compute is a pure function of (state, b).

#include "linx/solver.hpp"

#include <optional>

namespace linx {

struct IterativeOptions {
    double rtol = 1e-8;
    double atol = 0.0;
    std::optional<std::size_t> max_steps; // default 10 * n
    std::size_t restart = 20;             // GMRES only

    /// Throws ContractError on negative tolerances or zero step counts.
    void validate() const;
    std::size_t steps_for(std::size_t n) const { return max_steps.value_or(10 * std::max<std::size_t>(n, 1)); }
};

class IterativeSolver : public Solver {
public:
    explicit IterativeSolver(IterativeOptions options = {});

    const IterativeOptions& options() const { return options_; }

    StatePtr init(const OperatorPtr& op) const override;
    bool allow_dependent_rows(const OperatorShape&) const override { return false; }
    bool allow_dependent_columns(const OperatorShape&) const override { return false; }

protected:
    IterativeOptions options_;
};

/// Conjugate gradient. Needs symmetric and positive_semidefinite tags.
class CgSolver final : public IterativeSolver {
public:
    using IterativeSolver::IterativeSolver;

    std::string name() const override { return "cg"; }
    void check(const OperatorShape& shape) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override { return state; }
};

/// Restarted GMRES(restart): modified Gram-Schmidt Arnoldi, Givens rotations.
class GmresSolver final : public IterativeSolver {
public:
    using IterativeSolver::IterativeSolver;

    std::string name() const override { return "gmres"; }
    void check(const OperatorShape& shape) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
};

class BicgstabSolver final : public IterativeSolver {
public:
    using IterativeSolver::IterativeSolver;

    std::string name() const override { return "bicgstab"; }
    void check(const OperatorShape& shape) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
};

} // namespace linx
