#pragma once

// Two-stage solver contract.
//
//   init(A)        factorise / prepare, independent of any right-hand side
//   compute(s, b)  solve for one right-hand side, reusing s
//   transpose(s)   state that solves against Aᵀ, derived from s without
//                  refactorising
//
// Every solver returns the pseudoinverse solution x = A†b on the operators it
// supports. allow_dependent_rows/columns report whether that still holds when
// A has linearly dependent rows/columns; the derivative rules in autodiff.hpp
// dispatch on them.

#include "linx/error.hpp"
#include "linx/operator.hpp"
#include "linx/tree.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace linx {

enum class Result { success, singular, max_steps_reached, breakdown };

std::string_view to_string(Result r);

struct Diagnostics {
    double residual_norm = 0.0;
    std::size_t iterations = 0; // 0 for direct solvers
};

struct Solution {
    TreeVector value;
    Result result = Result::success;
    Diagnostics diagnostics;

    bool ok() const { return result == Result::success; }
};

/// Base of every solver-specific factorisation. `op` is the operator this
/// state solves against; transposed states carry the transposed operator.
struct SolverState {
    virtual ~SolverState() = default;

    OperatorPtr op;
    bool transposed = false;
};

using StatePtr = std::shared_ptr<const SolverState>;

class Solver {
public:
    virtual ~Solver() = default;

    virtual std::string name() const = 0;

    /// Throws ContractError when the solver cannot handle an operator of this
    /// shape and tag set. Never looks at operator entries.
    virtual void check(const OperatorShape& shape) const = 0;

    virtual StatePtr init(const OperatorPtr& op) const = 0;
    virtual Solution compute(const StatePtr& state, const TreeVector& b) const = 0;
    virtual StatePtr transpose(const StatePtr& state) const = 0;

    virtual bool allow_dependent_rows(const OperatorShape& shape) const = 0;
    virtual bool allow_dependent_columns(const OperatorShape& shape) const = 0;
};

using SolverPtr = std::shared_ptr<const Solver>;

/// Casts a state to the concrete type a solver expects; ContractError otherwise.
template <class S>
const S& state_cast(const StatePtr& state, const char* solver)
{
    const auto* s = dynamic_cast<const S*>(state.get());
    if (!s) throw ContractError(std::string(solver) + ": state was not produced by this solver");
    return *s;
}

namespace detail {

/// Validates b against the state's operator and wraps a flat solution.
/// The residual ‖b − A x‖ is recomputed through the operator.
Solution make_solution(const SolverState& state, std::span<const double> b, std::vector<double> x, Result result,
                       std::size_t iterations = 0);
void check_rhs(const SolverState& state, const TreeVector& b);
Solution failed_solution(const SolverState& state, Result result, std::size_t iterations = 0);

void require_square(const OperatorShape& shape, const std::string& solver);
void require_tag(bool present, const std::string& solver, const char* tag);

} // namespace detail

} // namespace linx
