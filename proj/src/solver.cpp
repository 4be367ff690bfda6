#include "linx/solver.hpp"

#include "linx/error.hpp"

#include <limits>

namespace linx {

std::string_view to_string(Result r)
{
    switch (r) {
    case Result::success: return "success";
    case Result::singular: return "singular";
    case Result::max_steps_reached: return "max_steps_reached";
    case Result::breakdown: return "breakdown";
    }
    return "unknown";
}

namespace detail {

void check_rhs(const SolverState& state, const TreeVector& b)
{
    require_same_structure(b.structure(), state.op->out_structure(), "right-hand side");
}

Solution make_solution(const SolverState& state, std::span<const double> b, std::vector<double> x, Result result,
                       std::size_t iterations)
{
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (result == Result::success) residual = vec::norm(vec::sub(b, state.op->apply(x)));
    return Solution{TreeVector(state.op->in_structure(), std::move(x)), result, Diagnostics{residual, iterations}};
}

Solution failed_solution(const SolverState& state, Result result, std::size_t iterations)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return Solution{TreeVector(state.op->in_structure(), std::vector<double>(state.op->cols(), nan)), result,
                    Diagnostics{nan, iterations}};
}

void require_square(const OperatorShape& shape, const std::string& solver)
{
    if (!shape.square())
        throw ContractError(solver + " requires a square operator, got " + std::to_string(shape.rows) + "x"
                            + std::to_string(shape.cols));
}

void require_tag(bool present, const std::string& solver, const char* tag)
{
    if (!present) throw ContractError(solver + " requires the operator to be tagged " + tag);
}

} // namespace detail

} // namespace linx
