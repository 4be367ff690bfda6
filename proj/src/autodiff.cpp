#include "linx/autodiff.hpp"

#include "linx/autoselect.hpp"
#include "linx/direct.hpp"
#include "linx/error.hpp"

namespace linx {

std::string_view to_string(JvpCase c)
{
    switch (c) {
    case JvpCase::well_posed: return "well_posed";
    case JvpCase::independent_rows: return "independent_rows";
    case JvpCase::independent_columns: return "independent_columns";
    case JvpCase::general: return "general";
    }
    return "unknown";
}

JvpCase parse_jvp_case(std::string_view text)
{
    for (JvpCase c : {JvpCase::well_posed, JvpCase::independent_rows, JvpCase::independent_columns, JvpCase::general})
        if (text == to_string(c)) return c;
    throw ContractError("unknown derivative case '" + std::string(text) + "'");
}

JvpCase jvp_case(const Solver& solver, const LinearOperator& a)
{
    const OperatorShape shape = a.shape();
    const bool dep_rows = solver.allow_dependent_rows(shape);
    const bool dep_cols = solver.allow_dependent_columns(shape);
    if (dep_rows && dep_cols) return JvpCase::general;
    if (dep_rows) return JvpCase::independent_columns;
    if (dep_cols) return JvpCase::independent_rows;
    return JvpCase::well_posed;
}

namespace {

bool uses_residual_term(JvpCase c) { return c == JvpCase::general || c == JvpCase::independent_columns; }
bool uses_nullspace_term(JvpCase c) { return c == JvpCase::general || c == JvpCase::independent_rows; }

// Applies A† and (A†)ᵀ through one primal state. The transposed state is
// derived on first use. The first failing inner solve is remembered.
class Pseudoinverse {
public:
    Pseudoinverse(const Solver& solver, const OperatorPtr& a, StatePtr state)
        : solver_(solver), a_(a), state_(std::move(state))
    {
    }

    /// A† y, y in the output space.
    std::vector<double> apply(std::vector<double> y) { return run(state_, a_->out_structure(), std::move(y)); }

    /// (A†)ᵀ x, x in the input space.
    std::vector<double> apply_transpose(std::vector<double> x)
    {
        if (!transposed_) transposed_ = solver_.transpose(state_);
        return run(transposed_, a_->in_structure(), std::move(x));
    }

    Result result() const { return result_; }

private:
    std::vector<double> run(const StatePtr& s, const TreeStructure& structure, std::vector<double> rhs)
    {
        Solution sol = solver_.compute(s, TreeVector(structure, std::move(rhs)));
        if (!sol.ok() && result_ == Result::success) result_ = sol.result;
        return flatten(sol.value);
    }

    const Solver& solver_;
    const OperatorPtr& a_;
    StatePtr state_;
    StatePtr transposed_;
    Result result_ = Result::success;
};

struct Primal {
    StatePtr state;
    Solution solution;
};

Primal solve_primal(const Solver& solver, const OperatorPtr& a, const TreeVector& b)
{
    require_same_structure(b.structure(), a->out_structure(), "right-hand side");
    check_compatibility(solver, *a);
    StatePtr state = solver.init(a);
    Solution sol = solver.compute(state, b);
    return {std::move(state), std::move(sol)};
}

} // namespace

JvpResult jvp_solve_as(JvpCase formula, const Solver& solver, const OperatorPtr& a, const TreeVector& b,
                       const SolveTangent& tangent)
{
    if (tangent.V) {
        require_same_structure(tangent.V->in_structure(), a->in_structure(), "tangent operator input");
        require_same_structure(tangent.V->out_structure(), a->out_structure(), "tangent operator output");
    }
    if (tangent.v) require_same_structure(tangent.v->structure(), b.structure(), "tangent vector");

    Primal primal = solve_primal(solver, a, b);
    JvpResult out{std::move(primal.solution), std::nullopt, Result::success, formula};
    if (!out.primal.ok()) {
        out.tangent_result = out.primal.result;
        return out;
    }

    Pseudoinverse pinv(solver, a, primal.state);
    const auto x = out.primal.value.values();
    std::vector<double> rhs = tangent.v ? flatten(*tangent.v) : std::vector<double>(a->rows(), 0.0);
    std::vector<double> z;

    if (tangent.V) {
        const OperatorPtr& V = tangent.V;
        vec::axpy(-1.0, V->apply(x), rhs);
        if (uses_residual_term(formula)) {
            const auto r = vec::sub(b.values(), a->apply(x));
            vec::axpy(1.0, pinv.apply_transpose(V->apply_transpose(r)), rhs);
        }
        if (uses_nullspace_term(formula)) {
            z = V->apply_transpose(pinv.apply_transpose({x.begin(), x.end()}));
            vec::axpy(-1.0, a->apply(z), rhs);
        }
    }

    std::vector<double> x_dot = pinv.apply(std::move(rhs));
    if (!z.empty()) vec::axpy(1.0, z, x_dot);

    out.tangent_result = pinv.result();
    if (pinv.result() == Result::success) out.tangent = TreeVector(a->in_structure(), std::move(x_dot));
    return out;
}

JvpResult jvp_solve(const Solver& solver, const OperatorPtr& a, const TreeVector& b, const SolveTangent& tangent)
{
    return jvp_solve_as(jvp_case(solver, *a), solver, a, b, tangent);
}

VjpResult vjp_solve_as(JvpCase formula, const Solver& solver, const OperatorPtr& a, const TreeVector& b,
                       const TreeVector& x_bar)
{
    require_same_structure(x_bar.structure(), a->in_structure(), "solution cotangent");
    Primal primal = solve_primal(solver, a, b);
    VjpResult out{std::move(primal.solution), std::nullopt, Result::success, formula};
    if (!out.primal.ok()) {
        out.cotangent_result = out.primal.result;
        return out;
    }

    Pseudoinverse pinv(solver, a, primal.state);
    const auto x = out.primal.value.values();
    const auto xb = x_bar.values();

    const auto y = pinv.apply_transpose({xb.begin(), xb.end()});
    Matrix v_bar = -1.0 * outer(y, x);
    if (uses_residual_term(formula)) {
        const auto r = vec::sub(b.values(), a->apply(x));
        v_bar = v_bar + outer(r, pinv.apply(y));
    }
    if (uses_nullspace_term(formula)) {
        const auto w = pinv.apply_transpose({x.begin(), x.end()});
        v_bar = v_bar - outer(w, a->apply_transpose(y)) + outer(w, xb);
    }

    out.cotangent_result = pinv.result();
    if (pinv.result() == Result::success)
        out.cotangent = SolveCotangent{std::move(v_bar), TreeVector(b.structure(), y)};
    return out;
}

VjpResult vjp_solve(const Solver& solver, const OperatorPtr& a, const TreeVector& b, const TreeVector& x_bar)
{
    return vjp_solve_as(jvp_case(solver, *a), solver, a, b, x_bar);
}

std::optional<std::vector<double>> project_cotangent(const LinearOperator& a, const Matrix& V_bar)
{
    if (V_bar.rows() != a.rows() || V_bar.cols() != a.cols())
        throw StructureError("cotangent shape does not match the operator");
    if (dynamic_cast<const MatrixOperator*>(&a)) return std::vector<double>(V_bar.data().begin(), V_bar.data().end());
    if (dynamic_cast<const DiagonalOperator*>(&a)) {
        std::vector<double> d(a.rows());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = V_bar(i, i);
        return d;
    }
    if (dynamic_cast<const TridiagonalOperator*>(&a)) {
        const std::size_t n = a.rows();
        std::vector<double> p;
        p.reserve(3 * n);
        for (std::size_t i = 0; i + 1 < n; ++i) p.push_back(V_bar(i + 1, i));
        for (std::size_t i = 0; i < n; ++i) p.push_back(V_bar(i, i));
        for (std::size_t i = 0; i + 1 < n; ++i) p.push_back(V_bar(i, i + 1));
        return p;
    }
    if (const auto* s = dynamic_cast<const ScaledOperator*>(&a))
        return std::vector<double>{frobenius_dot(V_bar, s->inner()->as_matrix())};
    return std::nullopt;
}

TreeVector finite_difference_jvp(const Matrix& a, const TreeVector& b, const Matrix& V, const TreeVector& v, double h)
{
    if (!(h > 0.0)) throw ContractError("finite difference step must be positive");
    if (V.rows() != a.rows() || V.cols() != a.cols()) throw StructureError("tangent matrix shape mismatch");
    require_same_structure(b.structure(), v.structure(), "finite_difference_jvp");
    if (b.size() != a.rows()) throw StructureError("right-hand side length does not match the matrix");

    const SvdSolver svd_solver;
    auto solve = [&](double t) {
        const auto op = matrix_operator(a + t * V);
        const TreeVector rhs(flatten(axpy(t, v, b)));
        return flatten(linear_solve(op, rhs, svd_solver).value);
    };
    const auto plus = solve(h);
    const auto minus = solve(-h);
    std::vector<double> d(plus.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (plus[i] - minus[i]) / (2.0 * h);
    return TreeVector(std::move(d));
}

} // namespace linx
