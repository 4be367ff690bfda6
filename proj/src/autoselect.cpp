#include "linx/autoselect.hpp"

#include "linx/direct.hpp"
#include "linx/error.hpp"

namespace linx {

WellPosed parse_well_posed(std::string_view text)
{
    if (text == "true") return WellPosed::yes;
    if (text == "false") return WellPosed::no;
    if (text == "none") return WellPosed::none;
    throw ContractError("well_posed mode must be true, false or none, got '" + std::string(text) + "'");
}

std::string_view to_string(WellPosed mode)
{
    switch (mode) {
    case WellPosed::yes: return "true";
    case WellPosed::no: return "false";
    case WellPosed::none: return "none";
    }
    return "unknown";
}

namespace {

SolverPtr square_chain(const TagSet& t)
{
    if (t.diagonal) return std::make_shared<DiagonalSolver>();
    if (t.tridiagonal) return std::make_shared<TridiagonalSolver>();
    if (t.triangular()) return std::make_shared<TriangularSolver>();
    if (t.symmetric && t.positive_semidefinite) return std::make_shared<CholeskySolver>();
    return std::make_shared<LuSolver>();
}

} // namespace

SolverPtr auto_select(const OperatorShape& shape, WellPosed mode)
{
    const TagSet t = shape.tags.normalized();
    switch (mode) {
    case WellPosed::yes:
        if (!shape.square())
            throw ContractError("AutoLinearSolver(well_posed=true) cannot handle a non-square "
                                + std::to_string(shape.rows) + "x" + std::to_string(shape.cols)
                                + " operator; use well_posed=none or false for least squares");
        return square_chain(t);
    case WellPosed::none:
        if (shape.square()) return square_chain(t);
        return std::make_shared<QrSolver>();
    case WellPosed::no:
        if (shape.square() && t.diagonal) return std::make_shared<DiagonalSolver>(true);
        return std::make_shared<SvdSolver>();
    }
    throw ContractError("unknown well_posed mode");
}

namespace {

struct AutoState final : SolverState {
    SolverPtr solver;
    StatePtr inner;
};

} // namespace

void AutoLinearSolver::check(const OperatorShape& shape) const { select(shape)->check(shape); }

StatePtr AutoLinearSolver::init(const OperatorPtr& op) const
{
    auto s = std::make_shared<AutoState>();
    s->op = op;
    s->solver = select(op->shape());
    s->inner = s->solver->init(op);
    return s;
}

Solution AutoLinearSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<AutoState>(state, "auto");
    return s.solver->compute(s.inner, b);
}

StatePtr AutoLinearSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<AutoState>(state, "auto");
    auto t = std::make_shared<AutoState>();
    t->solver = s.solver;
    t->inner = s.solver->transpose(s.inner);
    t->op = t->inner->op;
    t->transposed = !s.transposed;
    return t;
}

bool AutoLinearSolver::allow_dependent_rows(const OperatorShape& shape) const
{
    return select(shape)->allow_dependent_rows(shape);
}

bool AutoLinearSolver::allow_dependent_columns(const OperatorShape& shape) const
{
    return select(shape)->allow_dependent_columns(shape);
}

void check_compatibility(const Solver& solver, const LinearOperator& op) { solver.check(op.shape()); }

Solution linear_solve(const OperatorPtr& a, const TreeVector& b, const Solver& solver)
{
    require_same_structure(b.structure(), a->out_structure(), "linear_solve right-hand side");
    check_compatibility(solver, *a);
    return solver.compute(solver.init(a), b);
}

const std::vector<std::string>& solver_names()
{
    static const std::vector<std::string> names{"auto",       "lu",          "qr", "svd",   "cholesky", "diagonal",
                                                "triangular", "tridiagonal", "cg", "gmres", "bicgstab"};
    return names;
}

SolverPtr make_solver(std::string_view name, WellPosed mode, IterativeOptions options)
{
    if (name == "auto") return std::make_shared<AutoLinearSolver>(mode);
    if (name == "lu") return std::make_shared<LuSolver>();
    if (name == "qr") return std::make_shared<QrSolver>();
    if (name == "svd") return std::make_shared<SvdSolver>();
    if (name == "cholesky") return std::make_shared<CholeskySolver>();
    if (name == "diagonal") return std::make_shared<DiagonalSolver>(mode == WellPosed::no);
    if (name == "triangular") return std::make_shared<TriangularSolver>();
    if (name == "tridiagonal") return std::make_shared<TridiagonalSolver>();
    if (name == "cg") return std::make_shared<CgSolver>(options);
    if (name == "gmres") return std::make_shared<GmresSolver>(options);
    if (name == "bicgstab") return std::make_shared<BicgstabSolver>(options);
    throw ContractError("unknown solver '" + std::string(name) + "'");
}

} // namespace linx
