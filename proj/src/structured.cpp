#include "linx/direct.hpp"

#include "linx/error.hpp"

namespace linx {

// ---------------------------------------------------------------------------
// Diagonal

namespace {

struct DiagonalState final : SolverState {
    std::shared_ptr<const std::vector<double>> d;
};

} // namespace

void DiagonalSolver::check(const OperatorShape& shape) const
{
    detail::require_square(shape, name());
    detail::require_tag(shape.tags.diagonal, name(), "diagonal");
}

StatePtr DiagonalSolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    auto s = std::make_shared<DiagonalState>();
    s->op = op;
    s->d = std::make_shared<const std::vector<double>>(diagonal_of(*op));
    return s;
}

Solution DiagonalSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<DiagonalState>(state, "diagonal");
    detail::check_rhs(s, b);
    const auto& d = *s.d;
    std::vector<double> x(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) {
            if (!pseudoinverse_) return detail::failed_solution(s, Result::singular);
            x[i] = 0.0;
        } else {
            x[i] = b[i] / d[i];
        }
    }
    return detail::make_solution(s, b.values(), std::move(x), Result::success);
}

// ---------------------------------------------------------------------------
// Triangular

namespace {

struct TriangularState final : SolverState {
    std::shared_ptr<const Matrix> a;
    bool lower = true;        // triangle of the stored matrix
    bool unit_diagonal = false;
};

} // namespace

void TriangularSolver::check(const OperatorShape& shape) const
{
    detail::require_square(shape, name());
    detail::require_tag(shape.tags.triangular(), name(), "lower_triangular or upper_triangular");
}

StatePtr TriangularSolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    auto s = std::make_shared<TriangularState>();
    s->op = op;
    s->a = std::make_shared<const Matrix>(op->as_matrix());
    s->lower = op->tags().lower_triangular;
    s->unit_diagonal = op->tags().unit_diagonal;
    return s;
}

Solution TriangularSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<TriangularState>(state, "triangular");
    detail::check_rhs(s, b);
    const Matrix& a = *s.a;
    const std::size_t n = a.rows();
    // A transposed state solves with Aᵀ, whose triangle is flipped.
    const bool forward = s.lower != s.transposed;
    auto entry = [&](std::size_t i, std::size_t j) { return s.transposed ? a(j, i) : a(i, j); };

    if (!s.unit_diagonal)
        for (std::size_t i = 0; i < n; ++i)
            if (a(i, i) == 0.0) return detail::failed_solution(s, Result::singular);

    std::vector<double> x(n);
    auto solve_row = [&](std::size_t i, std::size_t lo, std::size_t hi) {
        double v = b[i];
        for (std::size_t j = lo; j < hi; ++j) v -= entry(i, j) * x[j];
        x[i] = s.unit_diagonal ? v : v / a(i, i);
    };
    if (forward) {
        for (std::size_t i = 0; i < n; ++i) solve_row(i, 0, i);
    } else {
        for (std::size_t i = n; i-- > 0;) solve_row(i, i + 1, n);
    }
    return detail::make_solution(s, b.values(), std::move(x), Result::success);
}

StatePtr TriangularSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<TriangularState>(state, "triangular");
    auto t = std::make_shared<TriangularState>(s);
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    return t;
}

// ---------------------------------------------------------------------------
// Tridiagonal (Thomas algorithm)

namespace {

struct TridiagonalState final : SolverState {
    std::shared_ptr<const Bands> bands;
};

} // namespace

void TridiagonalSolver::check(const OperatorShape& shape) const
{
    detail::require_square(shape, name());
    detail::require_tag(shape.tags.tridiagonal, name(), "tridiagonal");
}

StatePtr TridiagonalSolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    auto s = std::make_shared<TridiagonalState>();
    s->op = op;
    s->bands = std::make_shared<const Bands>(tridiagonal_of(*op));
    return s;
}

Solution TridiagonalSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<TridiagonalState>(state, "tridiagonal");
    detail::check_rhs(s, b);
    const auto& main = s.bands->main;
    // Transposing a tridiagonal matrix swaps its sub- and superdiagonal.
    const auto& sub = s.transposed ? s.bands->upper : s.bands->lower;
    const auto& sup = s.transposed ? s.bands->lower : s.bands->upper;
    const std::size_t n = main.size();
    if (n == 0) return detail::make_solution(s, b.values(), {}, Result::success);

    std::vector<double> c(n, 0.0), x(n);
    double pivot = main[0];
    if (pivot == 0.0) return detail::failed_solution(s, Result::singular);
    if (n > 1) c[0] = sup[0] / pivot;
    x[0] = b[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = main[i] - sub[i - 1] * c[i - 1];
        if (pivot == 0.0) return detail::failed_solution(s, Result::singular);
        if (i + 1 < n) c[i] = sup[i] / pivot;
        x[i] = (b[i] - sub[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return detail::make_solution(s, b.values(), std::move(x), Result::success);
}

StatePtr TridiagonalSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<TridiagonalState>(state, "tridiagonal");
    auto t = std::make_shared<TridiagonalState>(s);
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    return t;
}

} // namespace linx
