#include "linx/direct.hpp"

#include "linx/error.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace linx {

namespace {

struct LuFactors {
    Matrix lu;                     // unit lower L below the diagonal, U on and above
    std::vector<std::size_t> perm; // row i of PA is row perm[i] of A
    bool singular = false;
};

struct LuState final : SolverState {
    std::shared_ptr<const LuFactors> factors;
};

LuFactors factor(Matrix a)
{
    const std::size_t n = a.rows();
    LuFactors f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs(a);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (!(std::abs(a(p, k)) > tiny)) {
            f.singular = true;
            break;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(f.perm[k], f.perm[p]);
        }
        const double pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / pivot;
            a(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

} // namespace

void LuSolver::check(const OperatorShape& shape) const { detail::require_square(shape, name()); }

StatePtr LuSolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    auto s = std::make_shared<LuState>();
    s->op = op;
    s->factors = std::make_shared<const LuFactors>(factor(op->as_matrix()));
    return s;
}

Solution LuSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<LuState>(state, "lu");
    detail::check_rhs(s, b);
    const LuFactors& f = *s.factors;
    if (f.singular) return detail::failed_solution(s, Result::singular);

    const Matrix& lu = f.lu;
    const std::size_t n = lu.rows();
    const auto rhs = b.values();
    std::vector<double> x(n);

    if (!s.transposed) {
        // L y = P b, then U x = y.
        for (std::size_t i = 0; i < n; ++i) {
            double v = rhs[f.perm[i]];
            for (std::size_t j = 0; j < i; ++j) v -= lu(i, j) * x[j];
            x[i] = v;
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = x[i];
            for (std::size_t j = i + 1; j < n; ++j) v -= lu(i, j) * x[j];
            x[i] = v / lu(i, i);
        }
    } else {
        // Aᵀ = Uᵀ Lᵀ P: Uᵀ w = c, Lᵀ z = w, x = Pᵀ z.
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = rhs[i];
            for (std::size_t j = 0; j < i; ++j) v -= lu(j, i) * z[j];
            z[i] = v / lu(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = z[i];
            for (std::size_t j = i + 1; j < n; ++j) v -= lu(j, i) * z[j];
            z[i] = v;
        }
        for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = z[i];
    }
    return detail::make_solution(s, rhs, std::move(x), Result::success);
}

StatePtr LuSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<LuState>(state, "lu");
    auto t = std::make_shared<LuState>();
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    t->factors = s.factors;
    return t;
}

} // namespace linx
