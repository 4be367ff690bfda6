#include "linx/direct.hpp"

#include "linx/error.hpp"

#include <cmath>
#include <limits>

namespace linx {

namespace {

struct CholeskyState final : SolverState {
    std::shared_ptr<const Matrix> l; // lower factor, A = L Lᵀ
    bool singular = false;
};

} // namespace

void CholeskySolver::check(const OperatorShape& shape) const
{
    detail::require_square(shape, name());
    detail::require_tag(shape.tags.symmetric, name(), "symmetric");
    detail::require_tag(shape.tags.positive_semidefinite, name(), "positive_semidefinite");
}

StatePtr CholeskySolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    const Matrix a = op->as_matrix();
    const std::size_t n = a.rows();
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(a(i, i)));
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * dmax;

    auto s = std::make_shared<CholeskyState>();
    s->op = op;
    Matrix l(n, n);
    for (std::size_t j = 0; j < n && !s->singular; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > tiny)) {
            s->singular = true;
            break;
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    s->l = std::make_shared<const Matrix>(std::move(l));
    return s;
}

Solution CholeskySolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<CholeskyState>(state, "cholesky");
    detail::check_rhs(s, b);
    if (s.singular) return detail::failed_solution(s, Result::singular);
    const Matrix& l = *s.l;
    const std::size_t n = l.rows();
    const auto rhs = b.values();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x[k];
        x[i] = v / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double v = x[i];
        for (std::size_t k = i + 1; k < n; ++k) v -= l(k, i) * x[k];
        x[i] = v / l(i, i);
    }
    return detail::make_solution(s, rhs, std::move(x), Result::success);
}

} // namespace linx
