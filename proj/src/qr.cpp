#include "linx/direct.hpp"

#include "linx/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linx {

namespace {

// Householder QR of a p x q matrix M with p >= q: M = Q R, Q = H_0 ... H_{q-1},
// H_k = I - beta_k v_k v_kᵀ with v_k supported on rows k..p-1.
struct QrFactors {
    Matrix v;                  // p x q, column k holds v_k
    std::vector<double> beta;  // q
    Matrix r;                  // q x q upper triangular
    bool rank_deficient = false;
};

struct QrState final : SolverState {
    std::shared_ptr<const QrFactors> factors;
    // true: the operator is M (tall or square, least squares);
    // false: the operator is Mᵀ (wide, minimum norm).
    bool operator_is_m = true;
};

QrFactors factor(Matrix m)
{
    const std::size_t p = m.rows();
    const std::size_t q = m.cols();
    QrFactors f{Matrix(p, q), std::vector<double>(q, 0.0), Matrix(q, q), false};

    for (std::size_t k = 0; k < q; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < p; ++i) norm2 += m(i, k) * m(i, k);
        const double normx = std::sqrt(norm2);
        if (normx == 0.0) continue; // H_k = I, R_kk = 0
        const double alpha = -std::copysign(normx, m(k, k));
        for (std::size_t i = k; i < p; ++i) f.v(i, k) = m(i, k);
        f.v(k, k) -= alpha;
        double vtv = 0.0;
        for (std::size_t i = k; i < p; ++i) vtv += f.v(i, k) * f.v(i, k);
        f.beta[k] = 2.0 / vtv;
        m(k, k) = alpha;
        for (std::size_t i = k + 1; i < p; ++i) m(i, k) = 0.0;
        for (std::size_t j = k + 1; j < q; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < p; ++i) s += f.v(i, k) * m(i, j);
            s *= f.beta[k];
            for (std::size_t i = k; i < p; ++i) m(i, j) -= s * f.v(i, k);
        }
    }

    double rmax = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
        for (std::size_t j = k; j < q; ++j) f.r(k, j) = m(k, j);
        rmax = std::max(rmax, std::abs(m(k, k)));
    }
    const double tol = static_cast<double>(std::max(p, q)) * std::numeric_limits<double>::epsilon() * rmax;
    for (std::size_t k = 0; k < q; ++k)
        if (!(std::abs(f.r(k, k)) > tol)) f.rank_deficient = true;
    return f;
}

void apply_reflector(const QrFactors& f, std::size_t k, std::vector<double>& x)
{
    const std::size_t p = f.v.rows();
    double s = 0.0;
    for (std::size_t i = k; i < p; ++i) s += f.v(i, k) * x[i];
    s *= f.beta[k];
    for (std::size_t i = k; i < p; ++i) x[i] -= s * f.v(i, k);
}

// argmin ‖M x − b‖: x = R⁻¹ (Qᵀ b)[0:q].
std::vector<double> least_squares(const QrFactors& f, std::span<const double> b)
{
    const std::size_t q = f.r.rows();
    std::vector<double> c(b.begin(), b.end());
    for (std::size_t k = 0; k < q; ++k) apply_reflector(f, k, c);
    std::vector<double> x(q);
    for (std::size_t i = q; i-- > 0;) {
        double s = c[i];
        for (std::size_t j = i + 1; j < q; ++j) s -= f.r(i, j) * x[j];
        x[i] = s / f.r(i, i);
    }
    return x;
}

// Minimum-norm x with Mᵀ x = b: Mᵀ = Rᵀ Q₁ᵀ, so x = Q [R⁻ᵀ b; 0].
std::vector<double> minimum_norm(const QrFactors& f, std::span<const double> b)
{
    const std::size_t p = f.v.rows();
    const std::size_t q = f.r.rows();
    std::vector<double> x(p, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.r(j, i) * x[j];
        x[i] = s / f.r(i, i);
    }
    for (std::size_t k = q; k-- > 0;) apply_reflector(f, k, x);
    return x;
}

} // namespace

StatePtr QrSolver::init(const OperatorPtr& op) const
{
    auto s = std::make_shared<QrState>();
    s->op = op;
    const Matrix a = op->as_matrix();
    s->operator_is_m = a.rows() >= a.cols();
    s->factors = std::make_shared<const QrFactors>(factor(s->operator_is_m ? a : a.transposed()));
    return s;
}

Solution QrSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<QrState>(state, "qr");
    detail::check_rhs(s, b);
    if (s.factors->rank_deficient) return detail::failed_solution(s, Result::singular);
    auto x = s.operator_is_m ? least_squares(*s.factors, b.values()) : minimum_norm(*s.factors, b.values());
    return detail::make_solution(s, b.values(), std::move(x), Result::success);
}

StatePtr QrSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<QrState>(state, "qr");
    auto t = std::make_shared<QrState>();
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    t->factors = s.factors;
    t->operator_is_m = !s.operator_is_m;
    return t;
}

} // namespace linx
