#include "linx/iterative.hpp"

#include "linx/error.hpp"

#include <cmath>
#include <limits>

namespace linx {

namespace {

struct KrylovState final : SolverState {};

constexpr double kTiny = 1e-30;

struct Tolerance {
    double value;
    bool met(double residual) const { return residual <= value; }
};

Tolerance tolerance(const IterativeOptions& o, std::span<const double> b)
{
    return {std::max(o.rtol * vec::norm(b), o.atol)};
}

std::vector<double> true_residual(const LinearOperator& a, std::span<const double> b, std::span<const double> x)
{
    return vec::sub(b, a.apply(x));
}

Solution finish(const SolverState& s, std::vector<double> x, Result result, double residual, std::size_t iterations)
{
    return Solution{TreeVector(s.op->in_structure(), std::move(x)), result, Diagnostics{residual, iterations}};
}

} // namespace

void IterativeOptions::validate() const
{
    if (!(rtol >= 0.0) || !(atol >= 0.0)) throw ContractError("iterative solver tolerances must be nonnegative");
    if (max_steps && *max_steps < 1) throw ContractError("max_steps must be at least 1");
    if (restart < 1) throw ContractError("restart must be at least 1");
}

IterativeSolver::IterativeSolver(IterativeOptions options) : options_(options) { options_.validate(); }

StatePtr IterativeSolver::init(const OperatorPtr& op) const
{
    check(op->shape());
    auto s = std::make_shared<KrylovState>();
    s->op = op;
    return s;
}

// ---------------------------------------------------------------------------
// Conjugate gradient

void CgSolver::check(const OperatorShape& shape) const
{
    detail::require_square(shape, name());
    detail::require_tag(shape.tags.symmetric, name(), "symmetric");
    detail::require_tag(shape.tags.positive_semidefinite, name(), "positive_semidefinite");
}

Solution CgSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<KrylovState>(state, "cg");
    detail::check_rhs(s, b);
    const LinearOperator& a = *s.op;
    const auto rhs = b.values();
    const std::size_t n = rhs.size();
    const std::size_t max_steps = options_.steps_for(n);
    const Tolerance tol = tolerance(options_, rhs);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    double rr = vec::dot(r, r);
    if (tol.met(std::sqrt(rr))) return finish(s, std::move(x), Result::success, std::sqrt(rr), 0);
    std::vector<double> p = r;

    for (std::size_t it = 1; it <= max_steps; ++it) {
        const auto ap = a.apply(p);
        const double pap = vec::dot(p, ap);
        if (!(pap > 0.0)) return finish(s, std::move(x), Result::breakdown, vec::norm(r), it);
        const double alpha = rr / pap;
        vec::axpy(alpha, p, x);
        vec::axpy(-alpha, ap, r);
        double rr_next = vec::dot(r, r);
        if (tol.met(std::sqrt(rr_next))) {
            // The recurrence drifts from b - Ax; confirm before stopping.
            r = true_residual(a, rhs, x);
            rr_next = vec::dot(r, r);
            if (tol.met(std::sqrt(rr_next))) return finish(s, std::move(x), Result::success, std::sqrt(rr_next), it);
            p = r;
            rr = rr_next;
            continue;
        }
        const double beta = rr_next / rr;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }
    const double res = vec::norm(true_residual(a, rhs, x));
    return finish(s, std::move(x), Result::max_steps_reached, res, max_steps);
}

// ---------------------------------------------------------------------------
// GMRES

void GmresSolver::check(const OperatorShape& shape) const { detail::require_square(shape, name()); }

Solution GmresSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<KrylovState>(state, "gmres");
    detail::check_rhs(s, b);
    const LinearOperator& a = *s.op;
    const auto rhs = b.values();
    const std::size_t n = rhs.size();
    const std::size_t max_steps = options_.steps_for(n);
    const std::size_t m = options_.restart;
    const Tolerance tol = tolerance(options_, rhs);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    double beta = vec::norm(r);
    if (tol.met(beta)) return finish(s, std::move(x), Result::success, beta, 0);

    std::size_t steps = 0;
    std::vector<std::vector<double>> basis;
    Matrix h(m + 1, m);
    std::vector<double> g(m + 1), cs(m), sn(m);

    while (steps < max_steps) {
        basis.assign(1, r);
        for (double& v : basis[0]) v /= beta;
        h = Matrix(m + 1, m);
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::size_t k = 0;
        bool happy = false;

        for (std::size_t j = 0; j < m && steps < max_steps; ++j) {
            auto w = a.apply(basis[j]);
            ++steps;
            const double w_norm0 = vec::norm(w);
            for (std::size_t i = 0; i <= j; ++i) {
                h(i, j) = vec::dot(w, basis[i]);
                vec::axpy(-h(i, j), basis[i], w);
            }
            const double h_next = vec::norm(w);
            h(j + 1, j) = h_next;
            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            const double rho = std::hypot(h(j, j), h(j + 1, j));
            cs[j] = rho == 0.0 ? 1.0 : h(j, j) / rho;
            sn[j] = rho == 0.0 ? 0.0 : h(j + 1, j) / rho;
            h(j, j) = rho;
            h(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            k = j + 1;

            if (h_next <= std::numeric_limits<double>::epsilon() * w_norm0) {
                happy = true;
                break;
            }
            if (tol.met(std::abs(g[j + 1]))) break;
            basis.push_back(std::move(w));
            for (double& v : basis.back()) v /= h_next;
        }

        // Back-substitute the k x k triangular system and update x.
        std::vector<double> y(k);
        for (std::size_t i = k; i-- > 0;) {
            if (h(i, i) == 0.0) {
                const double res = vec::norm(true_residual(a, rhs, x));
                return finish(s, std::move(x), Result::breakdown, res, steps);
            }
            double v = g[i];
            for (std::size_t j = i + 1; j < k; ++j) v -= h(i, j) * y[j];
            y[i] = v / h(i, i);
        }
        for (std::size_t i = 0; i < k; ++i) vec::axpy(y[i], basis[i], x);

        r = true_residual(a, rhs, x);
        beta = vec::norm(r);
        if (tol.met(beta)) return finish(s, std::move(x), Result::success, beta, steps);
        if (happy) return finish(s, std::move(x), Result::breakdown, beta, steps);
    }
    return finish(s, std::move(x), Result::max_steps_reached, beta, steps);
}

StatePtr GmresSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<KrylovState>(state, "gmres");
    auto t = std::make_shared<KrylovState>();
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    return t;
}

// ---------------------------------------------------------------------------
// BiCGStab

void BicgstabSolver::check(const OperatorShape& shape) const { detail::require_square(shape, name()); }

Solution BicgstabSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<KrylovState>(state, "bicgstab");
    detail::check_rhs(s, b);
    const LinearOperator& a = *s.op;
    const auto rhs = b.values();
    const std::size_t n = rhs.size();
    const std::size_t max_steps = options_.steps_for(n);
    const Tolerance tol = tolerance(options_, rhs);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    double rnorm = vec::norm(r);
    if (tol.met(rnorm)) return finish(s, std::move(x), Result::success, rnorm, 0);

    std::vector<double> r_hat = r, p(n, 0.0), v(n, 0.0), sv(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    bool fresh = true;

    // On a false convergence signal from the recurrence, restart from the
    // true residual with a new shadow vector.
    auto confirm = [&]() -> bool {
        r = true_residual(a, rhs, x);
        rnorm = vec::norm(r);
        if (tol.met(rnorm)) return true;
        r_hat = r;
        fresh = true;
        return false;
    };

    for (std::size_t it = 1; it <= max_steps; ++it) {
        const double rho_next = vec::dot(r_hat, r);
        if (std::abs(rho_next) < kTiny) return finish(s, std::move(x), Result::breakdown, rnorm, it);
        if (fresh) {
            p = r;
            fresh = false;
        } else {
            const double beta = (rho_next / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_next;
        v = a.apply(p);
        const double rv = vec::dot(r_hat, v);
        if (std::abs(rv) < kTiny) return finish(s, std::move(x), Result::breakdown, rnorm, it);
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) sv[i] = r[i] - alpha * v[i];
        if (tol.met(vec::norm(sv))) {
            vec::axpy(alpha, p, x);
            if (confirm()) return finish(s, std::move(x), Result::success, rnorm, it);
            continue;
        }
        const auto t = a.apply(sv);
        const double tt = vec::dot(t, t);
        if (tt < kTiny) return finish(s, std::move(x), Result::breakdown, rnorm, it);
        omega = vec::dot(t, sv) / tt;
        if (std::abs(omega) < kTiny) return finish(s, std::move(x), Result::breakdown, rnorm, it);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i] + omega * sv[i];
            r[i] = sv[i] - omega * t[i];
        }
        rnorm = vec::norm(r);
        if (tol.met(rnorm) && confirm()) return finish(s, std::move(x), Result::success, rnorm, it);
    }
    rnorm = vec::norm(true_residual(a, rhs, x));
    return finish(s, std::move(x), Result::max_steps_reached, rnorm, max_steps);
}

StatePtr BicgstabSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<KrylovState>(state, "bicgstab");
    auto t = std::make_shared<KrylovState>();
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    return t;
}

} // namespace linx
