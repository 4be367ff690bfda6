#include "linx/direct.hpp"

#include "linx/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace linx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Golub-Reinsch SVD of an m x n matrix with m >= n. On return `a` holds U
// (m x n), w the singular values (unsorted, nonnegative) and v holds V (n x n).
bool golub_reinsch(Matrix& a, std::vector<double>& w, Matrix& v)
{
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    w.assign(n, 0.0);
    v = Matrix(n, n);
    if (n == 0) return true;
    std::vector<double> e(n, 0.0); // superdiagonal, e[0] unused (always 0)

    // Householder reduction to upper bidiagonal form.
    double g = 0.0, scale = 0.0, anorm = 0.0;
    std::size_t l = 0;
    for (std::size_t i = 0; i < n; ++i) {
        l = i + 1;
        e[i] = scale * g;
        g = scale = 0.0;
        double s = 0.0;
        for (std::size_t k = i; k < m; ++k) scale += std::abs(a(k, i));
        if (scale != 0.0) {
            for (std::size_t k = i; k < m; ++k) {
                a(k, i) /= scale;
                s += a(k, i) * a(k, i);
            }
            double f = a(i, i);
            g = -std::copysign(std::sqrt(s), f);
            const double h = f * g - s;
            a(i, i) = f - g;
            for (std::size_t j = l; j < n; ++j) {
                s = 0.0;
                for (std::size_t k = i; k < m; ++k) s += a(k, i) * a(k, j);
                f = s / h;
                for (std::size_t k = i; k < m; ++k) a(k, j) += f * a(k, i);
            }
            for (std::size_t k = i; k < m; ++k) a(k, i) *= scale;
        }
        w[i] = scale * g;
        g = s = scale = 0.0;
        if (i + 1 != n) {
            for (std::size_t k = l; k < n; ++k) scale += std::abs(a(i, k));
            if (scale != 0.0) {
                for (std::size_t k = l; k < n; ++k) {
                    a(i, k) /= scale;
                    s += a(i, k) * a(i, k);
                }
                const double f = a(i, l);
                g = -std::copysign(std::sqrt(s), f);
                const double h = f * g - s;
                a(i, l) = f - g;
                for (std::size_t k = l; k < n; ++k) e[k] = a(i, k) / h;
                for (std::size_t j = l; j < m; ++j) {
                    s = 0.0;
                    for (std::size_t k = l; k < n; ++k) s += a(j, k) * a(i, k);
                    for (std::size_t k = l; k < n; ++k) a(j, k) += s * e[k];
                }
                for (std::size_t k = l; k < n; ++k) a(i, k) *= scale;
            }
        }
        anorm = std::max(anorm, std::abs(w[i]) + std::abs(e[i]));
    }

    // Accumulate the right-hand transformations into V.
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) {
            if (g != 0.0) {
                for (std::size_t j = l; j < n; ++j) v(j, i) = (a(i, j) / a(i, l)) / g;
                for (std::size_t j = l; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t k = l; k < n; ++k) s += a(i, k) * v(k, j);
                    for (std::size_t k = l; k < n; ++k) v(k, j) += s * v(k, i);
                }
            }
            for (std::size_t j = l; j < n; ++j) v(i, j) = v(j, i) = 0.0;
        }
        v(i, i) = 1.0;
        g = e[i];
        l = i;
    }

    // Accumulate the left-hand transformations into U (in place).
    for (std::size_t i = n; i-- > 0;) {
        l = i + 1;
        g = w[i];
        for (std::size_t j = l; j < n; ++j) a(i, j) = 0.0;
        if (g != 0.0) {
            g = 1.0 / g;
            for (std::size_t j = l; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = l; k < m; ++k) s += a(k, i) * a(k, j);
                const double f = (s / a(i, i)) * g;
                for (std::size_t k = i; k < m; ++k) a(k, j) += f * a(k, i);
            }
            for (std::size_t j = i; j < m; ++j) a(j, i) *= g;
        } else {
            for (std::size_t j = i; j < m; ++j) a(j, i) = 0.0;
        }
        a(i, i) += 1.0;
    }

    // Diagonalise the bidiagonal form with implicit-shift QR sweeps.
    const std::size_t max_sweeps = 75 * n;
    std::size_t sweeps = 0;
    for (std::size_t k = n; k-- > 0;) {
        for (;;) {
            bool cancel = true;
            std::size_t nm = 0;
            for (l = k;; --l) {
                if (l == 0 || std::abs(e[l]) <= kEps * (std::abs(w[l - 1]) + std::abs(w[l]))) {
                    cancel = false;
                    break;
                }
                nm = l - 1;
                if (std::abs(w[nm]) <= kEps * anorm) break;
            }
            if (cancel) {
                // w[nm] is negligible: chase e[l] out with rotations from the left.
                double c = 0.0, s = 1.0;
                for (std::size_t i = l; i <= k; ++i) {
                    const double f = s * e[i];
                    e[i] = c * e[i];
                    if (std::abs(f) <= kEps * anorm) break;
                    g = w[i];
                    double h = std::hypot(f, g);
                    w[i] = h;
                    h = 1.0 / h;
                    c = g * h;
                    s = -f * h;
                    for (std::size_t j = 0; j < m; ++j) {
                        const double y = a(j, nm);
                        const double z = a(j, i);
                        a(j, nm) = y * c + z * s;
                        a(j, i) = z * c - y * s;
                    }
                }
            }
            double z = w[k];
            if (l == k) {
                if (z < 0.0) {
                    w[k] = -z;
                    for (std::size_t j = 0; j < n; ++j) v(j, k) = -v(j, k);
                }
                break;
            }
            if (++sweeps > max_sweeps) return false;

            // Wilkinson-style shift from the trailing 2x2 block.
            double x = w[l];
            nm = k - 1;
            double y = w[nm];
            g = e[nm];
            double h = e[k];
            double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
            g = std::hypot(f, 1.0);
            f = ((x - z) * (x + z) + h * ((y / (f + std::copysign(g, f))) - h)) / x;

            double c = 1.0, s = 1.0;
            for (std::size_t j = l; j <= nm; ++j) {
                const std::size_t i = j + 1;
                g = e[i];
                y = w[i];
                h = s * g;
                g = c * g;
                z = std::hypot(f, h);
                e[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                for (std::size_t jj = 0; jj < n; ++jj) {
                    x = v(jj, j);
                    z = v(jj, i);
                    v(jj, j) = x * c + z * s;
                    v(jj, i) = z * c - x * s;
                }
                z = std::hypot(f, h);
                w[j] = z;
                if (z != 0.0) {
                    z = 1.0 / z;
                    c = f * z;
                    s = h * z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
                for (std::size_t jj = 0; jj < m; ++jj) {
                    y = a(jj, j);
                    z = a(jj, i);
                    a(jj, j) = y * c + z * s;
                    a(jj, i) = z * c - y * s;
                }
            }
            e[l] = 0.0;
            e[k] = f;
            w[k] = x;
        }
    }
    return true;
}

Svd tall_svd(Matrix a)
{
    Svd out;
    std::vector<double> w;
    Matrix v;
    out.converged = golub_reinsch(a, w, v);

    const std::size_t n = w.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w[i] > w[j]; });

    out.u = Matrix(a.rows(), n);
    out.v = Matrix(v.rows(), n);
    out.sigma.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        out.sigma[c] = w[src];
        for (std::size_t i = 0; i < a.rows(); ++i) out.u(i, c) = a(i, src);
        for (std::size_t i = 0; i < v.rows(); ++i) out.v(i, c) = v(i, src);
    }
    return out;
}

struct SvdState final : SolverState {
    std::shared_ptr<const Svd> factors;
    double cutoff = 0.0;
};

} // namespace

Svd svd(const Matrix& a)
{
    if (a.rows() >= a.cols()) return tall_svd(a);
    Svd t = tall_svd(a.transposed());
    std::swap(t.u, t.v);
    return t;
}

double default_svd_rtol(std::size_t rows, std::size_t cols)
{
    return static_cast<double>(std::max(rows, cols)) * kEps * 64.0;
}

StatePtr SvdSolver::init(const OperatorPtr& op) const
{
    auto s = std::make_shared<SvdState>();
    s->op = op;
    auto f = std::make_shared<Svd>(svd(op->as_matrix()));
    const double rtol = rtol_.value_or(default_svd_rtol(op->rows(), op->cols()));
    s->cutoff = f->sigma.empty() ? 0.0 : rtol * f->sigma.front();
    s->factors = std::move(f);
    return s;
}

Solution SvdSolver::compute(const StatePtr& state, const TreeVector& b) const
{
    const auto& s = state_cast<SvdState>(state, "svd");
    detail::check_rhs(s, b);
    const Svd& f = *s.factors;
    if (!f.converged) return detail::failed_solution(s, Result::breakdown);

    // Transposed: Aᵀ = V Σ Uᵀ, so the roles of U and V swap.
    const Matrix& left = s.transposed ? f.v : f.u;
    const Matrix& right = s.transposed ? f.u : f.v;
    auto c = left.transpose_times(b.values());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sigma[i] > s.cutoff ? c[i] / f.sigma[i] : 0.0;
    return detail::make_solution(s, b.values(), right * c, Result::success);
}

StatePtr SvdSolver::transpose(const StatePtr& state) const
{
    const auto& s = state_cast<SvdState>(state, "svd");
    auto t = std::make_shared<SvdState>();
    t->op = s.op->transpose();
    t->transposed = !s.transposed;
    t->factors = s.factors;
    t->cutoff = s.cutoff;
    return t;
}

} // namespace linx
