#pragma once

// Dense and structured direct solvers.

#include "linx/matrix.hpp"
#include "linx/solver.hpp"

#include <optional>
#include <vector>

namespace linx {

/// LU with partial (row) pivoting. Square operators only.
class LuSolver final : public Solver {
public:
    std::string name() const override { return "lu"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape&) const override { return false; }
    bool allow_dependent_columns(const OperatorShape&) const override { return false; }
};

/// Householder QR. Tall operators get the least-squares solution, wide ones
/// the minimum-norm solution (through the QR of Aᵀ). Requires full rank along
/// the shorter dimension; otherwise compute reports Result::singular.
class QrSolver final : public Solver {
public:
    std::string name() const override { return "qr"; }
    void check(const OperatorShape&) const override {}
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape& s) const override { return s.rows > s.cols; }
    bool allow_dependent_columns(const OperatorShape& s) const override { return s.cols > s.rows; }
};

/// Thin singular value decomposition A = U diag(sigma) Vᵀ, sigma descending.
struct Svd {
    Matrix u;                   // rows x k
    std::vector<double> sigma;  // k = min(rows, cols)
    Matrix v;                   // cols x k
    bool converged = true;
};

/// Golub-Kahan bidiagonalisation followed by implicit-shift QR sweeps.
Svd svd(const Matrix& a);

/// Default relative rank cutoff: max(m, n) * eps * 2^6.
double default_svd_rtol(std::size_t rows, std::size_t cols);

/// Full pseudoinverse solve x = V Σ⁺ Uᵀ b, any shape and rank. Singular
/// values below rtol * sigma_max are treated as zero.
class SvdSolver final : public Solver {
public:
    explicit SvdSolver(std::optional<double> rtol = {}) : rtol_(rtol) {}

    std::string name() const override { return "svd"; }
    void check(const OperatorShape&) const override {}
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape&) const override { return true; }
    bool allow_dependent_columns(const OperatorShape&) const override { return true; }

private:
    std::optional<double> rtol_;
};

/// LLᵀ factorisation. Needs symmetric and positive_semidefinite tags and a
/// numerically positive definite operator.
class CholeskySolver final : public Solver {
public:
    std::string name() const override { return "cholesky"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override { return state; }
    bool allow_dependent_rows(const OperatorShape&) const override { return false; }
    bool allow_dependent_columns(const OperatorShape&) const override { return false; }
};

/// x_i = b_i / d_i. In pseudoinverse mode zero entries give x_i = 0 instead
/// of Result::singular, and the solver then supports dependent rows/columns.
class DiagonalSolver final : public Solver {
public:
    explicit DiagonalSolver(bool pseudoinverse = false) : pseudoinverse_(pseudoinverse) {}

    bool pseudoinverse() const { return pseudoinverse_; }

    std::string name() const override { return "diagonal"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override { return state; }
    bool allow_dependent_rows(const OperatorShape&) const override { return pseudoinverse_; }
    bool allow_dependent_columns(const OperatorShape&) const override { return pseudoinverse_; }

private:
    bool pseudoinverse_;
};

/// Forward or back substitution, chosen from the triangular tags.
class TriangularSolver final : public Solver {
public:
    std::string name() const override { return "triangular"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape&) const override { return false; }
    bool allow_dependent_columns(const OperatorShape&) const override { return false; }
};

/// Thomas algorithm, O(n), no pivoting.
class TridiagonalSolver final : public Solver {
public:
    std::string name() const override { return "tridiagonal"; }
    void check(const OperatorShape& shape) const override;
    StatePtr init(const OperatorPtr& op) const override;
    Solution compute(const StatePtr& state, const TreeVector& b) const override;
    StatePtr transpose(const StatePtr& state) const override;
    bool allow_dependent_rows(const OperatorShape&) const override { return false; }
    bool allow_dependent_columns(const OperatorShape&) const override { return false; }
};

} // namespace linx
