#pragma once

// Linear operators A: X -> Y between tree-structured vector spaces.
//
// Operators are immutable and shared through OperatorPtr. Every operator can
// apply itself to a flat vector (`apply`), apply its transpose
// (`apply_transpose`), produce a transposed operator and materialise itself
// as a dense matrix of shape (out.total_dim, in.total_dim).

#include "linx/ad.hpp"
#include "linx/matrix.hpp"
#include "linx/tags.hpp"
#include "linx/tree.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace linx {

class LinearOperator;
using OperatorPtr = std::shared_ptr<const LinearOperator>;

/// What solver selection may look at: dimensions and tags, never entries.
struct OperatorShape {
    std::size_t rows = 0;
    std::size_t cols = 0;
    TagSet tags;

    bool square() const { return rows == cols; }
};

class LinearOperator : public std::enable_shared_from_this<LinearOperator> {
public:
    virtual ~LinearOperator() = default;
    LinearOperator(const LinearOperator&) = delete;
    LinearOperator& operator=(const LinearOperator&) = delete;

    const TreeStructure& in_structure() const { return in_; }
    const TreeStructure& out_structure() const { return out_; }
    const TagSet& tags() const { return tags_; }
    std::size_t rows() const { return out_.total_dim(); }
    std::size_t cols() const { return in_.total_dim(); }
    OperatorShape shape() const { return {rows(), cols(), tags_}; }

    /// Tree matvec; throws StructureError if x does not match in_structure().
    TreeVector mv(const TreeVector& x) const;
    /// Tree transpose matvec; y must match out_structure().
    TreeVector transpose_mv(const TreeVector& y) const;

    /// Flat matvec, length cols() -> rows().
    virtual std::vector<double> apply(std::span<const double> x) const = 0;
    /// Flat transpose matvec, length rows() -> cols(). The default
    /// materialises the operator.
    virtual std::vector<double> apply_transpose(std::span<const double> y) const;
    /// Default: probe with each basis vector, column by column.
    virtual Matrix as_matrix() const;
    /// Default: a TransposedOperator wrapping this operator.
    virtual OperatorPtr transpose() const;

    OperatorPtr self() const { return shared_from_this(); }

protected:
    LinearOperator(TreeStructure in, TreeStructure out, TagSet tags);

    void check_in(std::span<const double> x) const;
    void check_out(std::span<const double> y) const;

private:
    TreeStructure in_;
    TreeStructure out_;
    TagSet tags_;
};

class MatrixOperator final : public LinearOperator {
public:
    /// Structures default to plain vectors of length cols / rows.
    MatrixOperator(Matrix m, TagSet tags = {}, std::optional<TreeStructure> in = {},
                   std::optional<TreeStructure> out = {});

    const Matrix& matrix() const { return m_; }

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    Matrix as_matrix() const override { return m_; }
    OperatorPtr transpose() const override;

private:
    Matrix m_;
};

class DiagonalOperator final : public LinearOperator {
public:
    DiagonalOperator(std::vector<double> diagonal, TagSet tags = {}, std::optional<TreeStructure> structure = {});

    std::span<const double> diagonal() const { return d_; }

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override { return apply(y); }
    Matrix as_matrix() const override { return Matrix::from_diagonal(d_); }
    OperatorPtr transpose() const override { return self(); }

private:
    std::vector<double> d_;
};

class TridiagonalOperator final : public LinearOperator {
public:
    /// lower and upper have length n - 1, main has length n.
    TridiagonalOperator(std::vector<double> lower, std::vector<double> main, std::vector<double> upper,
                        TagSet tags = {}, std::optional<TreeStructure> structure = {});

    std::span<const double> lower() const { return lower_; }
    std::span<const double> main() const { return main_; }
    std::span<const double> upper() const { return upper_; }

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    Matrix as_matrix() const override;
    OperatorPtr transpose() const override;

private:
    std::vector<double> lower_, main_, upper_;
};

class IdentityOperator final : public LinearOperator {
public:
    explicit IdentityOperator(TreeStructure structure);

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override { return apply(y); }
    Matrix as_matrix() const override { return Matrix::identity(rows()); }
    OperatorPtr transpose() const override { return self(); }
};

/// Wraps a user function asserted to be linear. The output structure is
/// discovered by evaluating f at zero, which must return zero to 1e-12.
class FunctionOperator final : public LinearOperator {
public:
    using Function = std::function<TreeVector(const TreeVector&)>;

    FunctionOperator(Function f, TreeStructure in, TagSet tags = {}, Function transpose_fn = {});

    bool has_transpose_fn() const { return static_cast<bool>(ft_); }

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    /// With a transpose function: a FunctionOperator with the roles swapped.
    /// Without one: the materialised transpose as a MatrixOperator.
    OperatorPtr transpose() const override;

private:
    struct Probe {
        Function f;
        TreeStructure out;
    };
    FunctionOperator(Probe probe, TreeStructure in, TagSet tags, Function transpose_fn);
    static Probe probe(Function f, const TreeStructure& in);

    Function f_;
    Function ft_;
};

/// Jacobian of a nonlinear map g at a point x0. The map is supplied twice,
/// once for dual numbers (forward sweep, used by apply) and once for tape
/// variables (reverse sweep, used by apply_transpose); see jacobian_operator().
class JacobianOperator final : public LinearOperator {
public:
    using ForwardFn = std::function<std::vector<ad::Dual>(const std::vector<ad::Dual>&)>;
    using ReverseFn = std::function<std::vector<ad::TapeVar>(const std::vector<ad::TapeVar>&)>;

    JacobianOperator(ForwardFn fwd, ReverseFn rev, TreeVector x0, TagSet tags = {},
                     std::optional<TreeStructure> out = {});

    const TreeVector& point() const { return x0_; }

    std::vector<double> apply(std::span<const double> v) const override;
    std::vector<double> apply_transpose(std::span<const double> w) const override;

private:
    static TreeStructure discover_out(const ForwardFn& fwd, const TreeVector& x0,
                                      const std::optional<TreeStructure>& out);

    ForwardFn fwd_;
    ReverseFn rev_;
    TreeVector x0_;
};

/// outer ∘ inner.
class ComposedOperator final : public LinearOperator {
public:
    ComposedOperator(OperatorPtr outer, OperatorPtr inner);

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    OperatorPtr transpose() const override;

private:
    OperatorPtr outer_, inner_;
};

class AddedOperator final : public LinearOperator {
public:
    AddedOperator(OperatorPtr a, OperatorPtr b);

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    Matrix as_matrix() const override;
    OperatorPtr transpose() const override;

private:
    OperatorPtr a_, b_;
};

class ScaledOperator final : public LinearOperator {
public:
    ScaledOperator(double c, OperatorPtr a);

    double scalar() const { return c_; }
    const OperatorPtr& inner() const { return a_; }

    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> apply_transpose(std::span<const double> y) const override;
    Matrix as_matrix() const override;
    OperatorPtr transpose() const override;

private:
    double c_;
    OperatorPtr a_;
};

class TransposedOperator final : public LinearOperator {
public:
    explicit TransposedOperator(OperatorPtr inner);

    const OperatorPtr& inner() const { return inner_; }

    std::vector<double> apply(std::span<const double> y) const override { return inner_->apply_transpose(y); }
    std::vector<double> apply_transpose(std::span<const double> x) const override { return inner_->apply(x); }
    Matrix as_matrix() const override { return inner_->as_matrix().transposed(); }
    OperatorPtr transpose() const override { return inner_; }

private:
    OperatorPtr inner_;
};

// Construction helpers.

OperatorPtr matrix_operator(Matrix m, TagSet tags = {});
OperatorPtr diagonal_operator(std::vector<double> d, TagSet tags = {});
OperatorPtr tridiagonal_operator(std::vector<double> lower, std::vector<double> main, std::vector<double> upper,
                                 TagSet tags = {});
OperatorPtr identity_operator(TreeStructure structure);
OperatorPtr function_operator(FunctionOperator::Function f, TreeStructure in, TagSet tags = {},
                              FunctionOperator::Function transpose_fn = {});

/// g must be callable as `std::vector<T> g(const std::vector<T>&)` for
/// T = ad::Dual and T = ad::TapeVar, e.g. a generic lambda.
template <class G>
OperatorPtr jacobian_operator(G g, TreeVector x0, TagSet tags = {}, std::optional<TreeStructure> out = {})
{
    JacobianOperator::ForwardFn fwd = [g](const std::vector<ad::Dual>& x) { return g(x); };
    JacobianOperator::ReverseFn rev = [g](const std::vector<ad::TapeVar>& x) { return g(x); };
    return std::make_shared<JacobianOperator>(std::move(fwd), std::move(rev), std::move(x0), tags, std::move(out));
}

/// Directional derivative of g at x0 along v by forward-mode propagation.
template <class G>
TreeVector jacobian_mv(G g, const TreeVector& x0, const TreeVector& v)
{
    return jacobian_operator(std::move(g), x0)->mv(v);
}

// Algebra. compose(a, b) is a ∘ b and requires b.out == a.in.

OperatorPtr compose(OperatorPtr a, OperatorPtr b);
OperatorPtr add(OperatorPtr a, OperatorPtr b);
OperatorPtr scale(double c, OperatorPtr a);
OperatorPtr transpose(const OperatorPtr& a);

/// Tag rules for the algebra: only properties that provably carry over.
TagSet add_tags(const TagSet& a, const TagSet& b);
TagSet scale_tags(double c, const TagSet& a);
TagSet compose_tags(const TagSet& outer, const TagSet& inner);

/// Main diagonal of a square operator; reads stored bands when available,
/// otherwise materialises.
std::vector<double> diagonal_of(const LinearOperator& a);

struct Bands {
    std::vector<double> lower, main, upper;
};
/// The three central bands of a square operator; reads stored bands when
/// available, otherwise materialises.
Bands tridiagonal_of(const LinearOperator& a);

} // namespace linx
