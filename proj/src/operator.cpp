#include "linx/operator.hpp"

#include "linx/error.hpp"

#include <cmath>
#include <string>

namespace linx {

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(TreeStructure in, TreeStructure out, TagSet tags)
    : in_(std::move(in)), out_(std::move(out)), tags_(tags.normalized())
{
}

void LinearOperator::check_in(std::span<const double> x) const
{
    if (x.size() != cols())
        throw StructureError("operator input of length " + std::to_string(x.size()) + ", expected "
                             + std::to_string(cols()));
}

void LinearOperator::check_out(std::span<const double> y) const
{
    if (y.size() != rows())
        throw StructureError("operator transpose input of length " + std::to_string(y.size()) + ", expected "
                             + std::to_string(rows()));
}

TreeVector LinearOperator::mv(const TreeVector& x) const
{
    require_same_structure(x.structure(), in_, "mv");
    return TreeVector(out_, apply(x.values()));
}

TreeVector LinearOperator::transpose_mv(const TreeVector& y) const
{
    require_same_structure(y.structure(), out_, "transpose_mv");
    return TreeVector(in_, apply_transpose(y.values()));
}

std::vector<double> LinearOperator::apply_transpose(std::span<const double> y) const
{
    check_out(y);
    return as_matrix().transpose_times(y);
}

Matrix LinearOperator::as_matrix() const
{
    Matrix m(rows(), cols());
    std::vector<double> e(cols(), 0.0);
    for (std::size_t j = 0; j < cols(); ++j) {
        e[j] = 1.0;
        m.set_column(j, apply(e));
        e[j] = 0.0;
    }
    return m;
}

OperatorPtr LinearOperator::transpose() const { return std::make_shared<TransposedOperator>(self()); }

// ---------------------------------------------------------------------------
// Stored-data operators

namespace {

TreeStructure square_structure(std::optional<TreeStructure> s, std::size_t n, const char* what)
{
    if (!s) return TreeStructure(n);
    if (s->total_dim() != n)
        throw StructureError(std::string(what) + ": structure " + s->to_string() + " does not have dimension "
                             + std::to_string(n));
    return *s;
}

} // namespace

MatrixOperator::MatrixOperator(Matrix m, TagSet tags, std::optional<TreeStructure> in,
                               std::optional<TreeStructure> out)
    : LinearOperator(square_structure(std::move(in), m.cols(), "MatrixOperator"),
                     square_structure(std::move(out), m.rows(), "MatrixOperator"), tags),
      m_(std::move(m))
{
    const TagSet& t = this->tags();
    if ((t.symmetric || t.triangular() || t.tridiagonal || t.positive_semidefinite || t.negative_semidefinite)
        && !m_.square())
        throw ContractError("MatrixOperator: structural tags require a square matrix");
}

std::vector<double> MatrixOperator::apply(std::span<const double> x) const
{
    check_in(x);
    return m_ * x;
}

std::vector<double> MatrixOperator::apply_transpose(std::span<const double> y) const
{
    check_out(y);
    return m_.transpose_times(y);
}

OperatorPtr MatrixOperator::transpose() const
{
    return std::make_shared<MatrixOperator>(m_.transposed(), tags().transposed(), out_structure(), in_structure());
}

namespace {

TagSet with_diagonal(TagSet t)
{
    t.diagonal = true;
    return t;
}

TagSet with_tridiagonal(TagSet t)
{
    t.tridiagonal = true;
    return t;
}

} // namespace

DiagonalOperator::DiagonalOperator(std::vector<double> diagonal, TagSet tags, std::optional<TreeStructure> structure)
    : LinearOperator(square_structure(structure, diagonal.size(), "DiagonalOperator"),
                     square_structure(structure, diagonal.size(), "DiagonalOperator"), with_diagonal(tags)),
      d_(std::move(diagonal))
{
}

std::vector<double> DiagonalOperator::apply(std::span<const double> x) const
{
    check_in(x);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = d_[i] * x[i];
    return y;
}

TridiagonalOperator::TridiagonalOperator(std::vector<double> lower, std::vector<double> main,
                                         std::vector<double> upper, TagSet tags,
                                         std::optional<TreeStructure> structure)
    : LinearOperator(square_structure(structure, main.size(), "TridiagonalOperator"),
                     square_structure(structure, main.size(), "TridiagonalOperator"), with_tridiagonal(tags)),
      lower_(std::move(lower)), main_(std::move(main)), upper_(std::move(upper))
{
    const std::size_t off = main_.empty() ? 0 : main_.size() - 1;
    if (lower_.size() != off || upper_.size() != off)
        throw StructureError("TridiagonalOperator: off-diagonal bands must have length n - 1");
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> x) const
{
    check_in(x);
    const std::size_t n = main_.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = main_[i] * x[i];
        if (i > 0) s += lower_[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper_[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> TridiagonalOperator::apply_transpose(std::span<const double> y) const
{
    check_out(y);
    const std::size_t n = main_.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = main_[i] * y[i];
        if (i > 0) s += upper_[i - 1] * y[i - 1];
        if (i + 1 < n) s += lower_[i] * y[i + 1];
        x[i] = s;
    }
    return x;
}

Matrix TridiagonalOperator::as_matrix() const
{
    const std::size_t n = main_.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = main_[i];
        if (i + 1 < n) {
            m(i + 1, i) = lower_[i];
            m(i, i + 1) = upper_[i];
        }
    }
    return m;
}

OperatorPtr TridiagonalOperator::transpose() const
{
    return std::make_shared<TridiagonalOperator>(upper_, main_, lower_, tags().transposed(), in_structure());
}

namespace {

TagSet identity_tags()
{
    TagSet t;
    t.diagonal = true;
    t.unit_diagonal = true;
    t.positive_semidefinite = true;
    return t;
}

} // namespace

IdentityOperator::IdentityOperator(TreeStructure structure) : LinearOperator(structure, structure, identity_tags()) {}

std::vector<double> IdentityOperator::apply(std::span<const double> x) const
{
    check_in(x);
    return {x.begin(), x.end()};
}

// ---------------------------------------------------------------------------
// FunctionOperator

FunctionOperator::Probe FunctionOperator::probe(Function f, const TreeStructure& in)
{
    if (!f) throw ContractError("FunctionOperator: empty function");
    const TreeVector y = f(TreeVector::zeros(in));
    for (double v : y.values())
        if (!(std::abs(v) <= 1e-12)) throw ContractError("FunctionOperator: f(0) != 0, function is not linear");
    return {std::move(f), y.structure()};
}

FunctionOperator::FunctionOperator(Function f, TreeStructure in, TagSet tags, Function transpose_fn)
    : FunctionOperator(probe(std::move(f), in), in, tags, std::move(transpose_fn))
{
}

FunctionOperator::FunctionOperator(Probe probe, TreeStructure in, TagSet tags, Function transpose_fn)
    : LinearOperator(std::move(in), std::move(probe.out), tags), f_(std::move(probe.f)), ft_(std::move(transpose_fn))
{
}

std::vector<double> FunctionOperator::apply(std::span<const double> x) const
{
    check_in(x);
    const TreeVector y = f_(TreeVector(in_structure(), {x.begin(), x.end()}));
    require_same_structure(y.structure(), out_structure(), "FunctionOperator output");
    return flatten(y);
}

std::vector<double> FunctionOperator::apply_transpose(std::span<const double> y) const
{
    if (!ft_) return LinearOperator::apply_transpose(y);
    check_out(y);
    const TreeVector x = ft_(TreeVector(out_structure(), {y.begin(), y.end()}));
    require_same_structure(x.structure(), in_structure(), "FunctionOperator transpose output");
    return flatten(x);
}

OperatorPtr FunctionOperator::transpose() const
{
    if (ft_) return std::make_shared<FunctionOperator>(ft_, out_structure(), tags().transposed(), f_);
    return std::make_shared<MatrixOperator>(as_matrix().transposed(), tags().transposed(), out_structure(),
                                            in_structure());
}

// ---------------------------------------------------------------------------
// JacobianOperator

TreeStructure JacobianOperator::discover_out(const ForwardFn& fwd, const TreeVector& x0,
                                             const std::optional<TreeStructure>& out)
{
    if (!fwd) throw ContractError("JacobianOperator: empty function");
    std::vector<ad::Dual> x(x0.values().begin(), x0.values().end());
    const std::size_t m = fwd(x).size();
    if (!out) return TreeStructure(m);
    if (out->total_dim() != m)
        throw StructureError("JacobianOperator: output structure " + out->to_string() + " does not have dimension "
                             + std::to_string(m));
    return *out;
}

JacobianOperator::JacobianOperator(ForwardFn fwd, ReverseFn rev, TreeVector x0, TagSet tags,
                                   std::optional<TreeStructure> out)
    : LinearOperator(x0.structure(), discover_out(fwd, x0, out), tags), fwd_(std::move(fwd)), rev_(std::move(rev)),
      x0_(std::move(x0))
{
}

std::vector<double> JacobianOperator::apply(std::span<const double> v) const
{
    check_in(v);
    std::vector<ad::Dual> x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = ad::Dual(x0_[i], v[i]);
    const auto y = fwd_(x);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i].tangent;
    return out;
}

std::vector<double> JacobianOperator::apply_transpose(std::span<const double> w) const
{
    check_out(w);
    if (!rev_) return LinearOperator::apply_transpose(w);
    ad::Tape tape;
    std::vector<ad::TapeVar> x;
    x.reserve(cols());
    for (double v : x0_.values()) x.push_back(tape.variable(v));
    const auto y = rev_(x);
    if (y.size() != rows()) throw StructureError("JacobianOperator: reverse function changed output size");
    return tape.pullback(y, w, cols());
}

// ---------------------------------------------------------------------------
// Algebra

TagSet add_tags(const TagSet& a, const TagSet& b)
{
    const TagSet x = a.normalized();
    const TagSet y = b.normalized();
    TagSet t;
    t.symmetric = x.symmetric && y.symmetric;
    t.diagonal = x.diagonal && y.diagonal;
    t.tridiagonal = x.tridiagonal && y.tridiagonal;
    t.lower_triangular = x.lower_triangular && y.lower_triangular;
    t.upper_triangular = x.upper_triangular && y.upper_triangular;
    t.positive_semidefinite = x.positive_semidefinite && y.positive_semidefinite;
    t.negative_semidefinite = x.negative_semidefinite && y.negative_semidefinite;
    return t.normalized();
}

TagSet scale_tags(double c, const TagSet& a)
{
    TagSet t = a.normalized();
    t.unit_diagonal = t.unit_diagonal && c == 1.0;
    if (c < 0.0) std::swap(t.positive_semidefinite, t.negative_semidefinite);
    return t;
}

TagSet compose_tags(const TagSet& outer, const TagSet& inner)
{
    TagSet t;
    t.diagonal = outer.normalized().diagonal && inner.normalized().diagonal;
    return t.normalized();
}

ComposedOperator::ComposedOperator(OperatorPtr outer, OperatorPtr inner)
    : LinearOperator(inner->in_structure(), outer->out_structure(), compose_tags(outer->tags(), inner->tags())),
      outer_(std::move(outer)), inner_(std::move(inner))
{
    require_same_structure(inner_->out_structure(), outer_->in_structure(), "compose");
}

std::vector<double> ComposedOperator::apply(std::span<const double> x) const
{
    return outer_->apply(inner_->apply(x));
}

std::vector<double> ComposedOperator::apply_transpose(std::span<const double> y) const
{
    return inner_->apply_transpose(outer_->apply_transpose(y));
}

OperatorPtr ComposedOperator::transpose() const
{
    return std::make_shared<ComposedOperator>(inner_->transpose(), outer_->transpose());
}

namespace {

const OperatorPtr& require_same_spaces(const OperatorPtr& a, const OperatorPtr& b)
{
    require_same_structure(a->in_structure(), b->in_structure(), "add (input)");
    require_same_structure(a->out_structure(), b->out_structure(), "add (output)");
    return a;
}

} // namespace

AddedOperator::AddedOperator(OperatorPtr a, OperatorPtr b)
    : LinearOperator(require_same_spaces(a, b)->in_structure(), a->out_structure(), add_tags(a->tags(), b->tags())),
      a_(std::move(a)), b_(std::move(b))
{
}

std::vector<double> AddedOperator::apply(std::span<const double> x) const
{
    auto y = a_->apply(x);
    vec::axpy(1.0, b_->apply(x), y);
    return y;
}

std::vector<double> AddedOperator::apply_transpose(std::span<const double> y) const
{
    auto x = a_->apply_transpose(y);
    vec::axpy(1.0, b_->apply_transpose(y), x);
    return x;
}

Matrix AddedOperator::as_matrix() const { return a_->as_matrix() + b_->as_matrix(); }

OperatorPtr AddedOperator::transpose() const { return std::make_shared<AddedOperator>(a_->transpose(), b_->transpose()); }

ScaledOperator::ScaledOperator(double c, OperatorPtr a)
    : LinearOperator(a->in_structure(), a->out_structure(), scale_tags(c, a->tags())), c_(c), a_(std::move(a))
{
}

std::vector<double> ScaledOperator::apply(std::span<const double> x) const
{
    auto y = a_->apply(x);
    for (double& v : y) v *= c_;
    return y;
}

std::vector<double> ScaledOperator::apply_transpose(std::span<const double> y) const
{
    auto x = a_->apply_transpose(y);
    for (double& v : x) v *= c_;
    return x;
}

Matrix ScaledOperator::as_matrix() const { return c_ * a_->as_matrix(); }

OperatorPtr ScaledOperator::transpose() const { return std::make_shared<ScaledOperator>(c_, a_->transpose()); }

TransposedOperator::TransposedOperator(OperatorPtr inner)
    : LinearOperator(inner->out_structure(), inner->in_structure(), inner->tags().transposed()),
      inner_(std::move(inner))
{
}

OperatorPtr matrix_operator(Matrix m, TagSet tags) { return std::make_shared<MatrixOperator>(std::move(m), tags); }

OperatorPtr diagonal_operator(std::vector<double> d, TagSet tags)
{
    return std::make_shared<DiagonalOperator>(std::move(d), tags);
}

OperatorPtr tridiagonal_operator(std::vector<double> lower, std::vector<double> main, std::vector<double> upper,
                                 TagSet tags)
{
    return std::make_shared<TridiagonalOperator>(std::move(lower), std::move(main), std::move(upper), tags);
}

OperatorPtr identity_operator(TreeStructure structure)
{
    return std::make_shared<IdentityOperator>(std::move(structure));
}

OperatorPtr function_operator(FunctionOperator::Function f, TreeStructure in, TagSet tags,
                              FunctionOperator::Function transpose_fn)
{
    return std::make_shared<FunctionOperator>(std::move(f), std::move(in), tags, std::move(transpose_fn));
}

OperatorPtr compose(OperatorPtr a, OperatorPtr b) { return std::make_shared<ComposedOperator>(std::move(a), std::move(b)); }

OperatorPtr add(OperatorPtr a, OperatorPtr b) { return std::make_shared<AddedOperator>(std::move(a), std::move(b)); }

OperatorPtr scale(double c, OperatorPtr a) { return std::make_shared<ScaledOperator>(c, std::move(a)); }

OperatorPtr transpose(const OperatorPtr& a) { return a->transpose(); }

// ---------------------------------------------------------------------------
// Band extraction

std::vector<double> diagonal_of(const LinearOperator& a)
{
    if (!a.shape().square()) throw ContractError("diagonal_of: operator is not square");
    if (const auto* d = dynamic_cast<const DiagonalOperator*>(&a)) return {d->diagonal().begin(), d->diagonal().end()};
    if (const auto* t = dynamic_cast<const TridiagonalOperator*>(&a)) return {t->main().begin(), t->main().end()};
    if (dynamic_cast<const IdentityOperator*>(&a)) return std::vector<double>(a.rows(), 1.0);
    const Matrix m = a.as_matrix();
    std::vector<double> d(a.rows());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = m(i, i);
    return d;
}

Bands tridiagonal_of(const LinearOperator& a)
{
    if (!a.shape().square()) throw ContractError("tridiagonal_of: operator is not square");
    const std::size_t n = a.rows();
    const std::size_t off = n ? n - 1 : 0;
    if (const auto* t = dynamic_cast<const TridiagonalOperator*>(&a))
        return {{t->lower().begin(), t->lower().end()},
                {t->main().begin(), t->main().end()},
                {t->upper().begin(), t->upper().end()}};
    if (dynamic_cast<const DiagonalOperator*>(&a) || dynamic_cast<const IdentityOperator*>(&a))
        return {std::vector<double>(off, 0.0), diagonal_of(a), std::vector<double>(off, 0.0)};
    const Matrix m = a.as_matrix();
    Bands b{std::vector<double>(off), std::vector<double>(n), std::vector<double>(off)};
    for (std::size_t i = 0; i < n; ++i) {
        b.main[i] = m(i, i);
        if (i + 1 < n) {
            b.lower[i] = m(i + 1, i);
            b.upper[i] = m(i, i + 1);
        }
    }
    return b;
}

} // namespace linx
