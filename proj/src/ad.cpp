#include "linx/ad.hpp"

#include "linx/error.hpp"

#include <cmath>

namespace linx::ad {

Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.tangent + b.tangent}; }
Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.tangent - b.tangent}; }
Dual operator*(Dual a, Dual b) { return {a.value * b.value, a.tangent * b.value + a.value * b.tangent}; }
Dual operator/(Dual a, Dual b)
{
    const double q = a.value / b.value;
    return {q, (a.tangent - q * b.tangent) / b.value};
}
Dual operator-(Dual a) { return {-a.value, -a.tangent}; }
Dual sin(Dual a) { return {std::sin(a.value), std::cos(a.value) * a.tangent}; }
Dual cos(Dual a) { return {std::cos(a.value), -std::sin(a.value) * a.tangent}; }
Dual exp(Dual a)
{
    const double e = std::exp(a.value);
    return {e, e * a.tangent};
}
Dual log(Dual a) { return {std::log(a.value), a.tangent / a.value}; }
Dual sqrt(Dual a)
{
    const double s = std::sqrt(a.value);
    return {s, a.tangent / (2.0 * s)};
}
Dual tanh(Dual a)
{
    const double t = std::tanh(a.value);
    return {t, (1.0 - t * t) * a.tangent};
}
Dual pow(Dual a, double p) { return {std::pow(a.value, p), p * std::pow(a.value, p - 1.0) * a.tangent}; }

TapeVar Tape::variable(double value) { return record(value, -1, 0.0); }

TapeVar Tape::record(double value, int a, double da, int b, double db)
{
    nodes_.push_back(Node{{a, b}, {da, db}});
    return TapeVar(value, static_cast<int>(nodes_.size()) - 1, this);
}

std::vector<double> Tape::pullback(std::span<const TapeVar> outputs, std::span<const double> seeds,
                                   std::size_t num_inputs) const
{
    if (outputs.size() != seeds.size()) throw StructureError("pullback: one seed per output required");
    std::vector<double> adjoint(nodes_.size(), 0.0);
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (outputs[k].index < 0) continue; // constant output
        if (outputs[k].tape != this) throw Error("pullback: output recorded on a different tape");
        adjoint[static_cast<std::size_t>(outputs[k].index)] += seeds[k];
    }
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const double a = adjoint[i];
        if (a == 0.0) continue;
        for (int p = 0; p < 2; ++p)
            if (nodes_[i].parent[p] >= 0)
                adjoint[static_cast<std::size_t>(nodes_[i].parent[p])] += nodes_[i].partial[p] * a;
    }
    adjoint.resize(num_inputs);
    return adjoint;
}

namespace {

Tape* tape_of(const TapeVar& a, const TapeVar& b)
{
    if (a.tape && b.tape && a.tape != b.tape) throw Error("operands recorded on different tapes");
    return a.tape ? a.tape : b.tape;
}

TapeVar binary(const TapeVar& a, const TapeVar& b, double value, double da, double db)
{
    Tape* t = tape_of(a, b);
    if (!t) return TapeVar(value);
    return t->record(value, a.index, da, b.index, db);
}

TapeVar unary(const TapeVar& a, double value, double da)
{
    if (!a.tape) return TapeVar(value);
    return a.tape->record(value, a.index, da);
}

} // namespace

TapeVar operator+(const TapeVar& a, const TapeVar& b) { return binary(a, b, a.value + b.value, 1.0, 1.0); }
TapeVar operator-(const TapeVar& a, const TapeVar& b) { return binary(a, b, a.value - b.value, 1.0, -1.0); }
TapeVar operator*(const TapeVar& a, const TapeVar& b)
{
    return binary(a, b, a.value * b.value, b.value, a.value);
}
TapeVar operator/(const TapeVar& a, const TapeVar& b)
{
    const double q = a.value / b.value;
    return binary(a, b, q, 1.0 / b.value, -q / b.value);
}
TapeVar operator-(const TapeVar& a) { return unary(a, -a.value, -1.0); }
TapeVar sin(const TapeVar& a) { return unary(a, std::sin(a.value), std::cos(a.value)); }
TapeVar cos(const TapeVar& a) { return unary(a, std::cos(a.value), -std::sin(a.value)); }
TapeVar exp(const TapeVar& a)
{
    const double e = std::exp(a.value);
    return unary(a, e, e);
}
TapeVar log(const TapeVar& a) { return unary(a, std::log(a.value), 1.0 / a.value); }
TapeVar sqrt(const TapeVar& a)
{
    const double s = std::sqrt(a.value);
    return unary(a, s, 0.5 / s);
}
TapeVar tanh(const TapeVar& a)
{
    const double t = std::tanh(a.value);
    return unary(a, t, 1.0 - t * t);
}
TapeVar pow(const TapeVar& a, double p)
{
    return unary(a, std::pow(a.value, p), p * std::pow(a.value, p - 1.0));
}

} // namespace linx::ad
