#pragma once

// Minimal automatic differentiation used by JacobianOperator.
//
// Dual carries a value and one directional derivative (forward mode).
// TapeVar records elementary operations on a Tape; Tape::pullback runs the
// reverse sweep. Both types support +, -, *, / (with each other and with
// double) and the scalar functions declared below, so a generic lambda
// written against `auto` works with either.

#include <cstddef>
#include <span>
#include <vector>

namespace linx::ad {

struct Dual {
    double value = 0.0;
    double tangent = 0.0;

    Dual() = default;
    Dual(double v) : value(v) {} // NOLINT: implicit on purpose so constants mix in
    Dual(double v, double t) : value(v), tangent(t) {}
};

Dual operator+(Dual a, Dual b);
Dual operator-(Dual a, Dual b);
Dual operator*(Dual a, Dual b);
Dual operator/(Dual a, Dual b);
Dual operator-(Dual a);
Dual sin(Dual a);
Dual cos(Dual a);
Dual exp(Dual a);
Dual log(Dual a);
Dual sqrt(Dual a);
Dual tanh(Dual a);
Dual pow(Dual a, double p);

class Tape;

struct TapeVar {
    double value = 0.0;
    int index = -1; // -1: constant, not on any tape
    Tape* tape = nullptr;

    TapeVar() = default;
    TapeVar(double v) : value(v) {} // NOLINT
    TapeVar(double v, int i, Tape* t) : value(v), index(i), tape(t) {}
};

class Tape {
public:
    TapeVar variable(double value);
    /// Records a node with up to two parents; a parent index of -1 is ignored.
    TapeVar record(double value, int a, double da, int b = -1, double db = 0.0);

    std::size_t size() const { return nodes_.size(); }

    /// Reverse sweep: seeds the adjoint of each output with `seeds` and
    /// returns the adjoints of the first `num_inputs` nodes.
    std::vector<double> pullback(std::span<const TapeVar> outputs, std::span<const double> seeds,
                                 std::size_t num_inputs) const;

private:
    struct Node {
        int parent[2];
        double partial[2];
    };
    std::vector<Node> nodes_;
};

TapeVar operator+(const TapeVar& a, const TapeVar& b);
TapeVar operator-(const TapeVar& a, const TapeVar& b);
TapeVar operator*(const TapeVar& a, const TapeVar& b);
TapeVar operator/(const TapeVar& a, const TapeVar& b);
TapeVar operator-(const TapeVar& a);
TapeVar sin(const TapeVar& a);
TapeVar cos(const TapeVar& a);
TapeVar exp(const TapeVar& a);
TapeVar log(const TapeVar& a);
TapeVar sqrt(const TapeVar& a);
TapeVar tanh(const TapeVar& a);
TapeVar pow(const TapeVar& a, double p);

} // namespace linx::ad
