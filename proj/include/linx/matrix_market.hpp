#pragma once

// Matrix Market reader and writer. Coordinate and array layouts with real or
// integer fields and general or symmetric symmetry are supported; the matrix
// is always densified.

#include "linx/matrix.hpp"

#include <iosfwd>
#include <string>

namespace linx {

struct MatrixMarket {
    Matrix matrix;
    bool symmetric = false;
};

/// Throws ParseError carrying the 1-based line number of the offending line.
MatrixMarket read_matrix_market(std::istream& in);
MatrixMarket read_matrix_market_file(const std::string& path);

/// Writes `array real general` with round-trip precision.
void write_matrix_market(std::ostream& out, const Matrix& m);

} // namespace linx
