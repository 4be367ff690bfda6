#include "linx/matrix_market.hpp"

#include "linx/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace linx {

namespace {

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-comment, non-blank line. False at end of input.
    bool next(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '%' || blank(line)) continue;
            return true;
        }
        return false;
    }

    std::size_t number() const { return number_; }
    void count() { ++number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

// Parses exactly `n` whitespace separated tokens from line, as the given types.
template <class... T>
bool parse_fields(const std::string& line, T&... out)
{
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    ((ss >> out), ...);
    if (ss.fail()) return false;
    std::string rest;
    return !(ss >> rest);
}

} // namespace

MatrixMarket read_matrix_market(std::istream& in)
{
    LineReader reader(in);
    std::string header;
    if (!std::getline(in, header)) throw ParseError(1, "empty Matrix Market input");
    reader.count();
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry, extra;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") throw ParseError(1, "missing %%MatrixMarket banner");
    if (hs.fail()) throw ParseError(1, "incomplete Matrix Market header");
    if (hs >> extra) throw ParseError(1, "unexpected token '" + extra + "' in header");
    object = lowercase(object);
    format = lowercase(format);
    field = lowercase(field);
    symmetry = lowercase(symmetry);
    if (object != "matrix") throw ParseError(1, "unsupported object '" + object + "'");
    if (format != "coordinate" && format != "array") throw ParseError(1, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer" && field != "double")
        throw ParseError(1, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError(1, "unsupported symmetry '" + symmetry + "'");
    const bool symmetric = symmetry == "symmetric";
    const bool coordinate = format == "coordinate";

    std::string line;
    if (!reader.next(line)) throw ParseError(reader.number() + 1, "missing size line");
    std::size_t rows = 0, cols = 0, nnz = 0;
    const bool sized = coordinate ? parse_fields(line, rows, cols, nnz) : parse_fields(line, rows, cols);
    if (!sized) throw ParseError(reader.number(), "malformed size line '" + line + "'");
    if (symmetric && rows != cols) throw ParseError(reader.number(), "symmetric matrix must be square");

    Matrix m(rows, cols);
    auto value = [&](double v) {
        if (!std::isfinite(v)) throw ParseError(reader.number(), "non-finite entry");
        return v;
    };

    if (coordinate) {
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!reader.next(line))
                throw ParseError(reader.number() + 1, "expected " + std::to_string(nnz) + " entries, found "
                                                          + std::to_string(k));
            long long i = 0, j = 0;
            double v = 0.0;
            if (!parse_fields(line, i, j, v)) throw ParseError(reader.number(), "malformed entry '" + line + "'");
            if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols)
                throw ParseError(reader.number(), "entry index out of range");
            if (symmetric && j > i) throw ParseError(reader.number(), "symmetric entry above the diagonal");
            const auto r = static_cast<std::size_t>(i - 1), c = static_cast<std::size_t>(j - 1);
            m(r, c) += value(v);
            if (symmetric && r != c) m(c, r) = m(r, c);
        }
    } else {
        // Column-major; symmetric arrays store only the lower triangle.
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t r = symmetric ? c : 0; r < rows; ++r) {
                if (!reader.next(line)) throw ParseError(reader.number() + 1, "too few array entries");
                double v = 0.0;
                if (!parse_fields(line, v)) throw ParseError(reader.number(), "malformed entry '" + line + "'");
                m(r, c) = value(v);
                if (symmetric) m(c, r) = m(r, c);
            }
        }
    }
    if (reader.next(line)) throw ParseError(reader.number(), "unexpected trailing data '" + line + "'");
    return {std::move(m), symmetric};
}

MatrixMarket read_matrix_market_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& m)
{
    out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
    char buf[32];
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << '\n';
        }
}

} // namespace linx
