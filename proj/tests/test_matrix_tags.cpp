#include "linx/error.hpp"
#include "linx/matrix.hpp"
#include "linx/matrix_market.hpp"
#include "linx/tags.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace linx;

TEST(Matrix, Products)
{
    const Matrix a{{1, 2}, {3, 4}, {5, 6}};
    const std::vector<double> x{1, -1};
    EXPECT_EQ(a * std::span<const double>(x), (std::vector<double>{-1, -1, -1}));
    const std::vector<double> y{1, 0, 1};
    EXPECT_EQ(a.transpose_times(y), (std::vector<double>{6, 8}));
    EXPECT_EQ(a.transposed() * a, (Matrix{{35, 44}, {44, 56}}));
    EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), StructureError);
}

TEST(Tags, Normalization)
{
    TagSet t;
    t.lower_triangular = t.upper_triangular = true;
    const TagSet n = t.normalized();
    EXPECT_TRUE(n.diagonal);
    EXPECT_TRUE(n.tridiagonal);
    EXPECT_TRUE(n.symmetric);

    TagSet lower;
    lower.lower_triangular = true;
    EXPECT_TRUE(lower.transposed().upper_triangular);
    EXPECT_FALSE(lower.transposed().lower_triangular);
}

TEST(Tags, Parsing)
{
    const TagSet t = parse_tags("symmetric,positive_semidefinite");
    EXPECT_TRUE(t.symmetric);
    EXPECT_TRUE(t.positive_semidefinite);
    EXPECT_EQ(t.names(), (std::vector<std::string>{"symmetric", "positive_semidefinite"}));
    EXPECT_TRUE(parse_tags("").empty());
    EXPECT_THROW(parse_tags("symmetric,hermitian"), ContractError);
    EXPECT_EQ(tag_vocabulary().size(), 8u);
}

TEST(MatrixMarket, CoordinateGeneral)
{
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n% note\n2 3 2\n1 1 1.5\n2 3 -2\n");
    const MatrixMarket mm = read_matrix_market(in);
    EXPECT_FALSE(mm.symmetric);
    EXPECT_EQ(mm.matrix, (Matrix{{1.5, 0, 0}, {0, 0, -2}}));
}

TEST(MatrixMarket, CoordinateSymmetric)
{
    std::istringstream in("%%MatrixMarket matrix coordinate integer symmetric\n2 2 2\n1 1 4\n2 1 1\n");
    const MatrixMarket mm = read_matrix_market(in);
    EXPECT_TRUE(mm.symmetric);
    EXPECT_EQ(mm.matrix, (Matrix{{4, 1}, {1, 0}}));
}

TEST(MatrixMarket, ArrayIsColumnMajor)
{
    std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    EXPECT_EQ(read_matrix_market(in).matrix, (Matrix{{1, 3}, {2, 4}}));
}

TEST(MatrixMarket, ErrorsCarryLineNumbers)
{
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_matrix_market(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n"), 1u);
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1\n1 x 1\n"), 5u);
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), 3u);
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n2 2\n"), 2u);
    EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), 4u);
    EXPECT_EQ(line_of("not a banner\n"), 1u);
}

TEST(MatrixMarket, WriterRoundTrips)
{
    const Matrix a{{0.1, -2.5e-300}, {1.0 / 3.0, 7}};
    std::stringstream s;
    write_matrix_market(s, a);
    EXPECT_EQ(read_matrix_market(s).matrix, a);
}
