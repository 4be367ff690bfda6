#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace linx {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Throws StructureError when data.size() != rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    /// Nested rows, e.g. {{1, 2}, {3, 4}}. All rows must have equal length.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_diagonal(std::span<const double> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transposed() const;
    std::vector<double> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    std::vector<double> operator*(std::span<const double> x) const;
    /// Aᵀy without forming Aᵀ.
    std::vector<double> transpose_times(std::span<const double> y) const;

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);

/// Frobenius inner product sum_ij a_ij b_ij.
double frobenius_dot(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
/// x yᵀ
Matrix outer(std::span<const double> x, std::span<const double> y);

namespace vec {
double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
double max_abs(std::span<const double> x);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
std::vector<double> sub(std::span<const double> x, std::span<const double> y);
} // namespace vec

} // namespace linx
