#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace disco {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// Dimensions in this project stay small (d, k <= 64), so every operation is a
/// plain triple loop with a fixed summation order. That keeps results
/// bitwise reproducible across runs.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t r) const noexcept {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }

    Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    bool allFinite() const noexcept;
    double maxAbs() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix m, double s);
Matrix operator*(double s, Matrix m);

/// Matrix product; throws ShapeError when inner dimensions differ.
Matrix matmul(const Matrix& lhs, const Matrix& rhs);

/// lhs * rhs^T without materializing the transpose.
Matrix matmulTransposedRhs(const Matrix& lhs, const Matrix& rhs);

/// lhs^T * rhs without materializing the transpose.
Matrix matmulTransposedLhs(const Matrix& lhs, const Matrix& rhs);

/// m * x.
Vector matvec(const Matrix& m, std::span<const double> x);

/// Largest absolute elementwise difference; throws ShapeError on mismatch.
double maxAbsDiff(const Matrix& a, const Matrix& b);

void requireSameShape(const Matrix& a, const Matrix& b, const char* what);

double dot(std::span<const double> u, std::span<const double> v);
double norm2(std::span<const double> v);

}  // namespace disco
