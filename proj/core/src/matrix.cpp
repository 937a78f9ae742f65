#include "disco/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError(fmt::format("matrix {}x{} needs {} entries, got {}", rows_, cols_,
                                     rows_ * cols_, data_.size()));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    requireSameShape(*this, other, "matrix addition");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    requireSameShape(*this, other, "matrix subtraction");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

bool Matrix::allFinite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::maxAbs() const noexcept {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix m, double s) { return m *= s; }
Matrix operator*(double s, Matrix m) { return m *= s; }

void requireSameShape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(fmt::format("{}: shape {}x{} vs {}x{}", what, a.rows(), a.cols(),
                                     b.rows(), b.cols()));
    }
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw ShapeError(fmt::format("matmul: {}x{} times {}x{}", lhs.rows(), lhs.cols(),
                                     rhs.rows(), rhs.cols()));
    }
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t p = 0; p < lhs.cols(); ++p) {
            const double a = lhs(i, p);
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(p, j);
        }
    }
    return out;
}

Matrix matmulTransposedRhs(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.cols()) {
        throw ShapeError(fmt::format("matmul with transposed rhs: {}x{} times ({}x{})^T",
                                     lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()));
    }
    Matrix out(lhs.rows(), rhs.rows());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < rhs.rows(); ++j) out(i, j) = dot(lhs.row(i), rhs.row(j));
    return out;
}

Matrix matmulTransposedLhs(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.rows() != rhs.rows()) {
        throw ShapeError(fmt::format("matmul with transposed lhs: ({}x{})^T times {}x{}",
                                     lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()));
    }
    Matrix out(lhs.cols(), rhs.cols());
    for (std::size_t p = 0; p < lhs.rows(); ++p) {
        for (std::size_t i = 0; i < lhs.cols(); ++i) {
            const double a = lhs(p, i);
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(p, j);
        }
    }
    return out;
}

Vector matvec(const Matrix& m, std::span<const double> x) {
    if (m.cols() != x.size()) {
        throw ShapeError(fmt::format("matvec: {}x{} times vector of {}", m.rows(), m.cols(),
                                     x.size()));
    }
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), x);
    return out;
}

double maxAbsDiff(const Matrix& a, const Matrix& b) {
    requireSameShape(a, b, "maxAbsDiff");
    double best = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) best = std::max(best, std::abs(da[i] - db[i]));
    return best;
}

double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ShapeError(fmt::format("dot: lengths {} and {}", u.size(), v.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace disco
