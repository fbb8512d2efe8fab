#include "mannctl/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace mannctl {
namespace {

[[noreturn]] void dim_fail(const char* op, const Matrix& a, const Matrix& b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: dimension mismatch (%dx%d vs %dx%d)", op,
                a.rows(), a.cols(), b.rows(), b.cols());
  throw DimensionError(buf);
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, 0.0) {
  if (rows < 0 || cols < 0) throw DimensionError("Matrix: negative dimension");
}

Matrix Matrix::zeros(int rows, int cols) { return Matrix(rows, cols); }

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) throw DimensionError("from_rows: ragged rows");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::column(std::initializer_list<double> entries) {
  Matrix m(static_cast<int>(entries.size()), 1);
  int i = 0;
  for (double v : entries) m(i++, 0) = v;
  return m;
}

Matrix Matrix::column(std::span<const double> entries) {
  Matrix m(static_cast<int>(entries.size()), 1);
  for (int i = 0; i < m.rows(); ++i) m(i, 0) = entries[i];
  return m;
}

double& Matrix::operator()(int i, int j) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw DimensionError("Matrix index out of range");
  return d_[static_cast<size_t>(i) * cols_ + j];
}

double Matrix::operator()(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw DimensionError("Matrix index out of range");
  return d_[static_cast<size_t>(i) * cols_ + j];
}

double& Matrix::operator()(int i) {
  if (!is_vector()) throw DimensionError("linear index on non-vector");
  if (i < 0 || i >= size()) throw DimensionError("vector index out of range");
  return d_[static_cast<size_t>(i)];
}

double Matrix::operator()(int i) const {
  if (!is_vector()) throw DimensionError("linear index on non-vector");
  if (i < 0 || i >= size()) throw DimensionError("vector index out of range");
  return d_[static_cast<size_t>(i)];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::row(int i) const {
  Matrix r(1, cols_);
  for (int j = 0; j < cols_; ++j) r(0, j) = (*this)(i, j);
  return r;
}

Matrix Matrix::col(int j) const {
  Matrix c(rows_, 1);
  for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
  return c;
}

void Matrix::set_col(int j, const Matrix& v) {
  if (v.rows() != rows_ || v.cols() != 1) dim_fail("set_col", *this, v);
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = v(i, 0);
}

double Matrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : d_) acc += v * v;
  return std::sqrt(acc);
}

double Matrix::norm2() const {
  if (!is_vector()) throw DimensionError("norm2 on non-vector");
  return frobenius_norm();
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : d_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  for (double v : d_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) dim_fail("operator+=", *this, rhs);
  for (size_t i = 0; i < d_.size(); ++i) d_[i] += rhs.d_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) dim_fail("operator-=", *this, rhs);
  for (size_t i = 0; i < d_.size(); ++i) d_[i] -= rhs.d_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : d_) v *= s;
  return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r += b;
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r -= b;
  return r;
}

Matrix operator-(const Matrix& a) {
  Matrix r = a;
  for (double& v : r.data()) v = -v;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) dim_fail("operator*", a, b);
  Matrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  r *= s;
  return r;
}

Matrix operator*(const Matrix& a, double s) { return s * a; }

double dot(const Matrix& a, const Matrix& b) {
  if (!a.is_vector() || !b.is_vector() || a.size() != b.size())
    throw DimensionError("dot: incompatible vectors");
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += a(i) * b(i);
  return acc;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

Matrix vec_col(const Matrix& m) {
  Matrix v(m.rows() * m.cols(), 1);
  int idx = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v(idx++, 0) = m(i, j);
  return v;
}

Matrix unvec_col(const Matrix& v, int rows, int cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec_col: size mismatch");
  Matrix m(rows, cols);
  int idx = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = v(idx++);
  return m;
}

}  // namespace mannctl
