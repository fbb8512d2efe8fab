#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "mannctl/errors.hpp"

namespace mannctl {

// Row-major dense real matrix. Every benchmark dimension is tiny (n <= 4,
// N <= 8), so the implementation favors predictable, reproducible arithmetic
// over throughput: products accumulate along the inner index in ascending
// order with a single accumulator.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled

  static Matrix zeros(int rows, int cols);
  static Matrix identity(int n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::initializer_list<double> entries);
  static Matrix column(std::span<const double> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  bool is_vector() const { return cols_ == 1 || rows_ == 1; }

  double& operator()(int i, int j);
  double operator()(int i, int j) const;
  // Linear access for vectors (n x 1 or 1 x n).
  double& operator()(int i);
  double operator()(int i) const;

  std::span<double> data() { return d_; }
  std::span<const double> data() const { return d_; }

  Matrix transpose() const;
  Matrix row(int i) const;
  Matrix col(int j) const;
  void set_col(int j, const Matrix& v);

  double frobenius_norm() const;
  double norm2() const;  // vectors only
  double max_abs() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> d_;
};

using Vector = Matrix;  // n x 1 by convention

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, double s);

double dot(const Matrix& a, const Matrix& b);

// Kronecker product and column-major vectorization, used by the Lyapunov
// solver.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix vec_col(const Matrix& m);
Matrix unvec_col(const Matrix& v, int rows, int cols);

}  // namespace mannctl
