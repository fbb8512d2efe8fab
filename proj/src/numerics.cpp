#include "mannctl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mannctl {
namespace {

constexpr double kHurwitzMargin = 1e-9;

double require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": matrix not square");
  return a.frobenius_norm();
}

void require_symmetric(const Matrix& m, const char* who) {
  const double denom = std::max(m.frobenius_norm(), 1e-300);
  if ((m - m.transpose()).frobenius_norm() > 1e-9 * denom)
    throw NotSymmetric(std::string(who) + ": matrix not symmetric");
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Characteristic polynomial of A: lambda^n + c[0] lambda^{n-1} + ... + c[n-1].
std::vector<double> char_poly(const Matrix& a) {
  const int n = a.rows();
  std::vector<double> c(n);
  Matrix m = a;
  for (int k = 1; k <= n; ++k) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += m(i, i);
    c[k - 1] = -tr / k;
    if (k < n) {
      Matrix shifted = m;
      for (int i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
      m = a * shifted;
    }
  }
  return c;
}

std::vector<std::complex<double>> durand_kerner(const std::vector<double>& c) {
  using cplx = std::complex<double>;
  const int n = static_cast<int>(c.size());
  auto eval = [&](cplx x) {
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) p = p * x + c[k];
    return p;
  };
  double radius = 1.0;
  for (double ck : c) radius = std::max(radius, 1.0 + std::abs(ck));
  std::vector<cplx> r(n);
  const cplx seed(0.4, 0.9);
  cplx cur = 1.0;
  for (int i = 0; i < n; ++i) {
    cur *= seed;
    r[i] = radius * cur;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double step = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (r[i] - r[j]);
      if (std::abs(denom) < 1e-300) denom = 1e-300;
      const cplx d = eval(r[i]) / denom;
      r[i] -= d;
      step = std::max(step, std::abs(d));
    }
    if (step < 1e-13 * radius) break;
  }
  return r;
}

int rank_complex(std::vector<std::vector<std::complex<double>>> m, double tol) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  int rank = 0;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = row;
    for (int i = row + 1; i < rows; ++i)
      if (std::abs(m[i][col]) > std::abs(m[pivot][col])) pivot = i;
    if (std::abs(m[pivot][col]) <= tol) continue;
    std::swap(m[pivot], m[row]);
    for (int i = row + 1; i < rows; ++i) {
      const std::complex<double> f = m[i][col] / m[row][col];
      for (int j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    ++rank;
    ++row;
  }
  return rank;
}

// A_ref^T X + X A_ref = -Q via Kronecker vectorization, no PD checks.
Matrix lyapunov_raw(const Matrix& a_ref, const Matrix& q) {
  const int n = a_ref.rows();
  const Matrix eye = Matrix::identity(n);
  const Matrix at = a_ref.transpose();
  // vec(A^T X) = (I (x) A^T) vec(X); vec(X A) = (A^T (x) I) vec(X).
  const Matrix system = kron(eye, at) + kron(at, eye);
  Matrix x_vec = solve_linear(system, -vec_col(q));
  Matrix x = unvec_col(x_vec, n, n);
  // One round of iterative refinement keeps the residual near round-off.
  for (int pass = 0; pass < 2; ++pass) {
    const Matrix resid = -(q + at * x + x * a_ref);
    if (resid.frobenius_norm() <= 1e-15 * std::max(1.0, q.frobenius_norm())) break;
    x += unvec_col(solve_linear(system, vec_col(resid)), n, n);
  }
  return x;
}

}  // namespace

Matrix solve_linear(Matrix a, Matrix rhs) {
  const int n = a.rows();
  if (a.cols() != n) throw DimensionError("solve_linear: matrix not square");
  if (rhs.rows() != n) throw DimensionError("solve_linear: rhs rows mismatch");
  const double tol = 1e-13 * std::max(1.0, a.max_abs());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    if (std::abs(a(pivot, col)) <= tol)
      throw SingularSystem("solve_linear: singular pivot");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (int j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(pivot, j));
    }
    for (int i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      for (int j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(col, j);
    }
  }
  Matrix x(n, rhs.cols());
  for (int j = 0; j < rhs.cols(); ++j) {
    for (int i = n - 1; i >= 0; --i) {
      double acc = rhs(i, j);
      for (int k = i + 1; k < n; ++k) acc -= a(i, k) * x(k, j);
      x(i, j) = acc / a(i, i);
    }
  }
  return x;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  const int n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(a(0, 0), 0.0)};
  if (n == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      return {std::complex<double>(tr / 2.0 - s, 0.0), std::complex<double>(tr / 2.0 + s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(tr / 2.0, -s), std::complex<double>(tr / 2.0, s)};
  }
  return durand_kerner(char_poly(a));
}

double max_real_eigenvalue(const Matrix& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& lam : eigenvalues(a)) m = std::max(m, lam.real());
  return m;
}

bool is_hurwitz(const Matrix& a, double margin) {
  return max_real_eigenvalue(a) < -margin;
}

SymEig sym_eig(const Matrix& m) {
  require_square(m, "sym_eig");
  require_symmetric(m, "sym_eig");
  Matrix a = symmetrized(m);
  const int n = a.rows();
  Matrix v = Matrix::identity(n);
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<double> sym_eigvals(const Matrix& m) { return sym_eig(m).values; }

bool is_stabilizable(const Matrix& a, const Matrix& b) {
  require_square(a, "is_stabilizable");
  if (b.rows() != a.rows()) throw DimensionError("is_stabilizable: B rows mismatch");
  const int n = a.rows();
  const int m = b.cols();
  const double tol = 1e-9 * std::max({1.0, a.max_abs(), b.max_abs()});
  for (const auto& lam : eigenvalues(a)) {
    if (lam.real() < -kHurwitzMargin) continue;  // PBH only binds on unstable modes
    std::vector<std::vector<std::complex<double>>> pbh(
        n, std::vector<std::complex<double>>(n + m));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) pbh[i][j] = std::complex<double>(a(i, j), 0.0) - (i == j ? lam : 0.0);
      for (int j = 0; j < m; ++j) pbh[i][n + j] = b(i, j);
    }
    if (rank_complex(std::move(pbh), tol) < n) return false;
  }
  return true;
}

Matrix solve_lyapunov(const Matrix& a_ref, const Matrix& q) {
  require_square(a_ref, "solve_lyapunov");
  require_symmetric(q, "solve_lyapunov");
  if (q.rows() != a_ref.rows()) throw DimensionError("solve_lyapunov: Q size mismatch");
  if (!is_hurwitz(a_ref, kHurwitzMargin))
    throw NotHurwitz("solve_lyapunov: A_ref is not Hurwitz");
  if (sym_eigvals(q).front() <= 0.0)
    throw NotSymmetric("solve_lyapunov: Q is not positive definite");
  Matrix p = symmetrized(lyapunov_raw(a_ref, q));
  const Matrix resid = a_ref.transpose() * p + p * a_ref + q;
  if (resid.frobenius_norm() > 1e-10 * q.frobenius_norm())
    throw SingularSystem("solve_lyapunov: residual above tolerance");
  return p;
}

Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                  const std::optional<Matrix>& k0) {
  require_square(a, "solve_care");
  require_symmetric(q, "solve_care");
  require_symmetric(r, "solve_care");
  const int n = a.rows();
  const int m = b.cols();
  if (b.rows() != n || q.rows() != n || r.rows() != m)
    throw DimensionError("solve_care: shape mismatch");
  if (!is_stabilizable(a, b)) throw NotStabilizable("solve_care: (A, B) not stabilizable");
  if (sym_eigvals(r).front() <= 0.0) throw NotSymmetric("solve_care: R not positive definite");

  Matrix k(m, n);
  if (k0.has_value()) {
    k = *k0;
    if (k.rows() != m || k.cols() != n) throw DimensionError("solve_care: k0 shape mismatch");
  } else if (is_hurwitz(a, kHurwitzMargin)) {
    // already stable, zero initial gain works
  } else {
    // Bass shift: Z solves (A + beta I) Z + Z (A + beta I)^T = 2 B B^T,
    // then K0 = B^T Z^{-1} stabilizes (A, B) whenever (A, B) is controllable.
    const double beta = a.frobenius_norm() + 0.5;
    Matrix shifted = a;
    for (int i = 0; i < n; ++i) shifted(i, i) += beta;
    const Matrix z = lyapunov_raw(-shifted.transpose(), 2.0 * (b * b.transpose()));
    bool ok = false;
    try {
      k = solve_linear(z.transpose(), b).transpose();  // B^T Z^{-1}
      ok = is_hurwitz(a - b * k, kHurwitzMargin);
    } catch (const SingularSystem&) {
      ok = false;
    }
    if (!ok)
      throw NoConvergence(
          "solve_care: could not build an initial stabilizing gain; supply k0");
  }
  if (!is_hurwitz(a - b * k, kHurwitzMargin))
    throw NoConvergence("solve_care: initial gain is not stabilizing");

  Matrix p(n, n);
  Matrix p_prev(n, n);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const Matrix a_cl = a - b * k;
    if (!is_hurwitz(a_cl, kHurwitzMargin))
      throw NoConvergence("solve_care: iterate lost stability");
    p = symmetrized(lyapunov_raw(a_cl, q + k.transpose() * (r * k)));
    k = solve_linear(r, b.transpose() * p);
    if (iter > 0 &&
        (p - p_prev).frobenius_norm() <= 1e-12 * std::max(1.0, p.frobenius_norm())) {
      converged = true;
      break;
    }
    p_prev = p;
  }
  if (!converged) throw NoConvergence("solve_care: iteration cap reached");
  const Matrix resid =
      a.transpose() * p + p * a - p * b * solve_linear(r, b.transpose() * p) + q;
  if (resid.frobenius_norm() > 1e-8 * q.frobenius_norm())
    throw NoConvergence("solve_care: residual above tolerance");
  return p;
}

Matrix lqr_gain(const Matrix& p, const Matrix& b, const Matrix& r) {
  if (p.rows() != p.cols() || b.rows() != p.rows() || r.rows() != r.cols() ||
      r.rows() != b.cols())
    throw DimensionError("lqr_gain: shape mismatch");
  return solve_linear(r, b.transpose() * p);
}

}  // namespace mannctl
