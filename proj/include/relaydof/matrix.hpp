#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace relaydof {

using cplx = std::complex<double>;

// Dense complex matrix, just big enough for the link-level simulator. The
// matrices here are tiny (antenna counts), so plain Gaussian elimination
// with partial pivoting is all we need.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  CMat hermitian() const {
    CMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  CMat block(int row0, int col0, int nrows, int ncols) const {
    CMat m(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
      for (int j = 0; j < ncols; ++j) m(i, j) = (*this)(row0 + i, col0 + j);
    return m;
  }

  void set_block(int row0, int col0, const CMat& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) (*this)(row0 + i, col0 + j) = m(i, j);
  }

  CMat scaled(cplx f) const {
    CMat m = *this;
    for (auto& v : m.a_) v *= f;
    return m;
  }

  friend CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("CMat: dimension mismatch in multiply");
    CMat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend CMat operator+(const CMat& a, const CMat& b) {
    CMat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
  }
  friend CMat operator-(const CMat& a, const CMat& b) {
    CMat c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }

  double frob_norm() const {
    double s = 0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

struct SolveResult {
  CMat x;
  bool singular = false;
};

// Solves A X = B for square A (LU with partial pivoting).
inline SolveResult solve_square(CMat a, CMat b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw std::invalid_argument("solve_square: dimension mismatch");
  const int n = a.rows();
  SolveResult r;
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double tol = scale * n * 1e-13;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) <= tol) {
      r.singular = true;
      r.x = CMat(n, b.cols());
      return r;
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
    }
    const cplx d = a(col, col);
    for (int i = col + 1; i < n; ++i) {
      const cplx f = a(i, col) / d;
      if (f == cplx{}) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(col, j);
    }
  }
  CMat x(n, b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = n - 1; i >= 0; --i) {
      cplx s = b(i, j);
      for (int k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s / a(i, i);
    }
  }
  r.x = x;
  return r;
}

// Least-squares solve via normal equations: X = (A^H A)^-1 A^H B. A must
// have full column rank; rank deficiency is flagged, not thrown.
inline SolveResult lsq_solve(const CMat& a, const CMat& b) {
  if (a.rows() < a.cols()) {
    SolveResult r;
    r.singular = true;
    r.x = CMat(a.cols(), b.cols());
    return r;
  }
  const CMat ah = a.hermitian();
  return solve_square(ah * a, ah * b);
}

// log2 det(I + A A^H) via Cholesky; the argument is Hermitian positive
// definite by construction.
inline double log2det_i_plus_aah(const CMat& a) {
  const int n = a.rows();
  CMat g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (int j = 0; j < n; ++j) g(i, j) += cplx{};
  }
  const CMat aah = a * a.hermitian();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = aah(i, j) + (i == j ? 1.0 : 0.0);
  double log2det = 0;
  for (int col = 0; col < n; ++col) {
    cplx d = g(col, col);
    for (int k = 0; k < col; ++k) d -= g(col, k) * std::conj(g(col, k));
    const double dr = d.real();
    if (dr <= 0) throw std::runtime_error("log2det: lost positive definiteness");
    const double l = std::sqrt(dr);
    g(col, col) = l;
    log2det += 2.0 * std::log2(l);
    for (int i = col + 1; i < n; ++i) {
      cplx s = g(i, col);
      for (int k = 0; k < col; ++k) s -= g(i, k) * std::conj(g(col, k));
      g(i, col) = s / l;
    }
  }
  return log2det;
}

}  // namespace relaydof
