#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"

namespace pslat {

/// Dense row-major matrix over an exact scalar (Int or Rat).
///
/// The class is deliberately small: storage, shape, exact equality and the
/// ring operations. Decompositions live in free functions so that integer
/// and rational algorithms can differ where exactness demands it.
template <class T>
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}

  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      require(r.size() == cols_, "DimensionMismatch", "ragged matrix initializer");
      for (const auto& v : r) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }
  bool operator!=(const Matrix& other) const { return !(*this == other); }

  Matrix operator+(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "DimensionMismatch", "matrix addition");
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "DimensionMismatch", "matrix subtraction");
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  Matrix operator-() const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, "DimensionMismatch", "matrix product");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  Matrix operator*(const T& s) const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
  }

  Matrix transposed() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "DimensionMismatch", "block out of range");
    Matrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, "DimensionMismatch",
            "block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  std::vector<T> col(std::size_t j) const {
    require(j < cols_, "DimensionMismatch", "column index out of range");
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<T> row(std::size_t i) const {
    require(i < rows_, "DimensionMismatch", "row index out of range");
    std::vector<T> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, const std::vector<T>& v) {
    require(j < cols_ && v.size() == rows_, "DimensionMismatch", "set_col shape");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  /// Matrix-vector product.
  std::vector<T> apply(const std::vector<T>& v) const {
    require(v.size() == cols_, "DimensionMismatch", "matrix-vector product");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

inline RatVec to_rational(const IntVec& v) {
  RatVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

inline bool is_integral(const RatMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_integer(m(i, j))) return false;
  return true;
}

inline bool is_integral(const RatVec& v) {
  for (const Rat& q : v)
    if (!is_integer(q)) return false;
  return true;
}

inline std::optional<IntMatrix> to_integer(const RatMatrix& m) {
  if (!is_integral(m)) return std::nullopt;
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = numerator(m(i, j));
  return r;
}

inline std::optional<IntVec> to_integer(const RatVec& v) {
  if (!is_integral(v)) return std::nullopt;
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = numerator(v[i]);
  return r;
}

/// Exact determinant by the Bareiss fraction-free elimination.
/// Every division performed is exact, so the result is computed entirely in Int.
inline Int det(const IntMatrix& m) {
  require(m.is_square(), "NotSquare", "determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

inline Rat det(const RatMatrix& m) {
  require(m.is_square(), "NotSquare", "determinant of a non-square matrix");
  std::size_t n = m.rows();
  RatMatrix a = m;
  Rat d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == Rat(0)) ++piv;
    if (piv == n) return Rat(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      d = -d;
    }
    d *= a(k, k);
    Rat inv = Rat(1) / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      Rat f = a(i, k) * inv;
      if (f == Rat(0)) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

/// Exact inverse over the rationals (Gauss-Jordan). Throws Singular.
inline RatMatrix inverse(const RatMatrix& m) {
  require(m.is_square(), "NotSquare", "inverse of a non-square matrix");
  std::size_t n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k) == Rat(0)) ++piv;
    require(piv < n, "Singular", "matrix is singular");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    Rat f = Rat(1) / a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= f;
      inv(k, j) *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == Rat(0)) continue;
      Rat g = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= g * a(k, j);
        inv(i, j) -= g * inv(k, j);
      }
    }
  }
  return inv;
}

inline RatMatrix inverse(const IntMatrix& m) { return inverse(to_rational(m)); }

/// Outcome of exact Gaussian elimination on [A | b].
struct LinearSolve {
  bool consistent = false;
  bool unique = false;
  RatVec solution;  // one solution when consistent
};

/// Solve A x = b exactly over the rationals, reporting consistency and
/// uniqueness. A may be rectangular (rows = equations).
inline LinearSolve solve_linear(const RatMatrix& A, const RatVec& b) {
  require(A.rows() == b.size(), "DimensionMismatch", "solve_linear shape");
  std::size_t m = A.rows(), n = A.cols();
  RatMatrix a = A;
  RatVec rhs = b;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = r;
    while (piv < m && a(piv, c) == Rat(0)) ++piv;
    if (piv == m) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(piv, j));
      std::swap(rhs[r], rhs[piv]);
    }
    Rat f = Rat(1) / a(r, c);
    for (std::size_t j = 0; j < n; ++j) a(r, j) *= f;
    rhs[r] *= f;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || a(i, c) == Rat(0)) continue;
      Rat g = a(i, c);
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= g * a(r, j);
      rhs[i] -= g * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  LinearSolve out;
  for (std::size_t i = r; i < m; ++i)
    if (rhs[i] != Rat(0)) return out;  // inconsistent
  out.consistent = true;
  out.unique = (r == n);
  out.solution.assign(n, Rat(0));
  for (std::size_t i = 0; i < r; ++i) out.solution[pivot_col[i]] = rhs[i];
  return out;
}

inline LinearSolve solve_linear(const IntMatrix& A, const IntVec& b) {
  return solve_linear(to_rational(A), to_rational(b));
}

inline std::string to_string(const IntMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace pslat
