#pragma once

#include <cstddef>
#include <vector>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"

namespace pslat {

/// Floor division (quotient rounded toward minus infinity).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Smith normal form U * A * V = D with U, V unimodular and D diagonal,
/// nonnegative, each diagonal entry dividing the next.
struct SmithForm {
  IntMatrix U, D, V;
};

inline SmithForm smith_form(const IntMatrix& A) {
  std::size_t m = A.rows(), n = A.cols();
  IntMatrix D = A;
  IntMatrix U = IntMatrix::identity(m);
  IntMatrix V = IntMatrix::identity(n);

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(D(a, j), D(b, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(U(a, j), U(b, j));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(D(i, a), D(i, b));
    for (std::size_t i = 0; i < n; ++i) std::swap(V(i, a), V(i, b));
  };
  auto row_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < n; ++j) D(dst, j) -= q * D(src, j);
    for (std::size_t j = 0; j < m; ++j) U(dst, j) -= q * U(src, j);
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m; ++i) D(i, dst) -= q * D(i, src);
    for (std::size_t i = 0; i < n; ++i) V(i, dst) -= q * V(i, src);
  };
  auto row_add = [&](std::size_t dst, std::size_t src) {
    for (std::size_t j = 0; j < n; ++j) D(dst, j) += D(src, j);
    for (std::size_t j = 0; j < m; ++j) U(dst, j) += U(src, j);
  };

  std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    // Pivot: a nonzero entry of smallest absolute value in the trailing block.
    std::size_t pi = t, pj = t;
    bool found = false;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        if (!found || abs_int(D(i, j)) < abs_int(D(pi, pj))) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool again = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        row_sub(i, t, D(i, t) / D(t, t));
        if (D(i, t) != 0) {
          swap_rows(i, t);
          again = true;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        col_sub(j, t, D(t, j) / D(t, t));
        if (D(t, j) != 0) {
          swap_cols(j, t);
          again = true;
        }
      }
      if (again) continue;
      // Enforce divisibility of the trailing block by the pivot.
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n && fixed; ++j)
          if (D(i, j) % D(t, t) != 0) {
            row_add(t, i);
            fixed = false;
          }
      if (fixed) break;
    }
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < m; ++j) U(t, j) = -U(t, j);
    }
  }
  return {U, D, V};
}

inline std::vector<Int> smith_diagonal(const IntMatrix& A) {
  SmithForm s = smith_form(A);
  std::size_t k = std::min(A.rows(), A.cols());
  std::vector<Int> d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = s.D(i, i);
  return d;
}

/// Deterministic column-style Hermite reduction of a full-column-rank matrix:
/// pivots positive with strictly increasing pivot rows, entries to the left of
/// each pivot reduced into [0, pivot).
inline IntMatrix hermite_columns(IntMatrix B) {
  std::size_t n = B.rows(), k = B.cols();
  auto col_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < n; ++i) B(i, dst) -= q * B(i, src);
  };
  std::size_t c = 0;
  for (std::size_t r = 0; r < n && c < k; ++r) {
    for (;;) {
      std::size_t best = k;
      for (std::size_t j = c; j < k; ++j) {
        if (B(r, j) == 0) continue;
        if (best == k || abs_int(B(r, j)) < abs_int(B(r, best))) best = j;
      }
      if (best == k) break;  // row has no pivot among remaining columns
      if (best != c)
        for (std::size_t i = 0; i < n; ++i) std::swap(B(i, best), B(i, c));
      bool clean = true;
      for (std::size_t j = c + 1; j < k; ++j) {
        if (B(r, j) == 0) continue;
        col_sub(j, c, B(r, j) / B(r, c));
        if (B(r, j) != 0) clean = false;
      }
      if (clean) {
        if (B(r, c) < 0)
          for (std::size_t i = 0; i < n; ++i) B(i, c) = -B(i, c);
        for (std::size_t j = 0; j < c; ++j) col_sub(j, c, floor_div(B(r, j), B(r, c)));
        ++c;
        break;
      }
    }
  }
  return B;
}

/// Basis of the saturated integer kernel of A (as matrix columns, Hermite
/// reduced). Saturation: every integer vector killed by A is an integer
/// combination of the returned columns.
inline IntMatrix integer_kernel(const IntMatrix& A) {
  SmithForm s = smith_form(A);
  std::size_t n = A.cols();
  std::size_t lim = std::min(A.rows(), n);
  std::size_t r = 0;
  while (r < lim && s.D(r, r) != 0) ++r;
  IntMatrix ker(n, n - r);
  for (std::size_t j = r; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) ker(i, j - r) = s.V(i, j);
  if (ker.cols() == 0) return ker;
  return hermite_columns(ker);
}

/// Invariant factors of coker(A) = Z^rows / column-image, listing the
/// nontrivial finite factors (> 1) followed by one 0 per free summand.
inline std::vector<Int> cokernel_invariants(const IntMatrix& A) {
  SmithForm s = smith_form(A);
  std::size_t m = A.rows();
  std::size_t lim = std::min(m, A.cols());
  std::vector<Int> out;
  std::size_t r = 0;
  for (std::size_t i = 0; i < lim; ++i) {
    if (s.D(i, i) == 0) break;
    ++r;
    if (s.D(i, i) != 1) out.push_back(s.D(i, i));
  }
  for (std::size_t i = r; i < m; ++i) out.push_back(0);
  return out;
}

}  // namespace pslat
