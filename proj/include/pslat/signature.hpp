#pragma once

#include <cstddef>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"

namespace pslat {

/// Inertia of a symmetric bilinear form: counts of positive, negative and
/// zero eigenvalue signs (computed exactly over the rationals).
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  bool operator==(const Inertia&) const = default;
};

/// Exact inertia by symmetric congruence reduction (Lagrange). The input must
/// be symmetric; congruence transformations preserve the signs of the
/// diagonalized form, so no floating point is involved.
inline Inertia signature(const RatMatrix& form) {
  require(form.is_square(), "NotSquare", "signature needs a square matrix");
  std::size_t n = form.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      require(form(i, j) == form(j, i), "NotSymmetric",
              "signature needs a symmetric matrix");

  RatMatrix S = form;
  auto add_row_col = [&](std::size_t dst, std::size_t src, const Rat& c) {
    for (std::size_t j = 0; j < n; ++j) S(dst, j) += c * S(src, j);
    for (std::size_t i = 0; i < n; ++i) S(i, dst) += c * S(i, src);
  };

  Inertia out;
  for (std::size_t k = 0; k < n; ++k) {
    if (S(k, k) == 0) {
      // Bring a nonzero pivot to (k, k) using a symmetric combination. If
      // adding row/col j cancels (off-diagonal pair sums to zero), subtracting
      // works instead.
      std::size_t j = k + 1;
      while (j < n && S(k, j) == 0) ++j;
      if (j == n) {
        ++out.zero;
        continue;
      }
      add_row_col(k, j, Rat(1));
      if (S(k, k) == 0) {
        add_row_col(k, j, Rat(-2));
        require(S(k, k) != 0, "Internal", "pivot recovery failed");
      }
    }
    if (S(k, k) > 0)
      ++out.positive;
    else
      ++out.negative;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (S(i, k) == 0) continue;
      add_row_col(i, k, -S(i, k) / S(k, k));
    }
  }
  return out;
}

inline Inertia signature(const IntMatrix& form) { return signature(to_rational(form)); }

}  // namespace pslat
