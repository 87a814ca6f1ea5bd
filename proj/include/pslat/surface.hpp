#pragma once

#include <cstddef>
#include <vector>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"
#include "pslat/pseudolattice.hpp"
#include "pslat/smith.hpp"

namespace pslat {

/// A point-like vector p: primitive and isotropic, fixed by the transpose
/// pairing (gram p = gram^T p), with the pairing symmetric on p-perp. These
/// are the vectors that behave like the class of a point on a surface.
inline bool is_point_like(const Pseudolattice& L, const IntVec& p) {
  if (p.size() != L.rank() || is_zero_vec(p) || !is_primitive(p)) return false;
  if (L.pair(p, p) != 0) return false;
  if (L.gram.apply(p) != L.gram.transposed().apply(p)) return false;
  IntMatrix functional(1, L.rank());
  IntVec w = L.gram.apply(p);
  for (std::size_t j = 0; j < w.size(); ++j) functional(0, j) = w[j];
  IntMatrix B = integer_kernel(functional);
  IntMatrix skew = L.gram - L.gram.transposed();
  IntMatrix on_perp = B.transposed() * skew * B;
  return on_perp == IntMatrix(on_perp.rows(), on_perp.cols(), Int(0));
}

/// Result of searching for point-like vectors inside the radical of the
/// skew part of the pairing. `exhaustive` is true when the radical has rank
/// at most one, in which case the list is provably complete.
struct PointLikeSearch {
  std::vector<IntVec> points;
  bool exhaustive = false;
};

/// Point-like vectors must lie in ker(gram - gram^T), so only coefficient
/// tuples over that kernel basis are enumerated, up to overall sign (first
/// nonzero coefficient positive), coefficients bounded by `height`.
inline PointLikeSearch find_point_like(const Pseudolattice& L, int height = 16) {
  PointLikeSearch out;
  IntMatrix K = integer_kernel(L.gram - L.gram.transposed());
  std::size_t d = K.cols();
  if (d == 0) {
    out.exhaustive = true;
    return out;
  }
  if (d == 1) {
    out.exhaustive = true;
    IntVec g = K.col(0);
    if (is_point_like(L, g)) out.points.push_back(g);
    return out;
  }
  require(height >= 1, "DimensionMismatch", "search height must be positive");
  std::vector<Int> c(d, Int(-height));
  for (;;) {
    int lead = 0;
    for (std::size_t i = 0; i < d && lead == 0; ++i) lead = sign_of(c[i]);
    if (lead > 0) {  // canonical sign representative
      IntVec p(L.rank(), Int(0));
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < L.rank(); ++i) p[i] += c[j] * K(i, j);
      if (is_primitive(p) && is_point_like(L, p)) out.points.push_back(p);
    }
    std::size_t k = 0;
    while (k < d && c[k] == height) c[k++] = -height;
    if (k == d) break;
    ++c[k];
  }
  return out;
}

/// rank(u) with respect to the point-like vector p.
inline Int rank_of(const Pseudolattice& L, const IntVec& p, const IntVec& u) {
  return L.pair(u, p);
}

/// The quotient lattice p-perp / Z p with the negated induced pairing. The
/// embedding matrix holds lifts of the quotient basis as columns in ambient
/// coordinates; q_gram is symmetric because p is point-like.
struct NeronSeveri {
  IntMatrix embedding;
  IntMatrix q_gram;
};

inline NeronSeveri neron_severi(const Pseudolattice& L, const IntVec& p) {
  require(is_point_like(L, p), "NotPointLike", "quotient needs a point-like vector");
  std::size_t n = L.rank();
  IntMatrix functional(1, n);
  IntVec w = L.gram.apply(p);
  for (std::size_t j = 0; j < n; ++j) functional(0, j) = w[j];
  IntMatrix B = integer_kernel(functional);  // saturated basis of p-perp
  std::size_t k = B.cols();

  // Coordinates of p in the perp basis; integral by saturation, primitive
  // because p is primitive in the ambient lattice.
  LinearSolve s = solve_linear(to_rational(B), to_rational(p));
  require(s.consistent && s.unique && is_integral(s.solution), "Internal",
          "point-like vector must generate a saturated line in its perp");
  IntVec x = *to_integer(s.solution);
  require(is_primitive(x), "Internal", "point-like vector must be primitive in its perp");

  // Change basis of p-perp so that the first vector is p itself.
  IntMatrix xm(k, 1);
  for (std::size_t i = 0; i < k; ++i) xm(i, 0) = x[i];
  SmithForm sf = smith_form(xm);  // sf.U * x * (+-1) = e_1
  IntMatrix U = sf.U;
  if (sf.V(0, 0) < 0)
    for (std::size_t j = 0; j < k; ++j) U(0, j) = -U(0, j);
  IntMatrix Uinv = *to_integer(inverse(to_rational(U)));
  IntMatrix Bp = B * Uinv;

  NeronSeveri ns;
  ns.embedding = Bp.block(0, 1, n, k - 1);
  ns.q_gram = -(ns.embedding.transposed() * L.gram * ns.embedding);
  require(ns.q_gram == ns.q_gram.transposed(), "Internal", "quotient pairing must be symmetric");
  return ns;
}

/// Class of u in the quotient: the unique y with u = embedding * y + t * p.
inline IntVec ns_class(const Pseudolattice& L, const NeronSeveri& ns, const IntVec& p,
                       const IntVec& u) {
  std::size_t n = L.rank(), k = ns.embedding.cols();
  IntMatrix sys(n, k + 1);
  sys.set_block(0, 0, ns.embedding);
  for (std::size_t i = 0; i < n; ++i) sys(i, k) = p[i];
  LinearSolve s = solve_linear(to_rational(sys), to_rational(u));
  require(s.consistent, "NotOrthogonal", "vector does not lie in the perp of p");
  require(s.unique && is_integral(s.solution), "Internal", "quotient class must be integral");
  IntVec y = *to_integer(s.solution);
  y.resize(k);
  return y;
}

/// lambda(u1, u2) = rank(u1) u2 - rank(u2) u1, always orthogonal to p.
inline IntVec lambda_class(const Pseudolattice& L, const IntVec& p, const IntVec& u1,
                           const IntVec& u2) {
  Int r1 = rank_of(L, p, u1), r2 = rank_of(L, p, u2);
  IntVec v(L.rank());
  for (std::size_t i = 0; i < L.rank(); ++i) v[i] = r1 * u2[i] - r2 * u1[i];
  return v;
}

/// The canonical class K in quotient coordinates, cut out by
/// q(K, [lambda(e_i, e_j)]) = -(gram_ij - gram_ji) over all pairs i < j.
inline RatVec canonical_class(const Pseudolattice& L, const IntVec& p, const NeronSeveri& ns) {
  std::size_t n = L.rank(), k = ns.embedding.cols();
  std::vector<IntVec> rows;
  IntVec rhs_entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      IntVec ei(n, Int(0)), ej(n, Int(0));
      ei[i] = 1;
      ej[j] = 1;
      IntVec cls = ns_class(L, ns, p, lambda_class(L, p, ei, ej));
      rows.push_back(ns.q_gram.apply(cls));
      rhs_entries.push_back(-(L.gram(i, j) - L.gram(j, i)));
    }
  IntMatrix A(rows.size(), k);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < k; ++c) A(r, c) = rows[r][c];
  LinearSolve s = solve_linear(to_rational(A), to_rational(rhs_entries));
  require(s.consistent, "Inconsistent", "no canonical class satisfies the pairing relations");
  require(s.unique, "Underdetermined", "canonical class is not unique");
  return s.solution;
}

/// defect = q(K, K) + rank(NS) - 10.
inline Rat defect(const Pseudolattice& L, const IntVec& p) {
  NeronSeveri ns = neron_severi(L, p);
  RatVec K = canonical_class(L, p, ns);
  RatMatrix q = to_rational(ns.q_gram);
  Rat kk = 0;
  RatVec qK = q.apply(K);
  for (std::size_t i = 0; i < K.size(); ++i) kk += K[i] * qK[i];
  return kk + Rat(static_cast<long>(ns.embedding.cols())) - 10;
}

}  // namespace pslat
