#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"
#include "pslat/pseudolattice.hpp"

namespace pslat {

/// Group homomorphism between pseudolattices, stored as the matrix taking
/// source coordinates to target coordinates (columns are images of the
/// standard basis).
struct Hom {
  Pseudolattice source;
  Pseudolattice target;
  IntMatrix matrix;

  Hom(Pseudolattice src, Pseudolattice tgt, IntMatrix m)
      : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
    require(matrix.rows() == target.rank() && matrix.cols() == source.rank(),
            "DimensionMismatch", "homomorphism matrix must be target-rank by source-rank");
  }

  IntVec apply(const IntVec& u) const { return matrix.apply(u); }

  bool operator==(const Hom&) const = default;
};

/// The rank-two lattice of an elliptic curve: generators a, b with
/// <a, b> = -1, <b, a> = 1, <a, a> = <b, b> = 0.
inline Pseudolattice elliptic_curve() { return Pseudolattice(IntMatrix{{0, -1}, {1, 0}}); }

/// Matrix of the right adjoint r, the unique map with
/// <f(u), v>_target = <u, r(v)>_source. Solving the defining identity gives
/// r = gram_source^{-1} f^T gram_target; it need not be integral when the
/// source is not unimodular.
inline RatMatrix right_adjoint_rational(const Hom& f) {
  return inverse(to_rational(f.source.gram)) *
         to_rational(f.matrix.transposed() * f.target.gram);
}

inline bool has_adjoint(const Hom& f) { return is_integral(right_adjoint_rational(f)); }

inline IntMatrix right_adjoint(const Hom& f) {
  auto r = to_integer(right_adjoint_rational(f));
  require(r.has_value(), "NoAdjoint", "right adjoint is not defined over the integers");
  return *r;
}

/// Twist endomorphism of the target: id - f r.
inline IntMatrix twist(const Hom& f) {
  return IntMatrix::identity(f.target.rank()) - f.matrix * right_adjoint(f);
}

/// Cotwist endomorphism of the source: id - r f.
inline IntMatrix cotwist(const Hom& f) {
  return IntMatrix::identity(f.source.rank()) - right_adjoint(f) * f.matrix;
}

/// Spherical: the adjoint exists over the integers and the twist (hence also
/// the cotwist) is invertible.
inline bool is_spherical(const Hom& f) {
  if (!has_adjoint(f)) return false;
  return abs_int(det(twist(f))) == 1;
}

/// Relative (-1)^n-CY: spherical with cotwist equal to (-1)^n times the Serre
/// operator of the source.
inline bool is_relative_cy(const Hom& f, int n) {
  if (!is_spherical(f)) return false;
  RatMatrix s = serre_operator(f.source);
  if (n % 2 != 0) s = -s;
  return to_rational(cotwist(f)) == s;
}

/// Pairing matrix of the glued lattice source(f1) (+) source(f2): diagonal
/// blocks keep their own pairings, the upper right block pairs through the
/// common target, the lower left block vanishes.
inline Pseudolattice glue_lattice(const Hom& f1, const Hom& f2) {
  require(f1.target == f2.target, "TargetMismatch", "gluing needs a common target");
  std::size_t n1 = f1.source.rank(), n2 = f2.source.rank();
  IntMatrix g(n1 + n2, n1 + n2, Int(0));
  g.set_block(0, 0, f1.source.gram);
  g.set_block(n1, n1, f2.source.gram);
  g.set_block(0, n1, f1.matrix.transposed() * f1.target.gram * f2.matrix);
  return Pseudolattice(g);
}

/// The glued homomorphism (u1, u2) -> f1(u1) + f2(u2). Its twist is the
/// product twist(f1) * twist(f2).
inline Hom glue(const Hom& f1, const Hom& f2) {
  Pseudolattice src = glue_lattice(f1, f2);
  std::size_t n1 = f1.source.rank(), n2 = f2.source.rank();
  IntMatrix m(f1.target.rank(), n1 + n2);
  m.set_block(0, 0, f1.matrix);
  m.set_block(0, n1, f2.matrix);
  return Hom(std::move(src), f1.target, std::move(m));
}

/// The directed lattice on an ordered tuple of primitive vectors in an
/// odd-CY lattice: basis z_1, ..., z_n with <z_i, z_i> = 1,
/// <z_i, z_j> = <v_i, v_j>_H for i < j and 0 for i > j, mapping z_i to v_i.
/// The z_i form an exceptional basis and the map is relative (-1)^0-CY.
inline Hom z_of(const Pseudolattice& H, const std::vector<IntVec>& vs) {
  require(is_cy(H, 1), "NotOddCY", "directed lattice needs an odd-CY target");
  std::size_t n = vs.size();
  require(n > 0, "DimensionMismatch", "directed lattice needs at least one vector");
  for (const IntVec& v : vs) {
    require(v.size() == H.rank(), "DimensionMismatch", "vector must match the target rank");
    require(is_primitive(v), "NotPrimitive", "directed lattice needs primitive vectors");
    require(H.pair(v, v) == 0, "NormMismatch", "directed lattice needs isotropic vectors");
  }
  IntMatrix g = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = H.pair(vs[i], vs[j]);
  IntMatrix m(H.rank(), n);
  for (std::size_t j = 0; j < n; ++j) m.set_col(j, vs[j]);
  return Hom(Pseudolattice(std::move(g)), H, std::move(m));
}

inline Hom z_of_vector(const Pseudolattice& H, const IntVec& v) { return z_of(H, {v}); }

}  // namespace pslat
