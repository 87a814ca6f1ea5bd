#pragma once

#include <cstddef>
#include <vector>

#include "pslat/errors.hpp"
#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"

namespace pslat {

/// Free abelian group of finite rank with a nondegenerate (not necessarily
/// symmetric) integer bilinear pairing, stored as its Gram matrix in the
/// standard basis: gram(i, j) = <e_i, e_j>.
struct Pseudolattice {
  IntMatrix gram;

  explicit Pseudolattice(IntMatrix g) : gram(std::move(g)) {
    require(gram.is_square(), "NotSquare", "pairing matrix must be square");
    require(det(gram) != 0, "Degenerate", "pairing matrix must be nondegenerate");
  }

  std::size_t rank() const { return gram.rows(); }

  Int pair(const IntVec& u, const IntVec& v) const {
    require(u.size() == rank() && v.size() == rank(), "DimensionMismatch",
            "vectors must match the lattice rank");
    IntVec gv = gram.apply(v);
    Int s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * gv[i];
    return s;
  }

  bool operator==(const Pseudolattice&) const = default;
};

inline bool is_unimodular(const Pseudolattice& L) { return abs_int(det(L.gram)) == 1; }

/// Serre operator S = gram^{-1} * gram^T. It is the unique operator with
/// <u, v> = <v, S u> for all u, v; integral whenever the lattice is unimodular.
inline RatMatrix serre_operator(const Pseudolattice& L) {
  return inverse(to_rational(L.gram)) * to_rational(L.gram.transposed());
}

/// Whether the pairing satisfies gram^T = (-1)^n * gram (Calabi-Yau pairing of
/// parity n).
inline bool is_cy(const Pseudolattice& L, int n) {
  IntMatrix t = L.gram.transposed();
  return (n % 2 == 0) ? (t == L.gram) : (t == -L.gram);
}

/// Columns of a square unimodular matrix, read as an ordered tuple of lattice
/// vectors in standard coordinates.
inline bool is_basis(const Pseudolattice& L, const IntMatrix& b) {
  return b.rows() == L.rank() && b.cols() == L.rank() && abs_int(det(b)) == 1;
}

inline IntMatrix gram_in_basis(const Pseudolattice& L, const IntMatrix& b) {
  require(b.rows() == L.rank(), "DimensionMismatch", "basis must match the lattice rank");
  return b.transposed() * L.gram * b;
}

/// Automorphism of the lattice preserving the pairing.
inline bool is_isometry(const Pseudolattice& L, const IntMatrix& m) {
  if (m.rows() != L.rank() || m.cols() != L.rank()) return false;
  if (abs_int(det(m)) != 1) return false;
  return m.transposed() * L.gram * m == L.gram;
}

inline bool is_exceptional(const Pseudolattice& L, const IntVec& v) {
  return L.pair(v, v) == 1;
}

/// e_1, ..., e_k with <e_i, e_i> = 1 and <e_i, e_j> = 0 for i > j, so the Gram
/// matrix in this tuple is unit upper triangular.
inline bool is_exceptional_sequence(const Pseudolattice& L, const IntMatrix& b) {
  IntMatrix g = gram_in_basis(L, b);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (g(i, i) != 1) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (g(i, j) != 0) return false;
  }
  return true;
}

/// Left mutation of u across the exceptional vector e: u - <e, u> e.
inline IntVec mutate_left(const Pseudolattice& L, const IntVec& e, const IntVec& u) {
  require(is_exceptional(L, e), "NotExceptional", "left mutation needs <e, e> = 1");
  Int c = L.pair(e, u);
  IntVec r = u;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
  return r;
}

/// Right mutation of u across the exceptional vector e: u - <u, e> e.
inline IntVec mutate_right(const Pseudolattice& L, const IntVec& e, const IntVec& u) {
  require(is_exceptional(L, e), "NotExceptional", "right mutation needs <e, e> = 1");
  Int c = L.pair(u, e);
  IntVec r = u;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
  return r;
}

enum class MoveDir { Left, Right };

/// One elementary mutation of an adjacent pair in an exceptional sequence,
/// acting at 0-based position index (on vectors index and index + 1).
struct Move {
  std::size_t index = 0;
  MoveDir dir = MoveDir::Left;

  bool operator==(const Move&) const = default;
};

inline Move inverse_move(const Move& m) {
  return {m.index, m.dir == MoveDir::Left ? MoveDir::Right : MoveDir::Left};
}

/// Left move at i: (e_i, e_{i+1}) -> (L_{e_i} e_{i+1}, e_i).
/// Right move at i: (e_i, e_{i+1}) -> (e_{i+1}, R_{e_{i+1}} e_i).
/// The two are mutually inverse and preserve exceptionality of the sequence.
inline IntMatrix mutate_basis(const Pseudolattice& L, const IntMatrix& b, const Move& m) {
  require(m.index + 1 < b.cols(), "DimensionMismatch", "mutation position out of range");
  IntMatrix r = b;
  IntVec ei = b.col(m.index), ej = b.col(m.index + 1);
  if (m.dir == MoveDir::Left) {
    r.set_col(m.index, mutate_left(L, ei, ej));
    r.set_col(m.index + 1, ei);
  } else {
    r.set_col(m.index, ej);
    r.set_col(m.index + 1, mutate_right(L, ej, ei));
  }
  return r;
}

inline IntMatrix apply_moves(const Pseudolattice& L, IntMatrix b, const std::vector<Move>& moves) {
  for (const Move& m : moves) b = mutate_basis(L, b, m);
  return b;
}

inline std::vector<Move> inverse_moves(const std::vector<Move>& moves) {
  std::vector<Move> r;
  r.reserve(moves.size());
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) r.push_back(inverse_move(*it));
  return r;
}

/// Negate the chosen columns. Sign flips keep a sequence exceptional and
/// commute with mutation up to relocating the flipped positions.
inline IntMatrix apply_flips(IntMatrix b, const std::vector<std::size_t>& positions) {
  for (std::size_t p : positions) {
    require(p < b.cols(), "DimensionMismatch", "flip position out of range");
    for (std::size_t i = 0; i < b.rows(); ++i) b(i, p) = -b(i, p);
  }
  return b;
}

}  // namespace pslat
