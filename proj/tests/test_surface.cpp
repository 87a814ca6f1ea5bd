#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pslat/signature.hpp"
#include "pslat/surface.hpp"

using namespace pslat;

namespace {

const IntMatrix kPlaneGram{{1, 3, 6}, {0, 1, 3}, {0, 0, 1}};
const IntMatrix kQuadricGram{{1, 2, 2, 4}, {0, 1, 0, 2}, {0, 0, 1, 2}, {0, 0, 0, 1}};
const IntMatrix kChain4Gram{{1, 3, 6, 1}, {0, 1, 3, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};

Rat q_norm(const NeronSeveri& ns, const IntVec& cls) {
  Rat s = 0;
  IntVec qc = ns.q_gram.apply(cls);
  for (std::size_t i = 0; i < cls.size(); ++i) s += Rat(cls[i]) * Rat(qc[i]);
  return s;
}

}  // namespace

TEST_CASE("point-like vectors of the plane lattice") {
  Pseudolattice P(kPlaneGram);
  PointLikeSearch found = find_point_like(P);
  CHECK(found.exhaustive);
  REQUIRE(found.points.size() == 1);
  CHECK(found.points[0] == IntVec{1, -2, 1});

  IntVec p = found.points[0];
  CHECK(is_point_like(P, p));
  CHECK_FALSE(is_point_like(P, IntVec{2, -4, 2}));  // not primitive
  CHECK_FALSE(is_point_like(P, IntVec{1, 0, 0}));   // <v, v> = 1
  CHECK(rank_of(P, p, IntVec{1, 0, 0}) == 1);
  CHECK(rank_of(P, p, IntVec{0, 1, 0}) == 1);
  CHECK(rank_of(P, p, IntVec{0, 0, 1}) == 1);
  CHECK(rank_of(P, p, p) == 0);
}

TEST_CASE("plane quotient lattice and canonical class") {
  Pseudolattice P(kPlaneGram);
  IntVec p{1, -2, 1};
  NeronSeveri ns = neron_severi(P, p);
  REQUIRE(ns.embedding.cols() == 1);
  CHECK(ns.q_gram == IntMatrix{{1}});

  // All difference classes of adjacent basis vectors coincide with the
  // generator up to sign and have square one.
  IntVec l12 = lambda_class(P, p, IntVec{1, 0, 0}, IntVec{0, 1, 0});
  CHECK(rank_of(P, p, l12) == 0);
  IntVec c12 = ns_class(P, ns, p, l12);
  CHECK(q_norm(ns, c12) == 1);

  RatVec K = canonical_class(P, p, ns);
  REQUIRE(K.size() == 1);
  CHECK((K[0] == 3 || K[0] == -3));
  CHECK(defect(P, p) == 0);

  try {
    ns_class(P, ns, p, IntVec{1, 0, 0});
    FAIL("expected an orthogonality error");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotOrthogonal");
  }
  try {
    neron_severi(P, IntVec{1, 0, 0});
    FAIL("expected a point-like error");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotPointLike");
  }
}

TEST_CASE("quadric lattice is surface-like with defect zero") {
  Pseudolattice Q(kQuadricGram);
  PointLikeSearch found = find_point_like(Q, 8);
  CHECK_FALSE(found.exhaustive);  // the skew radical has rank two
  REQUIRE(found.points.size() == 1);
  CHECK(found.points[0] == IntVec{1, -1, -1, 1});

  IntVec p = found.points[0];
  NeronSeveri ns = neron_severi(Q, p);
  REQUIRE(ns.embedding.cols() == 2);
  CHECK(det(ns.q_gram) == -1);
  CHECK(signature(ns.q_gram) == Inertia{1, 1, 0});

  RatVec K = canonical_class(Q, p, ns);
  CHECK(is_integral(K));
  RatMatrix q = to_rational(ns.q_gram);
  RatVec qK = q.apply(K);
  Rat kk = 0;
  for (std::size_t i = 0; i < K.size(); ++i) kk += K[i] * qK[i];
  CHECK(kk == 8);
  CHECK(defect(Q, p) == 0);
}

TEST_CASE("length-four chain lattice is a one-point extension with defect zero") {
  Pseudolattice C(kChain4Gram);
  PointLikeSearch found = find_point_like(C, 8);
  REQUIRE(found.points.size() == 1);
  CHECK(found.points[0] == IntVec{1, -2, 1, 0});

  IntVec p = found.points[0];
  CHECK(rank_of(C, p, IntVec{1, 0, 0, 0}) == 1);
  CHECK(rank_of(C, p, IntVec{0, 1, 0, 0}) == 1);
  CHECK(rank_of(C, p, IntVec{0, 0, 1, 0}) == 1);
  CHECK(rank_of(C, p, IntVec{0, 0, 0, 1}) == 0);

  // Adjoining the rank-zero vector keeps the quotient unimodular of inertia
  // (1, rank - 3) and drops q(K, K) from 9 to 8, so the defect stays zero.
  NeronSeveri ns = neron_severi(C, p);
  REQUIRE(ns.embedding.cols() == 2);
  CHECK(abs_int(det(ns.q_gram)) == 1);
  CHECK(signature(ns.q_gram) == Inertia{1, 1, 0});
  RatVec K = canonical_class(C, p, ns);
  RatMatrix q = to_rational(ns.q_gram);
  RatVec qK = q.apply(K);
  Rat kk = 0;
  for (std::size_t i = 0; i < K.size(); ++i) kk += K[i] * qK[i];
  CHECK(kk == 8);
  CHECK(defect(C, p) == 0);
}

TEST_CASE("curve lattice has no point-like vector") {
  Pseudolattice E(IntMatrix{{0, -1}, {1, 0}});
  PointLikeSearch found = find_point_like(E);
  CHECK(found.exhaustive);
  CHECK(found.points.empty());
}

TEST_CASE("lambda classes land in the perp of p") {
  Pseudolattice Q(kQuadricGram);
  IntVec p{1, -1, -1, 1};
  std::mt19937_64 rng(605);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int it = 0; it < 50; ++it) {
    IntVec u1(4), u2(4);
    for (auto& x : u1) x = d(rng);
    for (auto& x : u2) x = d(rng);
    CHECK(rank_of(Q, p, lambda_class(Q, p, u1, u2)) == 0);
  }
}
