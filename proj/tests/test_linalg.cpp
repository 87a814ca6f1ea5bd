#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pslat/integer.hpp"
#include "pslat/matrix.hpp"
#include "pslat/signature.hpp"
#include "pslat/smith.hpp"

using namespace pslat;

namespace {

IntMatrix random_int_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_diagonal(const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("integer helpers") {
  CHECK(gcd_int(12, -18) == 6);
  CHECK(gcd_int(0, 0) == 0);
  CHECK(content({Int(6), Int(-9), Int(15)}) == 3);
  CHECK(is_primitive({Int(2), Int(3)}));
  CHECK_FALSE(is_primitive({Int(2), Int(4)}));

  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {240, 46}, {-240, 46}, {240, -46}, {0, -5}, {7, 0}, {1, 1}, {-3, -3}}) {
    ExtGcd e = ext_gcd(Int(a), Int(b));
    CHECK(e.g == gcd_int(Int(a), Int(b)));
    CHECK(e.g >= 0);
    CHECK(e.x * a + e.y * b == e.g);
  }

  CHECK(to_string(Rat(3, 4)) == "3/4");
  CHECK(to_string(Rat(8, 4)) == "2");
  CHECK(to_string(Rat(-5, 10)) == "-1/2");
  CHECK(parse_int("-12345678901234567890123") == -Int("12345678901234567890123"));
  CHECK_THROWS_AS(parse_int("12x"), Error);

  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(7, -2) == -4);
  CHECK(floor_div(-7, -2) == 3);
  CHECK(floor_div(-6, 3) == -2);
}

TEST_CASE("matrix arithmetic and shape checks") {
  IntMatrix a{{1, 2}, {3, 4}};
  IntMatrix b{{0, 1}, {1, 0}};
  CHECK(a * b == IntMatrix{{2, 1}, {4, 3}});
  CHECK(b * a == IntMatrix{{3, 4}, {1, 2}});
  CHECK(a + b - b == a);
  CHECK((-a) * Int(-1) == a);
  CHECK(a.transposed() == IntMatrix{{1, 3}, {2, 4}});
  CHECK(IntMatrix::identity(3)(2, 2) == 1);

  IntMatrix m(3, 4, Int(0));
  m.set_block(1, 1, a);
  CHECK(m(2, 2) == 4);
  CHECK(m.block(1, 1, 2, 2) == a);
  CHECK(m.col(1) == IntVec{0, 1, 3});
  CHECK(m.row(2) == IntVec{0, 3, 4, 0});
  CHECK(a.apply({Int(1), Int(-1)}) == IntVec{-1, -1});

  try {
    a* IntMatrix(3, 3, Int(0));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == "DimensionMismatch");
  }
}

TEST_CASE("fraction-free determinant matches frozen values") {
  CHECK(det(IntMatrix{{1, 3, 6}, {0, 1, 3}, {0, 0, 1}}) == 1);
  CHECK(det(IntMatrix{{0, -1}, {1, 0}}) == 1);
  CHECK(det(IntMatrix{{0, 1}, {1, 0}}) == -1);  // exercises the row-swap path
  CHECK(det(IntMatrix{{2, 3}, {4, 5}}) == -2);
  CHECK(det(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == -144);
  CHECK(det(IntMatrix{{-7}}) == -7);
  CHECK(det(IntMatrix{{16, 3, 2, 13}, {5, 10, 11, 8}, {9, 6, 7, 12}, {4, 15, 14, 1}}) == 0);
}

TEST_CASE("integer and rational determinants agree") {
  std::mt19937_64 rng(20240901);
  for (int it = 0; it < 60; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 5);
    IntMatrix m = random_int_matrix(rng, n, n, 9);
    Rat rd = det(to_rational(m));
    CHECK(is_integer(rd));
    CHECK(numerator(rd) == det(m));
  }
}

TEST_CASE("rational inverse") {
  RatMatrix g3 = to_rational(IntMatrix{{1, 3, 6}, {0, 1, 3}, {0, 0, 1}});
  CHECK(inverse(g3) == to_rational(IntMatrix{{1, -3, 3}, {0, 1, -3}, {0, 0, 1}}));

  RatMatrix e = to_rational(IntMatrix{{0, -1}, {1, 0}});
  CHECK(inverse(e) == to_rational(IntMatrix{{0, 1}, {-1, 0}}));
  CHECK(e * inverse(e) == RatMatrix::identity(2));

  try {
    inverse(to_rational(IntMatrix{{1, 2}, {2, 4}}));
    FAIL("expected a singularity error");
  } catch (const Error& err) {
    CHECK(err.kind() == "Singular");
  }
}

TEST_CASE("exact linear solve") {
  LinearSolve s = solve_linear(IntMatrix{{2, 1}, {1, -1}}, IntVec{1, 2});
  REQUIRE(s.consistent);
  CHECK(s.unique);
  CHECK(s.solution == RatVec{Rat(1), Rat(-1)});

  s = solve_linear(IntMatrix{{1, 1}, {2, 2}}, IntVec{1, 3});
  CHECK_FALSE(s.consistent);

  s = solve_linear(IntMatrix{{1, 1}, {2, 2}}, IntVec{1, 2});
  REQUIRE(s.consistent);
  CHECK_FALSE(s.unique);
  CHECK(IntMatrix{{1, 1}, {2, 2}}.apply(*to_integer(s.solution)) == IntVec{1, 2});

  s = solve_linear(IntMatrix{{2}}, IntVec{1});
  REQUIRE(s.consistent);
  CHECK(s.solution == RatVec{Rat(1, 2)});
}

TEST_CASE("smith normal form on frozen inputs") {
  CHECK(smith_diagonal(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) ==
        std::vector<Int>{2, 6, 12});
  CHECK(smith_diagonal(IntMatrix{{0, 3, 6}, {1, 1, 1}}) == std::vector<Int>{1, 3});
  CHECK(smith_diagonal(IntMatrix{{0, 2, 2, 4}, {1, 1, 1, 1}}) == std::vector<Int>{1, 2});
  CHECK(smith_diagonal(IntMatrix{{0, 3, 6, 1}, {1, 1, 1, 1}}) == std::vector<Int>{1, 1});
}

TEST_CASE("smith normal form invariants hold on random matrices") {
  std::mt19937_64 rng(77001);
  for (int it = 0; it < 80; ++it) {
    std::size_t r = 1 + static_cast<std::size_t>(it % 4);
    std::size_t c = 1 + static_cast<std::size_t>((it / 4) % 4);
    IntMatrix a = random_int_matrix(rng, r, c, 7);
    SmithForm s = smith_form(a);
    CHECK(s.U * a * s.V == s.D);
    CHECK(abs_int(det(s.U)) == 1);
    CHECK(abs_int(det(s.V)) == 1);
    CHECK(is_diagonal(s.D));
    std::size_t k = std::min(r, c);
    for (std::size_t i = 0; i < k; ++i) CHECK(s.D(i, i) >= 0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (s.D(i + 1, i + 1) == 0) continue;
      REQUIRE(s.D(i, i) != 0);
      CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
    }
  }
}

TEST_CASE("saturated integer kernels") {
  IntMatrix chi3{{1, 3, 6}, {0, 1, 3}, {0, 0, 1}};
  IntMatrix ker = integer_kernel(chi3 - chi3.transposed());
  REQUIRE(ker.cols() == 1);
  CHECK(ker.col(0) == IntVec{1, -2, 1});

  IntMatrix chi4{{1, 2, 2, 4}, {0, 1, 0, 2}, {0, 0, 1, 2}, {0, 0, 0, 1}};
  ker = integer_kernel(chi4 - chi4.transposed());
  REQUIRE(ker.cols() == 2);
  CHECK(ker.col(0) == IntVec{1, 0, -2, 1});
  CHECK(ker.col(1) == IntVec{0, 1, -1, 0});

  // Saturation: the kernel of (2, -2) is generated by the primitive (1, 1).
  ker = integer_kernel(IntMatrix{{2, -2}});
  REQUIRE(ker.cols() == 1);
  CHECK(ker.col(0) == IntVec{1, 1});

  CHECK(integer_kernel(IntMatrix::identity(3)).cols() == 0);

  std::mt19937_64 rng(5150);
  for (int it = 0; it < 40; ++it) {
    IntMatrix a = random_int_matrix(rng, 2 + it % 3, 2 + (it / 3) % 3, 6);
    IntMatrix k = integer_kernel(a);
    for (std::size_t j = 0; j < k.cols(); ++j) {
      CHECK(is_zero_vec(a.apply(k.col(j))));
      CHECK(is_primitive(k.col(j)));
    }
  }
}

TEST_CASE("hermite column reduction is deterministic") {
  IntMatrix b{{2, 3}, {4, 5}, {6, 7}};
  CHECK(hermite_columns(b) == IntMatrix{{1, 0}, {1, 2}, {1, 4}});
  // A column permutation of the generators yields the same reduced basis.
  IntMatrix b2{{3, 2}, {5, 4}, {7, 6}};
  CHECK(hermite_columns(b2) == hermite_columns(b));
}

TEST_CASE("cokernel invariant factors") {
  CHECK(cokernel_invariants(IntMatrix{{0, 3, 6}, {1, 1, 1}}) == std::vector<Int>{3});
  CHECK(cokernel_invariants(IntMatrix{{0, 2, 2, 4}, {1, 1, 1, 1}}) == std::vector<Int>{2});
  CHECK(cokernel_invariants(IntMatrix{{0, 3, 6, 1}, {1, 1, 1, 1}}).empty());
  CHECK(cokernel_invariants(IntMatrix{{2, 0}, {0, 0}}) == std::vector<Int>{2, 0});
  CHECK(cokernel_invariants(IntMatrix::identity(4)).empty());
}

TEST_CASE("inertia of symmetric forms") {
  CHECK(signature(IntMatrix{{2, 0, 0, 0}, {0, -3, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 5}}) ==
        Inertia{2, 1, 1});
  CHECK(signature(IntMatrix{{0, 1}, {1, 0}}) == Inertia{1, 1, 0});
  // Zero pivot whose naive symmetric fix cancels; the fallback path must fire.
  CHECK(signature(IntMatrix{{0, 1}, {1, -2}}) == Inertia{1, 1, 0});
  CHECK(signature(IntMatrix{{-2}}) == Inertia{0, 1, 0});
  CHECK(signature(IntMatrix(3, 3, Int(0))) == Inertia{0, 0, 3});

  try {
    signature(IntMatrix{{0, -1}, {1, 0}});
    FAIL("expected a symmetry error");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotSymmetric");
  }

  // Congruence invariance: the inertia of P^T S P matches S for unimodular P.
  std::mt19937_64 rng(424242);
  for (int it = 0; it < 30; ++it) {
    IntMatrix s = random_int_matrix(rng, 4, 4, 5);
    s = s + s.transposed();
    IntMatrix p = random_int_matrix(rng, 4, 4, 3);
    if (abs_int(det(p)) != 1) continue;
    CHECK(signature(p.transposed() * s * p) == signature(s));
  }
}
