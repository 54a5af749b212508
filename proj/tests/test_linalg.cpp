#include "doctest.h"
#include "lmc/linalg.hpp"

using namespace lmc;

namespace {

Matrix from_rows(int rows, int cols, const std::vector<std::vector<int>>& data) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (data[r][c] != 0) m.set(r, c, Rational(data[r][c]));
    }
  }
  return m;
}

Vec vec(const std::vector<std::pair<int, int>>& entries) {
  Vec v;
  for (auto& [i, x] : entries) v[i] = Rational(x);
  return v;
}

}  // namespace

TEST_CASE("rational strings") {
  CHECK(rational_to_string(Rational(1, 2)) == "1/2");
  CHECK(rational_to_string(Rational(-3)) == "-3");
  CHECK(rational_to_string(Rational(0)) == "0");
  CHECK(rational_to_string(Rational(-7, 4)) == "-7/4");
  CHECK(rational_from_string("1/2") == Rational(1, 2));
  CHECK(rational_from_string("-3") == Rational(-3));
  CHECK(rational_from_string("6/4") == Rational(3, 2));
  CHECK(rational_from_string("-6/4") == Rational(-3, 2));
  CHECK(!rational_from_string("").has_value());
  CHECK(!rational_from_string("1/0").has_value());
  CHECK(!rational_from_string("x").has_value());
  CHECK(!rational_from_string("1/2/3").has_value());
  CHECK(!rational_from_string("1.5").has_value());
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(inv_factorial(3) == Rational(1, 6));
}

TEST_CASE("vectors and matrices") {
  Vec a = vec({{0, 1}, {2, 3}});
  vec_add(a, vec({{0, -1}, {1, 5}}));
  CHECK(a == vec({{1, 5}, {2, 3}}));  // cancelled entries are erased
  CHECK(!vec_is_zero(a));
  vec_add(a, a, Rational(-1));
  CHECK(vec_is_zero(a));

  Matrix m = from_rows(2, 2, {{1, 2}, {3, 4}});
  CHECK(m.at(0, 1) == 2);
  CHECK(m.at(1, 1) == 4);
  m.add(1, 1, Rational(-4));
  CHECK(m.at(1, 1) == 0);
  CHECK(m.apply(vec({{0, 1}, {1, 1}})) == vec({{0, 3}, {1, 3}}));

  Matrix p = from_rows(2, 2, {{1, 2}, {3, 4}}).multiply(from_rows(2, 2, {{0, 1}, {1, 0}}));
  CHECK(p.at(0, 0) == 2);
  CHECK(p.at(0, 1) == 1);
  CHECK(p.at(1, 0) == 4);
  CHECK(p.at(1, 1) == 3);
}

TEST_CASE("echelon produces a fully reduced form") {
  // The first pivot row carries a nonzero entry in the second pivot column, so
  // full reduction must clean it: [[1,1],[1,2]] -> identity.
  Matrix m = from_rows(2, 2, {{1, 1}, {1, 2}});
  Echelon e(m);
  CHECK(e.rank() == 2);
  auto x = e.solve(vec({{0, 3}, {1, 5}}));
  REQUIRE(x.has_value());
  CHECK(*x == vec({{0, 1}, {1, 2}}));
}

TEST_CASE("kernel of the simplicial coboundary on the triangle") {
  // Columns are the coboundaries of the three vertex indicators on the
  // 2-simplex; the kernel is exactly the constants (1,1,1).
  Matrix m = from_rows(3, 3,
                       {{-1, 1, 0},    // edge 01
                        {-1, 0, 1},    // edge 02
                        {0, -1, 1}});  // edge 12
  Echelon e(m);
  CHECK(e.rank() == 2);
  auto k = e.kernel_basis();
  REQUIRE(k.size() == 1);
  CHECK(k[0] == vec({{0, 1}, {1, 1}, {2, 1}}));
  // The canonical solve puts zero on the free (third) coordinate.
  auto x = e.solve(vec({{0, -1}, {1, -1}}));
  REQUIRE(x.has_value());
  CHECK(*x == vec({{0, 1}}));
}

TEST_CASE("solve detects inconsistency and canonicalizes") {
  Matrix m = from_rows(2, 1, {{1}, {1}});
  Echelon e(m);
  CHECK(!e.solve(vec({{0, 1}, {1, 2}})).has_value());
  auto x = e.solve(vec({{0, 3}, {1, 3}}));
  REQUIRE(x.has_value());
  CHECK(*x == vec({{0, 3}}));
  CHECK(e.solve(Vec{}) == Vec{});  // zero right-hand side gives zero

  // Wide system: canonical solution has zero non-pivot coordinates.
  Matrix w = from_rows(1, 3, {{2, 4, 6}});
  auto y = Echelon(w).solve(vec({{0, 4}}));
  REQUIRE(y.has_value());
  CHECK(*y == vec({{0, 2}}));
  auto kb = Echelon(w).kernel_basis();
  REQUIRE(kb.size() == 2);
  for (const Vec& v : kb) CHECK(vec_is_zero(w.apply(v)));
  CHECK(kb[0].count(1) == 1);
  CHECK(kb[0].at(1) == 1);
  CHECK(kb[1].count(2) == 1);
  CHECK(kb[1].at(2) == 1);
}

TEST_CASE("rank and kernel helpers") {
  Matrix m = from_rows(3, 3, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
  CHECK(rank(m) == 2);
  auto k = kernel_basis(m);
  REQUIRE(k.size() == 1);
  CHECK(vec_is_zero(m.apply(k[0])));
  CHECK(k[0].at(1) == 1);
}

TEST_CASE("cochain complex validation and cohomology") {
  // 0 -> Q^2 -> Q -> 0 with d = [1 1].
  CochainComplex c;
  c.d_min = 0;
  c.dims = {2, 1};
  c.diff = {from_rows(1, 2, {{1, 1}})};
  CHECK(c.valid());
  CHECK(c.dim(0) == 2);
  CHECK(c.dim(1) == 1);
  CHECK(c.dim(5) == 0);

  Cohomology h0 = cohomology_basis(c, 0);
  REQUIRE(h0.dim() == 1);
  CHECK(vec_is_zero(c.diff[0].apply(h0.reps[0])));
  Cohomology h1 = cohomology_basis(c, 1);
  CHECK(h1.dim() == 0);  // d is onto
  CHECK(cohomology_basis(c, 7).dim() == 0);

  // d compose d != 0 must be rejected.
  CochainComplex bad;
  bad.d_min = 0;
  bad.dims = {1, 1, 1};
  bad.diff = {from_rows(1, 1, {{1}}), from_rows(1, 1, {{1}})};
  std::string why;
  CHECK(!bad.valid(&why));
  CHECK(!why.empty());
}

TEST_CASE("exactness oracle") {
  Matrix b = from_rows(2, 1, {{1}, {1}});
  ExactnessOracle o(b);
  CHECK(o.is_exact(vec({{0, 2}, {1, 2}})));
  auto p = o.primitive(vec({{0, 2}, {1, 2}}));
  REQUIRE(p.has_value());
  CHECK(*p == vec({{0, 2}}));
  CHECK(!o.is_exact(vec({{0, 1}, {1, 2}})));
  CHECK(!o.primitive(vec({{0, 1}, {1, 2}})).has_value());

  CochainComplex c;
  c.d_min = -1;
  c.dims = {1, 2};
  c.diff = {from_rows(2, 1, {{1}, {1}})};
  auto q = primitive(c, 0, vec({{0, 5}, {1, 5}}));
  REQUIRE(q.has_value());
  CHECK(*q == vec({{0, 5}}));
  CHECK(!primitive(c, 0, vec({{0, 5}})).has_value());
}
