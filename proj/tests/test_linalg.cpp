#include "spg/linalg.hpp"

#include <doctest.h>

using namespace spg;

TEST_CASE("rational text forms") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-3")) == "-3");
  CHECK(to_string(parse_rational("-2/4")) == "-1/2");
  CHECK_THROWS(parse_rational("2/-4"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("linear solve") {
  RationalMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = Rational(-1, 2);
  a(1, 0) = Rational(-1, 2);
  a(1, 1) = 1;
  // v = r + 1/2 P v on a two-node cycle with rewards (1, 0).
  const auto x = solve_linear(a, {1, 0});
  REQUIRE(x);
  CHECK((*x)[0] == Rational(4, 3));
  CHECK((*x)[1] == Rational(2, 3));
  RationalMatrix singular(2, 2);
  singular(0, 0) = singular(0, 1) = singular(1, 0) = singular(1, 1) = 1;
  CHECK_FALSE(solve_linear(singular, {1, 2}));
}

TEST_CASE("simplex") {
  // min -x - y with x + 2y + s1 = 4, 3x + y + s2 = 6: optimum at (8/5, 6/5).
  RationalMatrix a(2, 4);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(0, 2) = 1;
  a(1, 0) = 3;
  a(1, 1) = 1;
  a(1, 3) = 1;
  const auto r = linear_minimum(a, {4, 6}, {-1, -1, 0, 0});
  REQUIRE(r.status == LinearProgramResult::Status::Optimal);
  CHECK(r.value == Rational(-14, 5));
  CHECK(r.x[0] == Rational(8, 5));

  RationalMatrix b(1, 2);
  b(0, 0) = 1;
  b(0, 1) = -1;
  CHECK(linear_minimum(b, {1}, {0, -1}).status == LinearProgramResult::Status::Unbounded);
  RationalMatrix c(2, 1);
  c(0, 0) = 1;
  c(1, 0) = 1;
  CHECK(linear_minimum(c, {1, 2}, {0}).status == LinearProgramResult::Status::Infeasible);
  // Redundant rows and negative right-hand sides.
  RationalMatrix d(2, 2);
  d(0, 0) = d(0, 1) = -1;
  d(1, 0) = d(1, 1) = 2;
  const auto rd = linear_minimum(d, {-1, 2}, {2, 1});
  REQUIRE(rd.status == LinearProgramResult::Status::Optimal);
  CHECK(rd.value == 1);
}
