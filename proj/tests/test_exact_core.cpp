// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "graded_basis.hpp"
#include "test_support.hpp"

using namespace f4test;

TEST_CASE("poly_add examples") {
  CHECK((t(1) + (-t(1))).is_zero());
  CHECK((t(1) - t(1)).terms().empty());
  const MPoly a = MPoly::monomial(Frame::T, {1, 1, 0, 0}, 2);
  const MPoly b = MPoly::monomial(Frame::T, {1, 1, 0, 0}, 3);
  CHECK(a + b == MPoly::monomial(Frame::T, {1, 1, 0, 0}, 5));
}

TEST_CASE("poly_mul examples") {
  CHECK(t(1) * t(1) == MPoly::monomial(Frame::T, {2, 0, 0, 0}));
  CHECK((t(1) + t(3)) * (t(1) - t(3)) == t(1) * t(1) - t(3) * t(3));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5; ++i) CHECK((MPoly(Frame::T) * random_poly(rng)).is_zero());
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const MPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == MPoly(Frame::T));
    CHECK(a * cst(1) == a);
  }
}

TEST_CASE("frames never mix") {
  CHECK_THROWS_AS(t(1) + var(Frame::Tau, 1), FrameError);
  CHECK_THROWS_AS(t(1) * var(Frame::Rho, 3), FrameError);
  CHECK_THROWS_AS(t(1).substitute(Substitution::identity(Frame::Tau)), FrameError);
}

TEST_CASE("poly_derivative examples") {
  CHECK(MPoly::monomial(Frame::T, {2, 1, 0, 0}).derivative(0) == MPoly::monomial(Frame::T, {1, 1, 0, 0}, 2));
  for (int v = 0; v < 4; ++v) CHECK(cst(q(7, 3)).derivative(v).is_zero());
  CHECK(MPoly::monomial(Frame::T, {0, 0, 0, 3}).derivative(3) == MPoly::monomial(Frame::T, {0, 0, 0, 2}, 3));
}

TEST_CASE("derivative obeys the product rule") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const MPoly a = random_poly(rng), b = random_poly(rng);
    for (int v = 0; v < 4; ++v) CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
  }
}

TEST_CASE("poly_substitute examples") {
  std::mt19937_64 rng(17);
  const MPoly p = random_poly(rng);
  CHECK(p.substitute(Substitution::identity(Frame::T)) == p);

  Substitution shear = Substitution::identity(Frame::T);
  shear.images[1] = t(3) + t(1).pow(3);
  CHECK(t(3).substitute(shear) == t(3) + t(1) * t(1) * t(1));

  Substitution back = Substitution::identity(Frame::T);
  back.images[1] = t(3) - t(1).pow(3);
  for (int i = 0; i < 5; ++i) {
    const MPoly r = random_poly(rng);
    CHECK(r.substitute(shear).substitute(back) == r);
  }
  const Substitution both = compose(shear, back);
  for (int v = 0; v < 4; ++v) CHECK(*both.images[v] == MPoly::variable(Frame::T, v));
}

TEST_CASE("substitution with a missing image is rejected") {
  Substitution s{Frame::T, Frame::T, {}};
  CHECK_THROWS_AS(t(1).substitute(s), MapError);
  CHECK(cst(3).substitute(s) == cst(3));
}

TEST_CASE("poly_eval examples") {
  const std::array<Rational, 4> x{4, 0, 0, 0};
  CHECK(t(1).eval(x) == 4);
  const std::array<Rational, 4> y{2, 3, 0, 0};
  CHECK(MPoly::monomial(Frame::T, {2, 1, 0, 0}).eval(y) == 12);
  std::mt19937_64 rng(19);
  CHECK(MPoly(Frame::T).eval(random_point(rng)) == 0);
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const MPoly a = random_poly(rng), b = random_poly(rng);
    const auto x = random_point(rng);
    CHECK((a + b).eval(x) == a.eval(x) + b.eval(x));
    CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
  }
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-4") == -4);
  CHECK(parse_rational(" 7 / 9 ") == q(7, 9));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("solve_linear_exact") {
  const RatMatrix id = RatMatrix::identity(3);
  const std::vector<Rational> v{q(1, 2), -3, q(5, 7)};
  CHECK(*solve_linear_exact(id, v) == v);

  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    RatMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) = d(rng);
    if (rank(m) < 4) continue;
    std::vector<Rational> x{q(d(rng), 3), q(d(rng), 2), d(rng), q(d(rng), 5)};
    const auto b = m.multiply(x);
    CHECK(*solve_linear_exact(m, b) == x);
  }

  RatMatrix singular(2, 2);
  singular(0, 0) = 1;
  singular(0, 1) = 1;
  singular(1, 0) = 1;
  singular(1, 1) = 1;
  const std::vector<Rational> incompatible{1, 2};
  CHECK_FALSE(solve_linear_exact(singular, incompatible).has_value());
}

TEST_CASE("nullspace") {
  CHECK(nullspace(RatMatrix(3, 3)).size() == 3);
  CHECK(nullspace(RatMatrix::identity(3)).empty());

  RatMatrix m(2, 3);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(0, 2) = 3;
  m(1, 0) = 2;
  m(1, 1) = 4;
  m(1, 2) = 6;
  const auto ns = nullspace(m);
  CHECK(ns.size() == 2);
  CHECK(rank(m) == 1);
  for (const auto& v : ns) {
    const auto mv = m.multiply(v);
    for (const auto& e : mv) CHECK(e == 0);
  }
}

TEST_CASE("characteristic vectors and graded bases") {
  CHECK(GradedBasis(kMinimalFlag, 0).size() == 1);

  const GradedBasis b2(kMinimalFlag, 2);
  const std::vector<ExpVec> expect{{0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  CHECK(b2.monomials() == expect);

  const GradedBasis b3(kMinimalFlag, 3);
  CHECK(b3.size() == 9);
  for (const ExpVec& e : {ExpVec{3, 0, 0, 0}, ExpVec{1, 1, 0, 0}, ExpVec{1, 0, 1, 0}, ExpVec{0, 0, 0, 1}})
    CHECK(b3.index_of(e).has_value());

  // Nesting: P_n is a prefix of P_{n+1}.
  for (int n = 0; n < 8; ++n) {
    const GradedBasis lo(kMinimalFlag, n), hi(kMinimalFlag, n + 1);
    REQUIRE(lo.size() <= hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) CHECK(lo[i] == hi[i]);
  }

  // Grade counts against brute force.
  for (const CharVector& f : {kMinimalFlag, CharVector(3, 4, 6), CharVector(3, 5, 7)}) {
    for (int g = 0; g <= 12; ++g) {
      std::size_t brute = 0;
      for (int a = 0; a <= g; ++a)
        for (int b = 0; b <= g; ++b)
          for (int c = 0; c <= g; ++c)
            for (int d = 0; d <= g; ++d)
              if (f.grade({a, b, c, d}) == g) ++brute;
      CHECK(count_monomials_of_grade(f, g) == brute);
    }
  }

  CHECK(CharVector::parse("2,2,3") == kMinimalFlag);
  CHECK(CharVector::parse("1,2,2,3") == kMinimalFlag);
  CHECK_THROWS_AS(CharVector::parse("2,x,3"), ParseError);
  CHECK(CharVector(2, 2, 2).strictly_below(kMinimalFlag));
  CHECK_FALSE(kMinimalFlag.strictly_below(kMinimalFlag));
}
