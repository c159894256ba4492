// SPDX-License-Identifier: Apache-2.0

#include "diffop.hpp"
#include "doctest.h"
#include "models_f4.hpp"
#include "test_support.hpp"

using namespace f4test;

namespace {

const ModelParams kRat = ModelParams::rational(q(1, 3), q(1, 5), q(3, 2));
const ModelParams kTrig = ModelParams::trig(q(1, 3), q(1, 5), q(2, 3));

}  // namespace

TEST_CASE("rational operator on low monomials") {
  const SecondOrderOp h = build_rational_operator(kRat);
  const Rational nu = kRat.nu, mu = kRat.mu, om = *kRat.omega;
  CHECK(op_apply(h, cst(1)).is_zero());
  CHECK(op_apply(h, t(1)) == 2 * om * t(1) + cst(24 * (nu + mu + q(1, 6))));
  CHECK(op_apply(h, t(3)) == 6 * om * t(3) - 2 * (nu + mu / 2 + q(1, 4)) * t(1) * t(1));
}

TEST_CASE("mixed entries act twice") {
  SecondOrderOp op(Frame::T);
  op.set_a(0, 1, cst(1));
  CHECK(op_apply(op, t(1) * t(3)) == cst(2));
  op.set_a(0, 0, cst(1));
  CHECK(op_apply(op, t(1) * t(1)) == cst(2));
  CHECK(op.a(1, 0) == op.a(0, 1));
}

TEST_CASE("op_apply is linear") {
  const SecondOrderOp h = build_rational_operator(kRat);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const MPoly a = random_poly(rng), b = random_poly(rng);
    const Rational c = q(i - 4, 3);
    CHECK(op_apply(h, c * a + b) == c * op_apply(h, a) + op_apply(h, b));
  }
}

TEST_CASE("op_apply agrees with a hand-expanded operator") {
  // Independent expansion: sum over the full symmetric table.
  const SecondOrderOp h = build_rational_operator(kRat);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 5; ++i) {
    const MPoly p = random_poly(rng, Frame::T, 6, 3);
    MPoly expect = h.c() * p;
    for (int a = 0; a < 4; ++a) {
      expect += h.b(a) * p.derivative(a);
      for (int b = 0; b < 4; ++b) expect += h.a(a, b) * p.derivative(a).derivative(b);
    }
    CHECK(op_apply(h, p) == expect);
  }
}

TEST_CASE("change of variables") {
  const SecondOrderOp h = build_rational_operator(kRat);
  CHECK(op_change_variables(h, Substitution::identity(Frame::T), Substitution::identity(Frame::T)) == h);

  AmbiguityParams ap;
  ap.a = 1;
  ap.b2 = q(-1, 2);
  ap.c3 = 2;
  const ShearPair s = ambiguity_map(ap);
  const SecondOrderOp hs = op_change_variables(h, s);

  // Conjugation identity: h'(p) = h(p o fwd) o inv.
  std::mt19937_64 rng(41);
  for (int i = 0; i < 5; ++i) {
    const MPoly p = random_poly(rng, Frame::T, 5, 2);
    CHECK(op_apply(hs, p) == op_apply(h, p.substitute(s.fwd)).substitute(s.inv));
  }

  // Functoriality: the inverse map undoes the change.
  CHECK(op_change_variables(hs, s.inv, s.fwd) == h);

  Substitution bad = Substitution::identity(Frame::T);
  bad.images[1] = t(3) + t(1);
  CHECK_THROWS_AS(op_change_variables(h, s.fwd, bad), MapError);
}

TEST_CASE("invert_shear") {
  Substitution fwd = Substitution::identity(Frame::T);
  fwd.images[1] = t(3) + q(2, 3) * t(1).pow(3);
  fwd.images[3] = t(6) - t(1) * t(1) * t(4) + q(1, 5) * t(3) * t(3);
  const Substitution inv = invert_shear(fwd);
  const Substitution round = compose(fwd, inv);
  for (int v = 0; v < 4; ++v) CHECK(*round.images[v] == MPoly::variable(Frame::T, v));

  Substitution not_shear = Substitution::identity(Frame::T);
  not_shear.images[0] = t(1) * t(1);
  CHECK_THROWS_AS(invert_shear(not_shear), MapError);
}

TEST_CASE("op_matrix") {
  const SecondOrderOp h = build_rational_operator(kRat);
  const OperatorMatrix m = op_matrix(h, GradedBasis(kMinimalFlag, 1));
  CHECK(m.closed);
  REQUIRE(m.matrix.rows() == 2);
  REQUIRE(m.matrix.cols() == 2);
  CHECK(m.matrix(0, 0) == 0);
  CHECK(m.matrix(0, 1) == 24 * (kRat.nu + kRat.mu + q(1, 6)));
  CHECK(m.matrix(1, 0) == 0);
  CHECK(m.matrix(1, 1) == 2 * *kRat.omega);

  const OperatorMatrix z = op_matrix(SecondOrderOp(Frame::T), GradedBasis(kMinimalFlag, 5));
  CHECK(z.closed);
  CHECK(z.matrix.is_zero());

  // Columns reproduce op images.
  const GradedBasis b(kMinimalFlag, 6);
  const OperatorMatrix m6 = op_matrix(h, b);
  CHECK(m6.closed);
  for (std::size_t j = 0; j < b.size(); ++j) {
    MPoly col(Frame::T);
    for (std::size_t i = 0; i < b.size(); ++i) col.add_term(b[i], m6.matrix(i, j));
    CHECK(col == op_apply(h, MPoly::monomial(Frame::T, b[j])));
  }
}

TEST_CASE("trig operator in tau frame is closed but not triangular at n=3") {
  const SecondOrderOp h = build_trig_operator(kTrig);
  const GradedBasis b(kMinimalFlag, 3);
  const OperatorMatrix m = op_matrix(h, b);
  CHECK(m.closed);
  bool below = false;
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = j + 1; i < b.size(); ++i)
      if (m.matrix(i, j) != 0) below = true;
  CHECK(below);
}

TEST_CASE("rational closure through n=8") {
  const SecondOrderOp h = build_rational_operator(kRat);
  for (int n = 0; n <= 8; ++n) CHECK(op_matrix(h, GradedBasis(kMinimalFlag, n)).closed);
}

TEST_CASE("non-closure reports a witness") {
  SecondOrderOp op(Frame::T);
  op.set_b(0, t(1) * t(1));
  const OperatorMatrix m = op_matrix(op, GradedBasis(kMinimalFlag, 2));
  CHECK_FALSE(m.closed);
  REQUIRE(m.witness);
  CHECK(m.witness->monomial == ExpVec{2, 0, 0, 0});
  CHECK(m.witness->offending == ExpVec{3, 0, 0, 0});
  CHECK(m.witness->coefficient == 2);
}
