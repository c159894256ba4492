// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the unit tests.

#pragma once

#include <random>

#include "exact_core.hpp"

namespace f4test {

using namespace f4solv;

inline MPoly var(Frame f, int label) { return MPoly::variable(f, variable_index(label)); }
inline MPoly t(int label) { return var(Frame::T, label); }
inline MPoly cst(const Rational& c, Frame f = Frame::T) { return MPoly::constant(f, c); }
inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Random polynomial with small rational coefficients and exponents <= max_exp.
inline MPoly random_poly(std::mt19937_64& rng, Frame f = Frame::T, int terms = 5, int max_exp = 2) {
  std::uniform_int_distribution<int> ex(0, max_exp), num(-9, 9), den(1, 5);
  MPoly p(f);
  for (int i = 0; i < terms; ++i) p.add_term({ex(rng), ex(rng), ex(rng), ex(rng)}, q(num(rng), den(rng)));
  return p;
}

inline std::array<Rational, 4> random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  return {q(num(rng), den(rng)), q(num(rng), den(rng)), q(num(rng), den(rng)), q(num(rng), den(rng))};
}

}  // namespace f4test
