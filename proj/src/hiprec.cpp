// SPDX-License-Identifier: Apache-2.0

#include "hiprec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/math/constants/constants.hpp>

namespace f4solv {

unsigned working_precision_bits() {
  if (const char* env = std::getenv("F4SOLV_PRECISION")) {
    try {
      long bits = std::stol(env);
      return static_cast<unsigned>(std::clamp(bits, 64L, 4096L));
    } catch (const std::exception&) {
    }
  }
  return 160;
}

void ensure_precision() {
  const unsigned digits10 =
      static_cast<unsigned>(std::ceil(working_precision_bits() * 0.30102999566398120));
  if (Real::default_precision() != digits10) Real::default_precision(digits10);
}

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real real_pi() { return boost::math::constants::pi<Real>(); }

}  // namespace f4solv
