// SPDX-License-Identifier: Apache-2.0
//
// Extended-precision reals for the trigonometric float path.

#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "exact_core.hpp"

namespace f4solv {

using Real = boost::multiprecision::mpfr_float;

/// Working precision in bits: F4SOLV_PRECISION if set (clamped to
/// [64, 4096]), otherwise 160.
unsigned working_precision_bits();

/// Applies the working precision to newly created Reals on this thread.
void ensure_precision();

Real to_real(const Rational& q);
Real real_pi();

}  // namespace f4solv
