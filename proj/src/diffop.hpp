// SPDX-License-Identifier: Apache-2.0
//
// Second-order differential operators with polynomial coefficients.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "exact_core.hpp"
#include "graded_basis.hpp"

namespace f4solv {

/// sum_{a,b} A_ab d_a d_b + sum_a B_a d_a + C over the full symmetric table.
/// Only a <= b is stored, so a mixed entry A_ab (a < b) acts as
/// 2 A_ab d_a d_b and a diagonal entry A_aa as A_aa d_a^2.
class SecondOrderOp {
 public:
  explicit SecondOrderOp(Frame frame = Frame::T);

  Frame frame() const { return frame_; }

  /// Symmetric access; indices are variable indices 0..3.
  const MPoly& a(int i, int j) const { return a_[slot(i, j)]; }
  const MPoly& b(int i) const { return b_.at(i); }
  const MPoly& c() const { return c_; }

  void set_a(int i, int j, MPoly p);
  void set_b(int i, MPoly p);
  void set_c(MPoly p);

  /// Label based access, labels in {1,3,4,6}.
  const MPoly& a_label(int la, int lb) const { return a(variable_index(la), variable_index(lb)); }
  const MPoly& b_label(int la) const { return b(variable_index(la)); }

  friend bool operator==(const SecondOrderOp&, const SecondOrderOp&) = default;

 private:
  static int slot(int i, int j);
  void check_frame(const MPoly& p) const;

  Frame frame_;
  std::array<MPoly, 10> a_;
  std::array<MPoly, 4> b_;
  MPoly c_;
};

MPoly op_apply(const SecondOrderOp& op, const MPoly& p);

/// A triangular polynomial change of variables: `fwd` writes the new
/// variables in the old frame, `inv` writes the old variables in the new one.
struct ShearPair {
  Substitution fwd;
  Substitution inv;
};

/// Inverts a unitriangular shear phi_c = v_c + f_c(v_earlier) by back
/// substitution. Throws MapError if `fwd` is not of that shape.
Substitution invert_shear(const Substitution& fwd);

/// Rewrites the operator in the frame of `fwd.source` by the chain rule.
/// fwd o inv must be the identity (checked exactly, MapError otherwise).
SecondOrderOp op_change_variables(const SecondOrderOp& op, const Substitution& fwd,
                                  const Substitution& inv);
inline SecondOrderOp op_change_variables(const SecondOrderOp& op, const ShearPair& s) {
  return op_change_variables(op, s.fwd, s.inv);
}

/// A basis monomial whose image leaves the spanned space.
struct ClosureWitness {
  ExpVec monomial;
  ExpVec offending;
  Rational coefficient;
};

struct OperatorMatrix {
  RatMatrix matrix;
  bool closed = true;
  /// Lowest-grade failure when not closed.
  std::optional<ClosureWitness> witness;
};

/// Column j holds the coordinates of op(basis[j]).
OperatorMatrix op_matrix(const SecondOrderOp& op, const GradedBasis& basis);

}  // namespace f4solv
