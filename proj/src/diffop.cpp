// SPDX-License-Identifier: Apache-2.0

#include "diffop.hpp"

#include <string>

namespace f4solv {

SecondOrderOp::SecondOrderOp(Frame frame) : frame_(frame), c_(frame) {
  for (auto& p : a_) p = MPoly(frame);
  for (auto& p : b_) p = MPoly(frame);
}

int SecondOrderOp::slot(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j > 3) throw MapError("operator index out of range");
  // (0,0)..(0,3) -> 0..3, (1,1)..(1,3) -> 4..6, (2,2),(2,3) -> 7,8, (3,3) -> 9
  static constexpr int offset[4] = {0, 4, 7, 9};
  return offset[i] + (j - i);
}

void SecondOrderOp::check_frame(const MPoly& p) const {
  if (p.frame() != frame_)
    throw FrameError("operator coefficient in frame " + std::string(frame_name(p.frame())) +
                     ", operator is in frame " + std::string(frame_name(frame_)));
}

void SecondOrderOp::set_a(int i, int j, MPoly p) {
  check_frame(p);
  a_[slot(i, j)] = std::move(p);
}

void SecondOrderOp::set_b(int i, MPoly p) {
  check_frame(p);
  b_.at(i) = std::move(p);
}

void SecondOrderOp::set_c(MPoly p) {
  check_frame(p);
  c_ = std::move(p);
}

MPoly op_apply(const SecondOrderOp& op, const MPoly& p) {
  if (p.frame() != op.frame())
    throw FrameError("op_apply: polynomial frame " + std::string(frame_name(p.frame())) +
                     " does not match operator frame " + std::string(frame_name(op.frame())));
  MPoly out(op.frame());
  std::array<MPoly, 4> d1;
  for (int i = 0; i < 4; ++i) d1[i] = p.derivative(i);
  for (int i = 0; i < 4; ++i) {
    if (d1[i].is_zero()) continue;
    for (int j = i; j < 4; ++j) {
      const MPoly& coef = op.a(i, j);
      if (coef.is_zero()) continue;
      MPoly d2 = d1[i].derivative(j);
      if (d2.is_zero()) continue;
      out += (i == j ? coef : coef * Rational(2)) * d2;
    }
    if (!op.b(i).is_zero()) out += op.b(i) * d1[i];
  }
  if (!op.c().is_zero()) out += op.c() * p;
  return out;
}

Substitution invert_shear(const Substitution& fwd) {
  Substitution inv{fwd.target, fwd.source, {}};
  for (int v = 0; v < 4; ++v) {
    if (!fwd.images[v]) throw MapError("invert_shear: missing image");
    // phi_v = var_v + tail(var_0..var_{v-1})
    MPoly tail = *fwd.images[v] - MPoly::variable(fwd.target, v);
    for (const auto& [e, c] : tail.terms())
      for (int k = v; k < 4; ++k)
        if (e[k] != 0) throw MapError("invert_shear: map is not unitriangular");
    // old_v = new_v - tail(old_0..old_{v-1}) with earlier old vars already inverted.
    Substitution partial{fwd.target, fwd.source, {}};
    for (int k = 0; k < v; ++k) partial.images[k] = inv.images[k];
    inv.images[v] = MPoly::variable(fwd.source, v) - tail.substitute(partial);
  }
  return inv;
}

SecondOrderOp op_change_variables(const SecondOrderOp& op, const Substitution& fwd,
                                  const Substitution& inv) {
  const Frame old_frame = op.frame();
  const Frame new_frame = fwd.source;
  if (fwd.target != old_frame || inv.source != old_frame || inv.target != new_frame)
    throw MapError("op_change_variables: substitution frames do not match the operator");
  for (int v = 0; v < 4; ++v)
    if (!fwd.images[v] || !inv.images[v]) throw MapError("op_change_variables: incomplete map");
  const Substitution round_trip = compose(fwd, inv);
  for (int v = 0; v < 4; ++v)
    if (*round_trip.images[v] != MPoly::variable(new_frame, v))
      throw MapError("op_change_variables: fwd o inv is not the identity");

  // Jacobian and Hessians of the forward map, in the old variables.
  std::array<std::array<MPoly, 4>, 4> jac;     // jac[c][a] = d phi_c / d old_a
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a) jac[c][a] = fwd.images[c]->derivative(a);

  auto full_a = [&](int i, int j) { return op.a(i, j); };

  SecondOrderOp out(new_frame);
  for (int c = 0; c < 4; ++c) {
    for (int d = c; d < 4; ++d) {
      MPoly acc(old_frame);
      for (int a = 0; a < 4; ++a) {
        if (jac[c][a].is_zero()) continue;
        for (int b = 0; b < 4; ++b) {
          if (jac[d][b].is_zero()) continue;
          const MPoly& g = full_a(a, b);
          if (g.is_zero()) continue;
          acc += g * jac[c][a] * jac[d][b];
        }
      }
      out.set_a(c, d, acc.substitute(inv));
    }
    MPoly first(old_frame);
    for (int a = 0; a < 4; ++a) {
      if (jac[c][a].is_zero()) continue;
      first += op.b(a) * jac[c][a];
      for (int b = 0; b < 4; ++b) {
        MPoly hess = jac[c][a].derivative(b);
        if (hess.is_zero() || full_a(a, b).is_zero()) continue;
        first += full_a(a, b) * hess;
      }
    }
    out.set_b(c, first.substitute(inv));
  }
  out.set_c(op.c().substitute(inv));
  return out;
}

OperatorMatrix op_matrix(const SecondOrderOp& op, const GradedBasis& basis) {
  const std::size_t n = basis.size();
  OperatorMatrix out{RatMatrix(n, n), true, std::nullopt};
  for (std::size_t j = 0; j < n; ++j) {
    const MPoly image = op_apply(op, MPoly::monomial(op.frame(), basis[j]));
    for (const auto& [e, c] : image.terms()) {
      if (auto i = basis.index_of(e)) {
        out.matrix(*i, j) = c;
      } else if (out.closed) {
        // Basis order is grade ascending, so the first failure has the lowest grade.
        out.closed = false;
        out.witness = ClosureWitness{basis[j], e, c};
      }
    }
  }
  return out;
}

}  // namespace f4solv
