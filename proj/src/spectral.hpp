// SPDX-License-Identifier: Apache-2.0
//
// Spectra, closed-form energies and eigenfunctions on flag spaces.

#pragma once

#include <optional>
#include <vector>

#include "diffop.hpp"
#include "flags.hpp"
#include "models_f4.hpp"

namespace f4solv {

struct ClosureError : Error {
  using Error::Error;
};

/// Exponents (p1, p3, p4, p6) of the leading monomial.
using QuantumNumbers = ExpVec;

/// p1 + 3 p3 + 4 p4 + 6 p6.
inline int weighted_level(const QuantumNumbers& p) { return p[0] + 3 * p[1] + 4 * p[2] + 6 * p[3]; }

Rational closed_form_energy_rational(const QuantumNumbers& p, const ModelParams& params);
Rational closed_form_energy_trig(const QuantumNumbers& p, const ModelParams& params);
/// Dispatches on params.model.
Rational closed_form_energy(const QuantumNumbers& p, const ModelParams& params);

/// Number of quadruples with p1 + 3 p3 + 4 p4 + 6 p6 = n.
std::size_t degeneracy_count(int n);

struct SpectralLine {
  /// Absent for eigenvalues of a non-triangular diagonal block.
  std::optional<QuantumNumbers> label;
  /// Flag grade of the block the eigenvalue belongs to.
  int grade = 0;
  Rational eigenvalue;
  std::optional<MPoly> eigenfunction;
};

/// A diagonal block whose characteristic polynomial has an irreducible
/// factor of degree > 1 over the rationals.
struct IrreducibleBlock {
  int grade = 0;
  std::vector<ExpVec> monomials;
  RatMatrix block;
  /// Leftover factor after removing rational roots, constant term first.
  std::vector<Rational> residual_charpoly;
};

struct Spectrum {
  Frame frame = Frame::T;
  bool strict = false;
  std::vector<SpectralLine> lines;
  std::vector<IrreducibleBlock> irreducible;
};

/// Eigenvalues on P_n: the diagonal in a triangular order when one exists,
/// otherwise the rational roots of each grade block. Throws ClosureError if
/// the flag is not preserved.
Spectrum spectrum_from_matrix(const SecondOrderOp& op, const CharVector& f, int n);

/// Characteristic polynomial det(x I - m), constant term first.
std::vector<Rational> characteristic_polynomial(const RatMatrix& m);

/// Rational roots of an exact polynomial with multiplicity (constant term
/// first); `rest` receives the cofactor without rational roots.
std::vector<Rational> rational_roots(std::vector<Rational> poly, std::vector<Rational>* rest = nullptr);

/// Rational eigenvalues of m with algebraic multiplicity; `rest` as above.
std::vector<Rational> rational_eigenvalues(const RatMatrix& m, std::vector<Rational>* rest = nullptr);

struct DefectiveBlock {
  Rational eigenvalue;
  std::size_t algebraic = 0;
  std::size_t geometric = 0;
};

struct Eigensystem {
  Spectrum spectrum;
  /// One entry per eigenvector; labels are kept for nondegenerate triangular
  /// lines, degenerate eigenspaces are returned as whole nullspaces.
  std::vector<SpectralLine> pairs;
  std::vector<DefectiveBlock> defective;
  /// Every pair satisfied op(psi) == lambda psi exactly.
  bool residuals_zero = true;
};

Eigensystem eigenfunctions(const SecondOrderOp& op, const CharVector& f, int n);

/// closed form = scale * eigenvalue + offset.
struct AffineFit {
  Rational scale;
  Rational offset;
};

/// Fits the relation on the ground line and the first line with a
/// different eigenvalue; nullopt if fewer than two distinct labeled lines.
std::optional<AffineFit> fit_affine(const std::vector<SpectralLine>& lines, const ModelParams& params);

}  // namespace f4solv
