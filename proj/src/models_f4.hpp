// SPDX-License-Identifier: Apache-2.0
//
// The F4 rational and trigonometric models in algebraic form, their
// invariant variables, ground-state log-gradients and the Cartesian oracle
// that checks the algebraic operators against the gauge-rotated Laplacian.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "diffop.hpp"
#include "exact_core.hpp"
#include "hiprec.hpp"

namespace f4solv {

struct PoleError : Error {
  using Error::Error;
};
struct CalibrationError : Error {
  using Error::Error;
};
struct DerivationError : Error {
  using Error::Error;
};
struct ReductionError : Error {
  using Error::Error;
};

enum class Model : std::uint8_t { Rational, Trig };

std::string_view model_name(Model m);
Model parse_model(std::string_view name);

/// Exact parameters. Couplings follow each model's convention:
/// rational g = nu(nu-1), g1 = mu(mu-1)/2; trig g = nu(nu-1)/2, g1 = mu(mu-1).
struct ModelParams {
  Model model = Model::Rational;
  Rational nu;
  Rational mu;
  std::optional<Rational> omega;
  std::optional<Rational> beta2;

  static ModelParams rational(Rational nu, Rational mu, Rational omega);
  static ModelParams trig(Rational nu, Rational mu, Rational beta2);

  Rational g() const;
  Rational g1() const;
  /// Validity-window violations (g <= -1/4, g1 <= -1/8); never fatal.
  std::vector<std::string> warnings() const;
  /// Throws ParseError if the model's required parameter is missing.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Invariant variables

/// Elementary symmetric polynomials sigma_1..sigma_4 of y1..y4 (frame Y).
std::array<MPoly, 4> elementary_symmetric_y();

/// t1, t3, t4, t6 as polynomials in y_k = x_k^2.
Substitution rational_invariants_y();
/// tau1..tau6 as polynomials in y_k = sin^2(beta x_k)/beta^2.
Substitution trig_invariants_y(const Rational& beta2);

std::array<Rational, 4> variables_rational(std::span<const Rational, 4> x);
std::array<Real, 4> variables_trig(const std::array<Real, 4>& x, const Real& beta);

// ---------------------------------------------------------------------------
// Operators and maps

/// The coefficient table as given; A_66 is left zero.
SecondOrderOp printed_rational_operator(const ModelParams& params);
/// Coefficient table completed with the derived A_66.
SecondOrderOp build_rational_operator(const ModelParams& params);
SecondOrderOp build_trig_operator(const ModelParams& params);

/// The beta-singular shear that triangularizes the trig operator;
/// fwd: Rho -> Tau images, inv: Tau -> Rho images.
ShearPair build_rho_map(const Rational& beta2);

struct AmbiguityParams {
  Rational a, b1, b2, c1, c2, c3, c4;
  bool is_zero() const;
  std::string to_string() const;
};

/// t3 -> t3 + A t1^3, t4 -> t4 + B1 t1^4 + B2 t1 t3,
/// t6 -> t6 + C1 t1^6 + C2 t1^3 t3 + C3 t1^2 t4 + C4 t3^2 (frame T -> T).
ShearPair ambiguity_map(const AmbiguityParams& p);

/// Native-frame operator for the model (t or tau).
SecondOrderOp build_model_operator(const ModelParams& params);
/// Trig operator rewritten in the rho frame.
SecondOrderOp build_rho_operator(const ModelParams& params);

// ---------------------------------------------------------------------------
// Ground state

/// d_k log Psi0 for the rational model. The Gaussian enters as
/// -gaussian_sign * omega * x_k. Throws PoleError on a singular hyperplane.
std::array<Rational, 4> grad_log_ground_state_rational(const ModelParams& params,
                                                       std::span<const Rational, 4> x,
                                                       int gaussian_sign = 1);

std::array<Real, 4> grad_log_ground_state_trig(const ModelParams& params,
                                               const std::array<Real, 4>& x, const Real& beta);

/// log Psi0 (up to a constant) in floating point, for finite differences.
Real log_ground_state_rational(const ModelParams& params, const std::array<Real, 4>& x,
                               int gaussian_sign = 1);
Real log_ground_state_trig(const ModelParams& params, const std::array<Real, 4>& x,
                           const Real& beta);

// ---------------------------------------------------------------------------
// Oracle

/// oracle(P) = scale * [Lap(P o map) + 2 grad log Psi0 . grad(P o map)] + offset * P.
struct Calibration {
  Rational scale;
  Rational offset;
  int gaussian_sign = 1;
};

/// Composite P(map(y)) and its y-derivatives, reusable across points.
class Pullback {
 public:
  Pullback(const MPoly& p, const Substitution& to_y);

  Rational raw_rational(const ModelParams& params, std::span<const Rational, 4> x,
                        int gaussian_sign) const;
  Real raw_trig(const ModelParams& params, const std::array<Real, 4>& x, const Real& beta) const;
  const MPoly& composite() const { return composite_; }

 private:
  MPoly composite_;
  std::array<MPoly, 4> d1_;
  std::array<MPoly, 4> d2_;
};

Rational cartesian_oracle_rational(const ModelParams& params, const Calibration& cal,
                                   const MPoly& p, std::span<const Rational, 4> x);
Real cartesian_oracle_trig(const ModelParams& params, const Calibration& cal, const MPoly& p,
                           const std::array<Real, 4>& x);

/// Seeded source of small-height rational points and alcove points.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  Rational small_rational(int max_num, int max_den, bool allow_negative = true);
  /// Rejects points on any singular hyperplane of the rational ground state.
  std::array<Rational, 4> rational_point();
  /// Coordinates in (0, scale].
  std::array<Rational, 4> positive_point(const Rational& scale);
  /// Point in (0, pi/(4 beta))^4 away from every trig singular hyperplane.
  std::array<Real, 4> alcove_point(const Real& beta);

 private:
  std::uint64_t next(std::uint64_t bound);
  std::mt19937_64 rng_;
};

/// True iff x lies on no singular hyperplane of the rational ground state.
bool rational_point_regular(std::span<const Rational, 4> x);

/// Fits (scale, offset, gaussian sign) on P = 1, t1 and t1^2 (tau frame for
/// trig) at three points and confirms the fit at ten more. The scale must lie in
/// {+-1, +-2, +-1/2}.
Calibration calibrate_normalization(Model model, const ModelParams& params,
                                    std::uint64_t seed = 0);

/// Expresses a W(F4)-invariant polynomial in y = x^2 in the t frame by an
/// exact fit over candidate monomials of x-degree <= x_degree_bound, then
/// checks ten holdout points.
MPoly invariant_reduce(const MPoly& expr_y, int x_degree_bound, PointSampler& sampler);

/// Both routes for the missing rational A_66, which must agree exactly.
struct A66Derivation {
  MPoly reduction_route;
  MPoly trig_limit_route;
  Rational rational_scale;
  Rational trig_scale;
};
A66Derivation derive_missing_A66_routes(const ModelParams& params);
MPoly derive_missing_A66(const ModelParams& params);

}  // namespace f4solv
