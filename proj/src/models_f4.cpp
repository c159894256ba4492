// SPDX-License-Identifier: Apache-2.0

#include "models_f4.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace f4solv {

namespace {

struct Term {
  Rational coeff;
  ExpVec exps;
};

MPoly poly(Frame f, std::initializer_list<Term> terms) {
  MPoly p(f);
  for (const auto& t : terms) p.add_term(t.exps, t.coeff);
  return p;
}

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exponent shorthands over (p1, p3, p4, p6).
constexpr ExpVec k1{0, 0, 0, 0};
constexpr ExpVec v1{1, 0, 0, 0};
constexpr ExpVec v3{0, 1, 0, 0};
constexpr ExpVec v4{0, 0, 1, 0};
constexpr ExpVec v6{0, 0, 0, 1};

/// A linear form c.x whose zero set is a singular hyperplane.
struct RootFactor {
  std::array<int, 4> c;
  bool long_root;
  bool coordinate;  // short root e_i
};

const std::vector<RootFactor>& root_factors() {
  static const std::vector<RootFactor> factors = [] {
    std::vector<RootFactor> out;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::array<int, 4> plus{0, 0, 0, 0}, minus{0, 0, 0, 0};
        plus[i] = minus[i] = 1;
        plus[j] = 1;
        minus[j] = -1;
        out.push_back({plus, true, false});
        out.push_back({minus, true, false});
      }
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> e{0, 0, 0, 0};
      e[i] = 1;
      out.push_back({e, false, true});
    }
    for (int s2 : {1, -1})
      for (int s3 : {1, -1})
        for (int s4 : {1, -1}) out.push_back({{1, s2, s3, s4}, false, false});
    return out;
  }();
  return factors;
}

std::string factor_name(const RootFactor& f) {
  std::string s;
  for (int k = 0; k < 4; ++k) {
    if (f.c[k] == 0) continue;
    if (!s.empty() || f.c[k] < 0) s += f.c[k] > 0 ? "+" : "-";
    s += "x" + std::to_string(k + 1);
  }
  return s;
}

template <class T>
T linear_form(const RootFactor& f, const std::array<T, 4>& x) {
  T v = T(0);
  for (int k = 0; k < 4; ++k)
    if (f.c[k] != 0) v += f.c[k] > 0 ? x[k] : T(-x[k]);
  return v;
}

Rational linear_form_q(const RootFactor& f, std::span<const Rational, 4> x) {
  Rational v = 0;
  for (int k = 0; k < 4; ++k) v += f.c[k] * x[k];
  return v;
}

void require_omega(const ModelParams& p) {
  if (!p.omega) throw ParseError("rational model needs omega");
}

void require_beta2(const ModelParams& p) {
  if (!p.beta2) throw ParseError("trigonometric model needs beta2");
}

}  // namespace

std::string_view model_name(Model m) { return m == Model::Rational ? "rational" : "trig"; }

Model parse_model(std::string_view name) {
  if (name == "rational") return Model::Rational;
  if (name == "trig" || name == "trigonometric") return Model::Trig;
  throw ParseError("unknown model '" + std::string(name) + "'");
}

ModelParams ModelParams::rational(Rational nu, Rational mu, Rational omega) {
  return {Model::Rational, std::move(nu), std::move(mu), std::move(omega), std::nullopt};
}

ModelParams ModelParams::trig(Rational nu, Rational mu, Rational beta2) {
  return {Model::Trig, std::move(nu), std::move(mu), std::nullopt, std::move(beta2)};
}

Rational ModelParams::g() const {
  Rational v = nu * (nu - 1);
  return model == Model::Rational ? v : Rational(v / 2);
}

Rational ModelParams::g1() const {
  Rational v = mu * (mu - 1);
  return model == Model::Rational ? Rational(v / 2) : v;
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (!(g() > q(-1, 4))) out.push_back("g = " + to_string(g()) + " is outside g > -1/4");
  if (!(g1() > q(-1, 8))) out.push_back("g1 = " + to_string(g1()) + " is outside g1 > -1/8");
  return out;
}

void ModelParams::validate() const {
  if (model == Model::Rational) require_omega(*this);
  else require_beta2(*this);
}

// ---------------------------------------------------------------------------

std::array<MPoly, 4> elementary_symmetric_y() {
  std::array<MPoly, 4> s{MPoly(Frame::Y), MPoly(Frame::Y), MPoly(Frame::Y), MPoly(Frame::Y)};
  for (unsigned mask = 1; mask < 16; ++mask) {
    ExpVec e{0, 0, 0, 0};
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) {
        e[i] = 1;
        ++k;
      }
    s[k - 1].add_term(e, 1);
  }
  return s;
}

Substitution rational_invariants_y() {
  const auto [s1, s2, s3, s4] = elementary_symmetric_y();
  Substitution out{Frame::T, Frame::Y, {}};
  out.images[0] = s1;
  out.images[1] = s3 - q(1, 6) * s1 * s2;
  out.images[2] = s4 - q(1, 4) * s1 * s3 + q(1, 12) * s2 * s2;
  out.images[3] = s4 * s2 - q(1, 36) * s2.pow(3) - q(3, 8) * s3 * s3 + q(1, 8) * s1 * s2 * s3 -
                  q(3, 8) * s1 * s1 * s4;
  return out;
}

Substitution trig_invariants_y(const Rational& b) {
  const auto [s1, s2, s3, s4] = elementary_symmetric_y();
  Substitution out{Frame::Tau, Frame::Y, {}};
  out.images[0] = s1 - Rational(2 * b / 3) * s2;
  out.images[1] = s3 - q(1, 6) * s1 * s2 - Rational(2 * b) * (s4 - q(1, 36) * s2 * s2);
  out.images[2] = s4 - q(1, 4) * s1 * s3 + q(1, 12) * s2 * s2;
  out.images[3] = s4 * s2 - q(1, 36) * s2.pow(3) - q(3, 8) * s3 * s3 + q(1, 8) * s1 * s2 * s3 -
                  q(3, 8) * s1 * s1 * s4;
  return out;
}

std::array<Rational, 4> variables_rational(std::span<const Rational, 4> x) {
  static const Substitution map = rational_invariants_y();
  const std::array<Rational, 4> y{x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]};
  std::array<Rational, 4> out;
  for (int v = 0; v < 4; ++v) out[v] = map.images[v]->eval(y);
  return out;
}

std::array<Real, 4> variables_trig(const std::array<Real, 4>& x, const Real& beta) {
  ensure_precision();
  const Real b2 = beta * beta;
  std::array<Real, 4> y;
  for (int k = 0; k < 4; ++k) {
    Real s = sin(beta * x[k]);
    y[k] = s * s / b2;
  }
  const Real s1 = y[0] + y[1] + y[2] + y[3];
  const Real s2 = y[0] * y[1] + y[0] * y[2] + y[0] * y[3] + y[1] * y[2] + y[1] * y[3] + y[2] * y[3];
  const Real s3 = y[0] * y[1] * y[2] + y[0] * y[1] * y[3] + y[0] * y[2] * y[3] + y[1] * y[2] * y[3];
  const Real s4 = y[0] * y[1] * y[2] * y[3];
  std::array<Real, 4> tau;
  tau[0] = s1 - 2 * b2 / 3 * s2;
  tau[1] = s3 - s1 * s2 / 6 - 2 * b2 * (s4 - s2 * s2 / 36);
  tau[2] = s4 - s1 * s3 / 4 + s2 * s2 / 12;
  tau[3] = s4 * s2 - s2 * s2 * s2 / 36 - 3 * s3 * s3 / 8 + s1 * s2 * s3 / 8 - 3 * s1 * s1 * s4 / 8;
  return tau;
}

// ---------------------------------------------------------------------------

SecondOrderOp printed_rational_operator(const ModelParams& params) {
  require_omega(params);
  const Frame F = Frame::T;
  const Rational& w = *params.omega;
  const Rational& nu = params.nu;
  const Rational& mu = params.mu;
  SecondOrderOp op(F);
  auto set_a = [&](int la, int lb, MPoly p) { op.set_a(variable_index(la), variable_index(lb), std::move(p)); };
  auto set_b = [&](int la, MPoly p) { op.set_b(variable_index(la), std::move(p)); };

  set_a(1, 1, poly(F, {{2, v1}}));
  set_a(1, 3, poly(F, {{6, v3}}));
  set_a(1, 4, poly(F, {{8, v4}}));
  set_a(1, 6, poly(F, {{12, v6}}));
  set_a(3, 3, poly(F, {{q(-1, 3), {2, 1, 0, 0}}, {q(10, 3), {1, 0, 1, 0}}}));
  set_a(3, 4, poly(F, {{q(-2, 3), {2, 0, 1, 0}}, {4, v6}}));
  set_a(3, 6, poly(F, {{8, {0, 0, 2, 0}}, {-1, {2, 0, 0, 1}}}));
  set_a(4, 4, poly(F, {{-2, {0, 1, 1, 0}}, {-1, {1, 0, 0, 1}}}));
  set_a(4, 6, poly(F, {{-2, {1, 0, 2, 0}}, {-3, {0, 1, 0, 1}}}));

  set_b(1, poly(F, {{2 * w, v1}, {24 * (nu + mu + q(1, 6)), k1}}));
  set_b(3, poly(F, {{6 * w, v3}, {-2 * (nu + mu / 2 + q(1, 4)), {2, 0, 0, 0}}}));
  set_b(4, poly(F, {{8 * w, v4}, {-6 * (nu + q(1, 3)), v3}}));
  set_b(6, poly(F, {{12 * w, v6}, {-6 * (nu + q(2, 3)), {1, 0, 1, 0}}}));
  return op;
}

SecondOrderOp build_rational_operator(const ModelParams& params) {
  SecondOrderOp op = printed_rational_operator(params);
  op.set_a(3, 3, derive_missing_A66(params));
  return op;
}

SecondOrderOp build_trig_operator(const ModelParams& params) {
  require_beta2(params);
  const Frame F = Frame::Tau;
  const Rational& b = *params.beta2;
  const Rational b2 = b * b, b3 = b2 * b;
  const Rational& nu = params.nu;
  const Rational& mu = params.mu;
  SecondOrderOp op(F);
  auto set_a = [&](int la, int lb, MPoly p) { op.set_a(variable_index(la), variable_index(lb), std::move(p)); };
  auto set_b = [&](int la, MPoly p) { op.set_b(variable_index(la), std::move(p)); };

  set_a(1, 1, poly(F, {{4, v1}, {-4 * b, {2, 0, 0, 0}}, {q(-32, 3) * b2, v3}, {q(-128, 9) * b3, v4}}));
  set_a(1, 3, poly(F, {{12, v3},
                       {q(-32, 3) * b, {1, 1, 0, 0}},
                       {q(-8, 3) * b, v4},
                       {q(-32, 9) * b2, {1, 0, 1, 0}}}));
  set_a(1, 4, poly(F, {{16, v4}, {q(-40, 3) * b, {1, 0, 1, 0}}, {q(-16, 3) * b2, v6}}));
  set_a(1, 6, poly(F, {{24, v6}, {-20 * b, {1, 0, 0, 1}}, {q(-32, 3) * b2, {0, 0, 2, 0}}}));
  set_a(3, 3, poly(F, {{q(-2, 3), {2, 1, 0, 0}},
                       {q(20, 3), {1, 0, 1, 0}},
                       {-16 * b, {0, 2, 0, 0}},
                       {q(-8, 9) * b, {2, 0, 1, 0}},
                       {q(-32, 3) * b, v6}}));
  set_a(3, 4, poly(F, {{q(-4, 3), {2, 0, 1, 0}},
                       {8, v6},
                       {q(-4, 3) * b, {1, 0, 0, 1}},
                       {-16 * b, {0, 1, 1, 0}}}));
  set_a(3, 6, poly(F, {{16, {0, 0, 2, 0}},
                       {-2, {2, 0, 0, 1}},
                       {-24 * b, {0, 1, 0, 1}},
                       {q(-8, 3) * b, {1, 0, 2, 0}}}));
  set_a(4, 4, poly(F, {{-4, {0, 1, 1, 0}}, {-2, {1, 0, 0, 1}}, {-24 * b, {0, 0, 2, 0}}}));
  set_a(4, 6, poly(F, {{-4, {1, 0, 2, 0}}, {-6, {0, 1, 0, 1}}, {-36 * b, {0, 0, 1, 1}}}));
  set_a(6, 6, poly(F, {{-12, {0, 1, 2, 0}},
                       {-6, {1, 0, 1, 1}},
                       {-48 * b, {0, 0, 0, 2}},
                       {-8 * b, {0, 0, 3, 0}}}));

  // First-order terms are B_a + C_a.
  set_b(1, poly(F, {{8, k1}, {-8 * b, v1}}) +
               poly(F, {{48 * (nu + mu), k1}, {-8 * b * (5 * nu + 6 * mu), v1}}));
  set_b(3, poly(F, {{-1, {2, 0, 0, 0}}, {q(-56, 3) * b, v3}, {q(-32, 9) * b2, v4}}) +
               poly(F, {{-2 * (2 * nu + mu), {2, 0, 0, 0}}, {-16 * b * (3 * nu + 5 * mu), v3}}));
  set_b(4, poly(F, {{-4, v3}, {q(-88, 3) * b, v4}}) +
               poly(F, {{-12 * nu, v3}, {-24 * b * (3 * nu + 4 * mu), v4}}));
  set_b(6, poly(F, {{-8, {1, 0, 1, 0}}, {-56 * b, v6}}) +
               poly(F, {{-12 * nu, {1, 0, 1, 0}}, {-48 * b * (2 * nu + 3 * mu), v6}}));
  return op;
}

ShearPair build_rho_map(const Rational& beta2) {
  if (beta2 == 0) throw MapError("rho map is singular at beta^2 = 0");
  const Frame F = Frame::Tau;
  const Rational ib = 1 / beta2;
  const Rational ib2 = ib * ib, ib3 = ib2 * ib;
  Substitution fwd{Frame::Rho, Frame::Tau, {}};
  fwd.images[0] = poly(F, {{1, v1}});
  fwd.images[1] = poly(F, {{1, v3}, {q(-1, 8) * ib, {2, 0, 0, 0}}});
  fwd.images[2] = poly(F, {{1, v4}, {q(-3, 16) * ib2, {2, 0, 0, 0}}});
  fwd.images[3] = poly(F, {{1, v6}, {q(-3, 4) * ib, {1, 0, 1, 0}}, {q(3, 64) * ib3, {3, 0, 0, 0}}});
  return {fwd, invert_shear(fwd)};
}

bool AmbiguityParams::is_zero() const {
  return a == 0 && b1 == 0 && b2 == 0 && c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0;
}

std::string AmbiguityParams::to_string() const {
  std::ostringstream os;
  os << "A=" << a << " B1=" << b1 << " B2=" << b2 << " C1=" << c1 << " C2=" << c2 << " C3=" << c3
     << " C4=" << c4;
  return os.str();
}

ShearPair ambiguity_map(const AmbiguityParams& p) {
  const Frame F = Frame::T;
  Substitution fwd{F, F, {}};
  fwd.images[0] = poly(F, {{1, v1}});
  fwd.images[1] = poly(F, {{1, v3}, {p.a, {3, 0, 0, 0}}});
  fwd.images[2] = poly(F, {{1, v4}, {p.b1, {4, 0, 0, 0}}, {p.b2, {1, 1, 0, 0}}});
  fwd.images[3] = poly(F, {{1, v6},
                           {p.c1, {6, 0, 0, 0}},
                           {p.c2, {3, 1, 0, 0}},
                           {p.c3, {2, 0, 1, 0}},
                           {p.c4, {0, 2, 0, 0}}});
  return {fwd, invert_shear(fwd)};
}

SecondOrderOp build_model_operator(const ModelParams& params) {
  return params.model == Model::Rational ? build_rational_operator(params)
                                         : build_trig_operator(params);
}

SecondOrderOp build_rho_operator(const ModelParams& params) {
  require_beta2(params);
  return op_change_variables(build_trig_operator(params), build_rho_map(*params.beta2));
}

// ---------------------------------------------------------------------------

std::array<Rational, 4> grad_log_ground_state_rational(const ModelParams& params,
                                                       std::span<const Rational, 4> x,
                                                       int gaussian_sign) {
  require_omega(params);
  std::array<Rational, 4> g;
  for (int k = 0; k < 4; ++k) g[k] = -gaussian_sign * *params.omega * x[k];
  for (const auto& f : root_factors()) {
    const Rational v = linear_form_q(f, x);
    if (v == 0) throw PoleError("singular point: factor " + factor_name(f) + " vanishes");
    const Rational& e = f.long_root ? params.nu : params.mu;
    if (e == 0) continue;
    const Rational w = e / v;
    for (int k = 0; k < 4; ++k)
      if (f.c[k] != 0) g[k] += f.c[k] * w;
  }
  return g;
}

namespace {

/// Argument multiplier of a factor in the trig ground state: short roots
/// e_i carry 2 beta, all other factors beta.
Real trig_multiplier(const RootFactor& f, const Real& beta) { return f.coordinate ? Real(2 * beta) : beta; }

const Real& trig_singular_tolerance() {
  static thread_local Real tol("1e-30");
  return tol;
}

}  // namespace

std::array<Real, 4> grad_log_ground_state_trig(const ModelParams& params,
                                               const std::array<Real, 4>& x, const Real& beta) {
  ensure_precision();
  std::array<Real, 4> g{Real(0), Real(0), Real(0), Real(0)};
  const Real nu = to_real(params.nu), mu = to_real(params.mu);
  for (const auto& f : root_factors()) {
    const Real m = trig_multiplier(f, beta);
    const Real arg = m * linear_form(f, x);
    const Real s = sin(arg);
    if (abs(s) < trig_singular_tolerance())
      throw PoleError("singular point: sin factor " + factor_name(f) + " vanishes");
    const Real& e = f.long_root ? nu : mu;
    const Real w = e * m * cos(arg) / s;
    for (int k = 0; k < 4; ++k)
      if (f.c[k] != 0) g[k] += f.c[k] > 0 ? w : Real(-w);
  }
  return g;
}

Real log_ground_state_rational(const ModelParams& params, const std::array<Real, 4>& x,
                               int gaussian_sign) {
  require_omega(params);
  ensure_precision();
  const Real nu = to_real(params.nu), mu = to_real(params.mu), w = to_real(*params.omega);
  Real acc = 0;
  for (const auto& f : root_factors()) acc += (f.long_root ? nu : mu) * log(abs(linear_form(f, x)));
  Real r2 = 0;
  for (const auto& xi : x) r2 += xi * xi;
  return acc - gaussian_sign * w * r2 / 2;
}

Real log_ground_state_trig(const ModelParams& params, const std::array<Real, 4>& x,
                           const Real& beta) {
  ensure_precision();
  const Real nu = to_real(params.nu), mu = to_real(params.mu);
  Real acc = 0;
  for (const auto& f : root_factors())
    acc += (f.long_root ? nu : mu) * log(abs(sin(trig_multiplier(f, beta) * linear_form(f, x))));
  return acc;
}

// ---------------------------------------------------------------------------

Pullback::Pullback(const MPoly& p, const Substitution& to_y) : composite_(p.substitute(to_y)) {
  for (int k = 0; k < 4; ++k) {
    d1_[k] = composite_.derivative(k);
    d2_[k] = d1_[k].derivative(k);
  }
}

Rational Pullback::raw_rational(const ModelParams& params, std::span<const Rational, 4> x,
                                int gaussian_sign) const {
  const auto g = grad_log_ground_state_rational(params, x, gaussian_sign);
  const std::array<Rational, 4> y{x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]};
  Rational acc = 0;
  for (int k = 0; k < 4; ++k) {
    // y = x^2: y' = 2x, y'' = 2.
    const Rational yp = 2 * x[k];
    const Rational fk = d1_[k].eval(y);
    acc += d2_[k].eval(y) * yp * yp + 2 * fk + 2 * g[k] * fk * yp;
  }
  return acc;
}

Real Pullback::raw_trig(const ModelParams& params, const std::array<Real, 4>& x,
                        const Real& beta) const {
  ensure_precision();
  const auto g = grad_log_ground_state_trig(params, x, beta);
  const Real b2 = beta * beta;
  std::array<Real, 4> y, yp, ypp;
  for (int k = 0; k < 4; ++k) {
    // y = sin^2(beta x)/beta^2: y' = sin(2 beta x)/beta, y'' = 2 cos(2 beta x).
    const Real s = sin(beta * x[k]);
    y[k] = s * s / b2;
    yp[k] = sin(2 * beta * x[k]) / beta;
    ypp[k] = 2 * cos(2 * beta * x[k]);
  }
  auto conv = [](const Rational& c) { return to_real(c); };
  Real acc = 0;
  for (int k = 0; k < 4; ++k) {
    const Real fk = d1_[k].eval_as(y, conv);
    acc += d2_[k].eval_as(y, conv) * yp[k] * yp[k] + fk * ypp[k] + 2 * g[k] * fk * yp[k];
  }
  return acc;
}

Rational cartesian_oracle_rational(const ModelParams& params, const Calibration& cal,
                                   const MPoly& p, std::span<const Rational, 4> x) {
  if (p.frame() != Frame::T) throw FrameError("rational oracle expects a t-frame polynomial");
  const Pullback pb(p, rational_invariants_y());
  const Rational raw = pb.raw_rational(params, x, cal.gaussian_sign);
  return cal.scale * raw + cal.offset * p.eval(variables_rational(x));
}

Real cartesian_oracle_trig(const ModelParams& params, const Calibration& cal, const MPoly& p,
                           const std::array<Real, 4>& x) {
  require_beta2(params);
  if (p.frame() != Frame::Tau) throw FrameError("trig oracle expects a tau-frame polynomial");
  ensure_precision();
  const Real beta = sqrt(to_real(*params.beta2));
  const Pullback pb(p, trig_invariants_y(*params.beta2));
  const auto tau = variables_trig(x, beta);
  return to_real(cal.scale) * pb.raw_trig(params, x, beta) +
         to_real(cal.offset) * p.eval_as(tau, [](const Rational& c) { return to_real(c); });
}

// ---------------------------------------------------------------------------

std::uint64_t PointSampler::next(std::uint64_t bound) { return rng_() % bound; }

Rational PointSampler::small_rational(int max_num, int max_den, bool allow_negative) {
  const long num = 1 + static_cast<long>(next(static_cast<std::uint64_t>(max_num)));
  const long den = 1 + static_cast<long>(next(static_cast<std::uint64_t>(max_den)));
  Rational v(num, den);
  v.canonicalize();
  if (allow_negative && next(2) == 1) v = -v;
  return v;
}

bool rational_point_regular(std::span<const Rational, 4> x) {
  for (const auto& f : root_factors())
    if (linear_form_q(f, x) == 0) return false;
  return true;
}

std::array<Rational, 4> PointSampler::rational_point() {
  for (;;) {
    std::array<Rational, 4> x;
    for (auto& v : x) v = small_rational(9, 5);
    if (rational_point_regular(x)) return x;
  }
}

std::array<Rational, 4> PointSampler::positive_point(const Rational& scale) {
  std::array<Rational, 4> x;
  for (auto& v : x) {
    Rational u(static_cast<long>(1 + next(1000)), 1000);
    v = u * scale;
    v.canonicalize();
  }
  return x;
}

std::array<Real, 4> PointSampler::alcove_point(const Real& beta) {
  ensure_precision();
  const Real width = real_pi() / (4 * beta);
  const Real margin("1e-3");
  for (;;) {
    std::array<Real, 4> x;
    for (auto& v : x) {
      Rational u(static_cast<long>(1 + next((1ull << 40) - 1)), 1L << 40);
      u.canonicalize();
      v = to_real(u) * width;
    }
    bool ok = true;
    for (const auto& f : root_factors())
      if (abs(sin(trig_multiplier(f, beta) * linear_form(f, x))) < margin) ok = false;
    if (ok) return x;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct CalibrationProbe {
  MPoly poly;
  std::optional<Pullback> pullback;
};

bool close_rel(const Real& a, const Real& b, const Real& tol) {
  const Real scale = std::max(Real(abs(b)), Real(1));
  return abs(a - b) <= tol * scale;
}

}  // namespace

Calibration calibrate_normalization(Model model, const ModelParams& params, std::uint64_t seed) {
  params.validate();
  if (params.model != model) throw CalibrationError("parameter set belongs to the other model");
  const Frame F = model == Model::Rational ? Frame::T : Frame::Tau;
  const SecondOrderOp op =
      model == Model::Rational ? printed_rational_operator(params) : build_trig_operator(params);
  const Substitution to_y =
      model == Model::Rational ? rational_invariants_y() : trig_invariants_y(*params.beta2);

  const std::vector<MPoly> probes{MPoly::constant(F, 1), MPoly::variable(F, 0),
                                  MPoly::monomial(F, {2, 0, 0, 0})};
  std::vector<MPoly> images;
  std::vector<Pullback> pullbacks;
  for (const auto& p : probes) {
    images.push_back(op_apply(op, p));
    pullbacks.emplace_back(p, to_y);
  }
  const std::vector<Rational> scales{1, -1, 2, -2, q(1, 2), q(-1, 2)};
  const std::vector<int> signs = model == Model::Rational ? std::vector<int>{1, -1} : std::vector<int>{1};
  PointSampler sampler(seed ^ 0x9e3779b97f4a7c15ull);

  // residual(s, eps, probe, point) == 0 decides a fit; c0 comes from P = 1.
  struct Fit {
    Rational scale;
    int sign;
    Rational offset;
  };
  std::vector<Fit> fits;
  std::ostringstream diag;

  if (model == Model::Rational) {
    std::vector<std::array<Rational, 4>> pts;
    for (int i = 0; i < 13; ++i) pts.push_back(sampler.rational_point());
    auto fits_at = [&](const Rational& s, int eps, Rational& c0, std::size_t from, std::size_t to) {
      for (std::size_t i = from; i < to; ++i) {
        const auto t = variables_rational(pts[i]);
        for (std::size_t k = 0; k < probes.size(); ++k) {
          const Rational alg = images[k].eval(t);
          const Rational raw = pullbacks[k].raw_rational(params, pts[i], eps);
          const Rational pv = probes[k].eval(t);
          if (k == 0 && i == from && from == 0) c0 = (alg - s * raw) / pv;
          if (s * raw + c0 * pv != alg) return false;
        }
      }
      return true;
    };
    for (const auto& s : scales)
      for (int eps : signs) {
        Rational c0 = 0;
        if (fits_at(s, eps, c0, 0, 3)) fits.push_back({s, eps, c0});
      }
    if (fits.size() == 1) {
      Rational c0 = fits[0].offset;
      if (!fits_at(fits[0].scale, fits[0].sign, c0, 3, pts.size()))
        throw CalibrationError("rational calibration does not hold at the confirmation points");
    }
    const auto t0 = variables_rational(pts[0]);
    diag << "t1 probe at " << to_string(pts[0][0]) << ",...: algebraic=" << to_string(images[1].eval(t0))
         << " raw(eps=+1)=" << to_string(pullbacks[1].raw_rational(params, pts[0], 1))
         << " raw(eps=-1)=" << to_string(pullbacks[1].raw_rational(params, pts[0], -1));
  } else {
    ensure_precision();
    const Real beta = sqrt(to_real(*params.beta2));
    const Real tol("1e-9");
    std::vector<std::array<Real, 4>> pts;
    for (int i = 0; i < 13; ++i) pts.push_back(sampler.alcove_point(beta));
    auto conv = [](const Rational& c) { return to_real(c); };
    auto fits_at = [&](const Rational& s, Real& c0, std::size_t from, std::size_t to) {
      const Real sr = to_real(s);
      for (std::size_t i = from; i < to; ++i) {
        const auto tau = variables_trig(pts[i], beta);
        for (std::size_t k = 0; k < probes.size(); ++k) {
          const Real alg = images[k].eval_as(tau, conv);
          const Real raw = pullbacks[k].raw_trig(params, pts[i], beta);
          const Real pv = probes[k].eval_as(tau, conv);
          if (k == 0 && i == from && from == 0) c0 = (alg - sr * raw) / pv;
          if (!close_rel(sr * raw + c0 * pv, alg, tol)) return false;
        }
      }
      return true;
    };
    for (const auto& s : scales) {
      Real c0 = 0;
      if (fits_at(s, c0, 0, 3)) {
        // The offset must be an exact small rational; the operators carry no
        // zero-order term, so anything but 0 is a failure.
        if (abs(c0) > tol) continue;
        fits.push_back({s, 1, 0});
      }
    }
    if (fits.size() == 1) {
      Real c0 = 0;
      if (!fits_at(fits[0].scale, c0, 3, pts.size()))
        throw CalibrationError("trig calibration does not hold at the confirmation points");
    }
    const auto tau0 = variables_trig(pts[0], beta);
    diag << "tau1 probe: algebraic=" << images[1].eval_as(tau0, conv).str(20)
         << " raw=" << pullbacks[1].raw_trig(params, pts[0], beta).str(20);
  }

  if (fits.empty())
    throw CalibrationError("no scale in {+-1, +-2, +-1/2} reconciles the " +
                           std::string(model_name(model)) + " operator with the oracle; " + diag.str());
  if (fits.size() > 1)
    throw CalibrationError("calibration is ambiguous for these parameters; " + diag.str());
  return {fits[0].scale, fits[0].offset, fits[0].sign};
}

// ---------------------------------------------------------------------------

MPoly invariant_reduce(const MPoly& expr_y, int x_degree_bound, PointSampler& sampler) {
  if (expr_y.frame() != Frame::Y) throw FrameError("invariant_reduce expects a y-frame polynomial");
  std::vector<ExpVec> cands;
  for (int p6 = 0; 12 * p6 <= x_degree_bound; ++p6)
    for (int p4 = 0; 8 * p4 + 12 * p6 <= x_degree_bound; ++p4)
      for (int p3 = 0; 6 * p3 + 8 * p4 + 12 * p6 <= x_degree_bound; ++p3)
        for (int p1 = 0; 2 * p1 + 6 * p3 + 8 * p4 + 12 * p6 <= x_degree_bound; ++p1)
          cands.push_back({p1, p3, p4, p6});

  auto monomial_values = [&](const std::array<Rational, 4>& t) {
    std::vector<Rational> row;
    row.reserve(cands.size());
    for (const auto& e : cands) {
      Rational v = 1;
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < e[k]; ++j) v *= t[k];
      row.push_back(v);
    }
    return row;
  };
  auto sample = [&](std::vector<Rational>& row, Rational& value) {
    const auto x = sampler.rational_point();
    const std::array<Rational, 4> y{x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]};
    row = monomial_values(variables_rational(x));
    value = expr_y.eval(y);
  };

  const std::size_t npts = 2 * cands.size();
  RatMatrix m(npts, cands.size());
  std::vector<Rational> rhs(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    std::vector<Rational> row;
    sample(row, rhs[i]);
    for (std::size_t j = 0; j < cands.size(); ++j) m(i, j) = row[j];
  }
  if (rank(m) != cands.size()) throw ReductionError("invariant_reduce: sample points are degenerate");
  auto sol = solve_linear_exact(m, rhs);
  if (!sol) throw ReductionError("invariant_reduce: expression is not a polynomial in t1,t3,t4,t6");

  MPoly out(Frame::T);
  for (std::size_t j = 0; j < cands.size(); ++j) out.add_term(cands[j], (*sol)[j]);

  for (int h = 0; h < 10; ++h) {
    std::vector<Rational> row;
    Rational value;
    sample(row, value);
    Rational fitted = 0;
    for (std::size_t j = 0; j < cands.size(); ++j) fitted += row[j] * (*sol)[j];
    if (fitted != value) throw ReductionError("invariant_reduce: holdout point disagrees");
  }
  return out;
}

namespace {

/// sum_k (d t6/d x_k)^2 reduced to the t frame; parameter independent.
const MPoly& reduced_t6_gradient_square() {
  static const MPoly reduced = [] {
    const MPoly t6 = *rational_invariants_y().images[3];
    MPoly expr(Frame::Y);
    for (int k = 0; k < 4; ++k) {
      // (d/dx_k)(f(y)) = f_{y_k} * 2 x_k, so the square is 4 y_k f_{y_k}^2.
      const MPoly dk = t6.derivative(k);
      expr += MPoly::monomial(Frame::Y, {k == 0, k == 1, k == 2, k == 3}, 4) * dk * dk;
    }
    PointSampler sampler(0x6a09e667f3bcc908ull);
    return invariant_reduce(expr, 22, sampler);
  }();
  return reduced;
}

}  // namespace

A66Derivation derive_missing_A66_routes(const ModelParams& params) {
  require_omega(params);
  const Calibration rat = calibrate_normalization(Model::Rational, params);
  const Rational beta2 = 1;
  const Calibration trig = calibrate_normalization(Model::Trig, ModelParams::trig(params.nu, params.mu, beta2));

  A66Derivation d{reduced_t6_gradient_square() * rat.scale, MPoly(Frame::T), rat.scale, trig.scale};
  const ModelParams limit = ModelParams::trig(params.nu, params.mu, 0);
  d.trig_limit_route = build_trig_operator(limit).a(3, 3).retagged(Frame::T) * Rational(rat.scale / trig.scale);
  return d;
}

MPoly derive_missing_A66(const ModelParams& params) {
  const A66Derivation d = derive_missing_A66_routes(params);
  if (d.reduction_route != d.trig_limit_route)
    throw DerivationError("A_66 routes disagree: reduction gives " + to_string(d.reduction_route) +
                          ", trig limit gives " + to_string(d.trig_limit_route));
  return d.reduction_route;
}

}  // namespace f4solv
