// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. Reference values are
// recomputed here from the closed forms and by brute force rather than taken
// from the library.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diffop.hpp"
#include "flags.hpp"
#include "hiprec.hpp"
#include "models_f4.hpp"
#include "spectral.hpp"

using namespace f4solv;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

const std::vector<ModelParams> kRational{
    ModelParams::rational(q(1, 3), q(1, 5), 1),
    ModelParams::rational(2, 3, q(3, 2)),
    ModelParams::rational(q(5, 2), q(1, 7), q(2, 5)),
};

const std::vector<ModelParams> kTrig{
    ModelParams::trig(q(1, 3), q(1, 5), 1),
    ModelParams::trig(2, 3, q(3, 2)),
    ModelParams::trig(q(5, 2), q(1, 7), q(2, 5)),
};

std::string describe(const ModelParams& p) {
  std::string s = "(nu=" + to_string(p.nu) + ", mu=" + to_string(p.mu);
  if (p.omega) s += ", omega=" + to_string(*p.omega);
  if (p.beta2) s += ", beta2=" + to_string(*p.beta2);
  return s + ")";
}

int level_of(const ExpVec& p) { return p[0] + 3 * p[1] + 4 * p[2] + 6 * p[3]; }

Rational energy_rational(const ExpVec& p, const ModelParams& m) {
  return 2 * (level_of(p) + 2 + 12 * m.mu + 12 * m.nu) * *m.omega;
}

Rational energy_trig(const ExpVec& e, const ModelParams& m) {
  const long p1 = e[0], p3 = e[1], p4 = e[2], p6 = e[3];
  const Rational& nu = m.nu;
  const Rational& mu = m.mu;
  const Rational& b = *m.beta2;
  const Rational inner = p1 * (p1 + 2 * p3 + 3 * p4 + 4 * p6) + 2 * p3 * (p3 + 2 * p4 + 3 * p6) +
                         p4 * (3 * p4 + 8 * p6) + 6 * p6 * p6 + nu * (5 * p1 + 6 * p3 + 9 * p4 + 12 * p6) +
                         2 * mu * (3 * p1 + 5 * p3 + 6 * p4 + 9 * p6);
  return 4 * inner * b + 4 * b * (7 * nu * nu + 14 * mu * mu + 18 * nu * mu);
}

std::size_t brute_degeneracy(int n) {
  std::size_t c = 0;
  for (int p1 = 0; p1 <= n; ++p1)
    for (int p3 = 0; p3 <= n; ++p3)
      for (int p4 = 0; p4 <= n; ++p4)
        for (int p6 = 0; p6 <= n; ++p6)
          if (level_of({p1, p3, p4, p6}) == n) ++c;
  return c;
}

/// Flag check straight from op images.
bool flag_by_images(const SecondOrderOp& op, const CharVector& f, int n) {
  for (const GradedBasis basis(f, n); const ExpVec& e : basis.monomials())
    for (const MPoly image = op_apply(op, MPoly::monomial(op.frame(), e)); const auto& [img, c] : image.terms())
      if (f.grade(img) > f.grade(e)) return false;
  return true;
}

/// Upper triangular in the canonical basis order.
bool upper_triangular(const SecondOrderOp& op, int n) {
  const GradedBasis b(kMinimalFlag, n);
  const OperatorMatrix m = op_matrix(op, b);
  if (!m.closed) return false;
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = j + 1; i < b.size(); ++i)
      if (m.matrix(i, j) != 0) return false;
  return true;
}

MPoly random_p4(std::mt19937_64& rng, Frame f) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  MPoly p(f);
  for (const GradedBasis basis(kMinimalFlag, 4); const ExpVec& e : basis.monomials()) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    p.add_term(e, c);
  }
  return p;
}

Real rel(const Real& a, const Real& b) {
  using boost::multiprecision::abs;
  return abs(a - b) / std::max<Real>(Real(1), abs(b));
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Runner {
 public:
  void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && dt > limit_s) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    failures_ += o.pass ? 0 : 1;
    std::printf("%s %d %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", id, title, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

Outcome criterion1() {
  Outcome o;
  const SecondOrderOp hr = build_rational_operator(kRational[0]);
  const SecondOrderOp ht = build_trig_operator(kTrig[0]);
  for (int n = 0; n <= 8; ++n) {
    const FlagVerdict v = preserves_flag(hr, kMinimalFlag, n);
    o.pass = o.pass && v.preserved && !v.witness && flag_by_images(hr, kMinimalFlag, n);
  }
  for (int n = 0; n <= 6; ++n) {
    const FlagVerdict v = preserves_flag(ht, kMinimalFlag, n);
    o.pass = o.pass && v.preserved && !v.witness && flag_by_images(ht, kMinimalFlag, n);
  }
  o.detail = "rational n<=8, trig tau n<=6, f=(1,2,2,3), zero witnesses; params " + describe(kRational[0]) +
             ", " + describe(kTrig[0]);
  return o;
}

Outcome criterion2(const std::vector<ModelParams>& sets) {
  Outcome o;
  std::optional<Rational> common_scale;
  std::ostringstream d;
  for (const auto& p : sets) {
    const SecondOrderOp h = build_rational_operator(p);
    for (int n = 0; n <= 6; ++n) o.pass = o.pass && is_triangular(h, kMinimalFlag, n).strict;
    o.pass = o.pass && upper_triangular(h, 6);
    const Spectrum s = spectrum_from_matrix(h, kMinimalFlag, 6);
    const SpectralLine* ground = nullptr;
    for (const auto& l : s.lines) {
      if (!l.label) return {false, "unlabeled line"};
      if (l.eigenvalue != 2 * *p.omega * level_of(*l.label)) o.pass = false;
      if (level_of(*l.label) == 0) ground = &l;
    }
    if (!ground) return {false, "no ground line"};
    // closed form = scale * eigenvalue + offset, fitted on every line.
    const Rational offset = energy_rational(*ground->label, p) - ground->eigenvalue;
    std::optional<Rational> scale;
    for (const auto& l : s.lines) {
      if (l.eigenvalue == ground->eigenvalue) continue;
      const Rational sc = (energy_rational(*l.label, p) - energy_rational(*ground->label, p)) /
                          (l.eigenvalue - ground->eigenvalue);
      if (scale && *scale != sc) o.pass = false;
      scale = sc;
    }
    if (!scale) return {false, "no excited line"};
    if (common_scale && *common_scale != *scale) o.pass = false;
    common_scale = scale;
    o.pass = o.pass && offset == energy_rational({0, 0, 0, 0}, p);
    d << describe(p) << " ";
  }
  o.detail = "strict n<=6, diagonal 2w*level, closed form = " + to_string(*common_scale) +
             "*eigenvalue + E(0) on " + d.str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::map<ExpVec, Rational> gap, closed_gap;
  bool first = true;
  for (const auto& [nu, mu] : {std::pair{q(1, 3), q(1, 5)}, std::pair{q(2), q(3)}, std::pair{q(5, 2), q(1, 7)}}) {
    const ModelParams p = ModelParams::rational(nu, mu, 1);
    const Spectrum s = spectrum_from_matrix(build_rational_operator(p), kMinimalFlag, 6);
    Rational e0;
    for (const auto& l : s.lines)
      if (level_of(*l.label) == 0) e0 = l.eigenvalue;
    for (const auto& l : s.lines) {
      const Rational g = l.eigenvalue - e0;
      const Rational pg = energy_rational(*l.label, p) - energy_rational({0, 0, 0, 0}, p);
      if (first) {
        gap[*l.label] = g;
        closed_gap[*l.label] = pg;
      } else if (gap.at(*l.label) != g || closed_gap.at(*l.label) != pg) {
        o.pass = false;
      }
    }
    first = false;
  }
  o.detail = std::to_string(gap.size()) + " lines with level <= 6, omega=1, (nu,mu) in {(1/3,1/5),(2,3),(5/2,1/7)}";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::optional<Rational> common_scale;
  std::ostringstream d;
  for (const auto& p : kTrig) {
    const TriangularVerdict tau = is_triangular(build_trig_operator(p), kMinimalFlag, 4);
    if (tau.strict || !tau.violation) o.pass = false;
    if (tau.violation && &p == &kTrig[0])
      d << "tau witness: column " << to_string(tau.violation->column) << " row "
        << to_string(tau.violation->row) << " coeff " << to_string(tau.violation->coefficient) << "; ";

    const SecondOrderOp rho = build_rho_operator(p);
    for (int n = 0; n <= 6; ++n) o.pass = o.pass && is_triangular(rho, kMinimalFlag, n).strict;
    const Spectrum s = spectrum_from_matrix(rho, kMinimalFlag, 6);
    Rational ground;
    for (const auto& l : s.lines) {
      if (!l.label) return {false, "unlabeled rho line"};
      if (level_of(*l.label) == 0) ground = l.eigenvalue;
    }
    for (const auto& l : s.lines) {
      if (l.eigenvalue == ground) continue;
      const Rational sc = (energy_trig(*l.label, p) - energy_trig({0, 0, 0, 0}, p)) / (l.eigenvalue - ground);
      if (common_scale && *common_scale != sc) o.pass = false;
      common_scale = sc;
    }
    for (const auto& l : s.lines)
      if (*common_scale * (l.eigenvalue - ground) + energy_trig({0, 0, 0, 0}, p) != energy_trig(*l.label, p))
        o.pass = false;
  }
  d << "rho strict n<=6, closed form = " << to_string(*common_scale) << "*eigenvalue + E(0) on ";
  for (const auto& p : kTrig) d << describe(p) << " ";
  o.detail = d.str();
  return o;
}

Outcome oracle_rational(const ModelParams& p, const std::vector<MPoly>& polys, int points, std::uint64_t seed) {
  const SecondOrderOp h = build_rational_operator(p);
  const Calibration cal = calibrate_normalization(Model::Rational, p, seed);
  for (std::uint64_t s : {seed + 1, seed + 2})
    if (calibrate_normalization(Model::Rational, p, s).scale != cal.scale) return {false, "scale drifts"};
  PointSampler sampler(seed);
  std::vector<std::array<Rational, 4>> xs;
  for (int i = 0; i < points; ++i) xs.push_back(sampler.rational_point());
  for (const MPoly& poly : polys) {
    const MPoly image = op_apply(h, poly);
    for (const auto& x : xs)
      if (cartesian_oracle_rational(p, cal, poly, x) != image.eval(variables_rational(x)))
        return {false, "rational mismatch"};
  }
  return {true, "scale " + to_string(cal.scale)};
}

Outcome criterion5() {
  ensure_precision();
  std::mt19937_64 rng(20261015);
  std::vector<MPoly> polys;
  for (int i = 0; i < 5; ++i) polys.push_back(random_p4(rng, Frame::T));
  Outcome o = oracle_rational(kRational[0], polys, 20, 1);
  if (!o.pass) return o;
  std::string detail = "rational exact at 20 points x 5 P_4 polys, " + o.detail;

  const ModelParams& p = kTrig[0];
  const SecondOrderOp h = build_trig_operator(p);
  const Calibration cal = calibrate_normalization(Model::Trig, p, 1);
  for (std::uint64_t s : {2, 3})
    if (calibrate_normalization(Model::Trig, p, s).scale != cal.scale) return {false, "trig scale drifts"};
  const Real beta = boost::multiprecision::sqrt(to_real(*p.beta2));
  PointSampler sampler(1);
  Real worst = 0;
  std::vector<MPoly> tpolys;
  for (int i = 0; i < 5; ++i) tpolys.push_back(random_p4(rng, Frame::Tau));
  for (int i = 0; i < 20; ++i) {
    const auto x = sampler.alcove_point(beta);
    const auto tv = variables_trig(x, beta);
    for (const MPoly& poly : tpolys) {
      const Real alg = op_apply(h, poly).eval_as(tv, [](const Rational& c) { return to_real(c); });
      worst = std::max(worst, rel(cartesian_oracle_trig(p, cal, poly, x), alg));
    }
  }
  o.pass = worst <= Real("1e-9");
  std::ostringstream d;
  d << detail << "; trig max rel error " << std::scientific << static_cast<double>(worst)
    << " at 20 points, scale " << to_string(cal.scale);
  o.detail = d.str();
  return o;
}

Outcome criterion6() {
  Outcome o;
  const MPoly expect_shape = [] {
    MPoly m(Frame::T);
    m.add_term({0, 1, 2, 0}, -6);
    m.add_term({1, 0, 1, 1}, -3);
    return m;
  }();
  std::mt19937_64 rng(6);
  std::vector<MPoly> polys;
  MPoly t6sq = MPoly::monomial(Frame::T, {0, 0, 0, 2}) + MPoly::monomial(Frame::T, {1, 0, 1, 0});
  polys.push_back(t6sq);
  polys.push_back(MPoly::monomial(Frame::T, {0, 1, 0, 1}, 3) + random_p4(rng, Frame::T));
  for (const auto& p : kRational) {
    const A66Derivation d = derive_missing_A66_routes(p);
    if (!(d.reduction_route == d.trig_limit_route) || !(d.reduction_route == expect_shape)) o.pass = false;
    const SecondOrderOp h = build_rational_operator(p);
    if (!(h.a(3, 3) == d.reduction_route)) o.pass = false;
    for (int n = 0; n <= 8; ++n) o.pass = o.pass && flag_by_images(h, kMinimalFlag, n);
    o.pass = o.pass && upper_triangular(h, 6);
    o.pass = o.pass && oracle_rational(p, polys, 20, 7).pass;
  }
  o.pass = o.pass && criterion2(kRational).pass;
  o.detail = "A66 = " + to_string(expect_shape) +
             " from both routes on 3 sets; completed operator re-checked for flags, triangularity, spectrum and "
             "oracle with t6^2 terms";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::size_t pairs = 0;
  for (const auto& p : kRational) {
    const SecondOrderOp h = build_rational_operator(p);
    const Eigensystem e = eigenfunctions(h, kMinimalFlag, 6);
    o.pass = o.pass && e.residuals_zero && e.defective.empty();
    for (const auto& pr : e.pairs) {
      o.pass = o.pass && (op_apply(h, *pr.eigenfunction) - pr.eigenvalue * *pr.eigenfunction).is_zero();
      ++pairs;
    }
  }
  for (const auto& p : kTrig) {
    const SecondOrderOp h = build_rho_operator(p);
    const Eigensystem e = eigenfunctions(h, kMinimalFlag, 4);
    o.pass = o.pass && e.residuals_zero;
    for (const auto& pr : e.pairs) {
      o.pass = o.pass && (op_apply(h, *pr.eigenfunction) - pr.eigenvalue * *pr.eigenfunction).is_zero();
      ++pairs;
    }
  }
  const ModelParams& p = kRational[0];
  const Spectrum s = spectrum_from_matrix(build_rational_operator(p), kMinimalFlag, 8);
  std::string counts;
  for (int n = 0; n <= 8; ++n) {
    const auto c = static_cast<std::size_t>(std::count_if(s.lines.begin(), s.lines.end(), [&](const SpectralLine& l) {
      return l.eigenvalue == 2 * *p.omega * n;
    }));
    o.pass = o.pass && c == brute_degeneracy(n) && c == degeneracy_count(n);
    counts += (n ? "," : "") + std::to_string(c);
  }
  o.detail = std::to_string(pairs) + " eigenpairs with zero residual; multiplicities n=0..8: " + counts;
  return o;
}

Outcome criterion8() {
  Outcome o;
  const SecondOrderOp h = build_rational_operator(ModelParams::rational(1, 1, 1));
  const FlagScan scan = scan_characteristic_vectors(h, 6, 6);
  const bool has_min = std::find(scan.preserved.begin(), scan.preserved.end(), kMinimalFlag) != scan.preserved.end();
  bool below = false;
  for (const auto& f : scan.preserved) below = below || f.strictly_below(kMinimalFlag);
  o.pass = has_min && !below;

  const AmbiguitySearch search = search_ambiguity_flags(h, 6);
  std::ostringstream d;
  d << scan.preserved.size() << " preserved vectors, minimal";
  for (const auto& f : scan.minimal) d << " " << f.to_string();
  d << "; search over " << search.grid << ", " << search.candidates_tried << " candidates";
  for (const auto& hit : search.hits) {
    const SecondOrderOp hs = op_change_variables(h, ambiguity_map(hit.params));
    const bool ok = flag_by_images(hs, hit.flag, 6) && !flag_by_images(hs, kMinimalFlag, 6);
    o.pass = o.pass && ok;
    d << "; " << hit.flag.to_string() << " via " << hit.params.to_string();
  }
  if (!search.not_found.empty()) {
    d << "; not found:";
    for (const auto& f : search.not_found) d << " " << f.to_string();
  }
  o.pass = o.pass && (!search.hits.empty() || !search.not_found.empty());
  o.detail = d.str();
  return o;
}

Outcome criterion9() {
  ensure_precision();
  PointSampler s(9);
  const Real beta("1e-4");
  Real worst = 0;
  for (int i = 0; i < 10; ++i) {
    const auto x = s.positive_point(q(1, 20));
    const auto exact = variables_rational(x);
    const auto tt = variables_trig({to_real(x[0]), to_real(x[1]), to_real(x[2]), to_real(x[3])}, beta);
    for (int v = 0; v < 4; ++v) {
      using boost::multiprecision::abs;
      const Real e = to_real(exact[v]);
      const Real r = e == 0 ? Real(abs(tt[v])) : Real(abs(tt[v] - e) / abs(e));
      worst = std::max(worst, r);
    }
  }
  std::ostringstream d;
  d << "10 points in (0,1/20]^4, max rel error " << std::scientific << static_cast<double>(worst);
  return {worst <= Real("1e-10"), d.str()};
}

}  // namespace

int main() {
  Runner r;
  r.run(1, "flag preservation", 30, criterion1);
  r.run(2, "rational triangularity and spectrum", 10, [] { return criterion2(kRational); });
  r.run(3, "coupling independence", 0, criterion3);
  r.run(4, "trig non-triangularity and rho triangularization", 30, criterion4);
  r.run(5, "cartesian oracle", 60, criterion5);
  r.run(6, "A66 recovery", 0, criterion6);
  r.run(7, "eigenfunctions and degeneracy", 0, criterion7);
  r.run(8, "flag scan and ambiguity search", 300, criterion8);
  r.run(9, "limit check", 1, criterion9);
  return r.failures() == 0 ? 0 : 1;
}
