// SPDX-License-Identifier: Apache-2.0

#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <queue>

#include <Eigen/Dense>

namespace f4solv {

Rational closed_form_energy_rational(const QuantumNumbers& p, const ModelParams& params) {
  if (!params.omega) throw ParseError("rational energy needs omega");
  return 2 * (weighted_level(p) + 2 + 12 * params.mu + 12 * params.nu) * *params.omega;
}

Rational closed_form_energy_trig(const QuantumNumbers& p, const ModelParams& params) {
  if (!params.beta2) throw ParseError("trig energy needs beta2");
  const auto [p1, p3, p4, p6] = p;
  const Rational& nu = params.nu;
  const Rational& mu = params.mu;
  const Rational bracket = p1 * (p1 + 2 * p3 + 3 * p4 + 4 * p6) + 2 * p3 * (p3 + 2 * p4 + 3 * p6) +
                           p4 * (3 * p4 + 8 * p6) + 6 * p6 * p6 +
                           nu * (5 * p1 + 6 * p3 + 9 * p4 + 12 * p6) +
                           2 * mu * (3 * p1 + 5 * p3 + 6 * p4 + 9 * p6);
  const Rational& b = *params.beta2;
  return 4 * bracket * b + 4 * b * (7 * nu * nu + 14 * mu * mu + 18 * nu * mu);
}

Rational closed_form_energy(const QuantumNumbers& p, const ModelParams& params) {
  return params.model == Model::Rational ? closed_form_energy_rational(p, params)
                                         : closed_form_energy_trig(p, params);
}

std::size_t degeneracy_count(int n) {
  if (n < 0) return 0;
  return count_monomials_of_grade(CharVector(3, 4, 6), n);
}

// ---------------------------------------------------------------------------

std::vector<Rational> characteristic_polynomial(const RatMatrix& m) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RatMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational acc = 0;
        for (std::size_t l = 0; l < n; ++l)
          if (m(i, l) != 0 && mk(l, j) != 0) acc += m(i, l) * mk(l, j);
        next(i, j) = acc;
      }
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += m(i, l) * next(l, i);
    c[n - k] = -tr / static_cast<long>(k);
    mk = std::move(next);
  }
  return c;
}

namespace {

Rational horner(const std::vector<Rational>& poly, const Rational& x) {
  Rational acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void trim(std::vector<Rational>& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

std::vector<Rational> poly_deriv(const std::vector<Rational>& p) {
  if (p.size() <= 1) return {Rational(0)};
  std::vector<Rational> d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<long>(k);
  return d;
}

/// Quotient and remainder of a by b (b nonzero), constant term first.
std::pair<std::vector<Rational>, std::vector<Rational>> poly_divmod(std::vector<Rational> a,
                                                                     const std::vector<Rational>& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {{Rational(0)}, a};
  std::vector<Rational> q(a.size() - db);
  for (std::size_t k = a.size(); k-- > db;) {
    const Rational c = a[k] / b[db];
    q[k - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  a.resize(db == 0 ? 1 : db);
  trim(a);
  trim(q);
  return {q, a};
}

std::vector<Rational> poly_div(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return poly_divmod(a, b).first;
}

bool poly_is_zero(const std::vector<Rational>& p) { return p.size() == 1 && p[0] == 0; }

std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
  trim(a);
  trim(b);
  while (!poly_is_zero(b)) {
    auto r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

/// Divides by (x - r), assuming r is a root.
std::vector<Rational> deflate(const std::vector<Rational>& poly, const Rational& r) {
  const std::size_t d = poly.size() - 1;
  std::vector<Rational> q(d);
  Rational carry = 0;
  for (std::size_t k = d; k-- > 0;) {
    carry = poly[k + 1] + carry * r;
    q[k] = carry;
  }
  return q;
}

/// Continued-fraction convergents of x with denominators up to a bound.
std::vector<Rational> convergents(double x) {
  std::vector<Rational> out;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 40 && std::isfinite(r); ++i) {
    const double a = std::floor(r);
    const mpz_class ai(a);
    const mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > mpz_class(100000000)) break;
    Rational c(h2, k2);
    c.canonicalize();
    out.push_back(c);
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    const double frac = r - a;
    if (std::abs(frac) < 1e-15) break;
    r = 1.0 / frac;
  }
  return out;
}

std::vector<std::complex<double>> numeric_roots(const std::vector<Rational>& poly) {
  const std::size_t d = poly.size() - 1;
  if (d == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const double lead = to_double(poly[d]);
  for (std::size_t i = 0; i < d; ++i) {
    if (i + 1 < d) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1;
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -to_double(poly[i]) / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

namespace {

/// Keeps the candidates that are exact roots and strips them from `poly`
/// with multiplicity.
std::vector<Rational> accept_roots(std::vector<Rational> poly, const std::vector<std::complex<double>>& guesses,
                                   std::vector<Rational>* rest) {
  trim(poly);
  // Exact tests run on the square-free part, which has smaller coefficients.
  const std::vector<Rational> sqfree = poly_div(poly, poly_gcd(poly, poly_deriv(poly)));
  std::vector<Rational> candidates;
  if (sqfree.size() > 1 && sqfree[0] == 0) candidates.push_back(0);
  for (const auto& z : guesses) {
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) continue;
    for (const auto& c : convergents(z.real()))
      if (horner(sqfree, c) == 0) {
        candidates.push_back(c);
        break;
      }
  }
  std::vector<Rational> roots;
  for (const auto& c : candidates)
    while (poly.size() > 1 && horner(poly, c) == 0) {
      roots.push_back(c);
      poly = deflate(poly, c);
    }
  if (rest) *rest = poly;
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::complex<double>> numeric_eigenvalues(const RatMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = to_double(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  const auto ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

std::vector<Rational> rational_roots(std::vector<Rational> poly, std::vector<Rational>* rest) {
  trim(poly);
  return accept_roots(poly, numeric_roots(poly_div(poly, poly_gcd(poly, poly_deriv(poly)))), rest);
}

/// Rational eigenvalues of a small exact matrix; candidates come from a
/// floating-point eigensolver, which is better conditioned than the
/// companion matrix of the characteristic polynomial.
std::vector<Rational> rational_eigenvalues(const RatMatrix& m, std::vector<Rational>* rest) {
  return accept_roots(characteristic_polynomial(m), numeric_eigenvalues(m), rest);
}

// ---------------------------------------------------------------------------

namespace {

/// Triangular order of a single block (indices into `idx`), or nullopt if
/// its dependency graph has a cycle.
std::optional<std::vector<std::size_t>> block_order(const RatMatrix& m, const std::vector<std::size_t>& idx) {
  const std::size_t k = idx.size();
  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b && m(idx[a], idx[b]) != 0) ++indeg[b];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t b = 0; b < k; ++b)
    if (indeg[b] == 0) ready.push(b);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t a = ready.top();
    ready.pop();
    order.push_back(a);
    for (std::size_t b = 0; b < k; ++b)
      if (a != b && m(idx[a], idx[b]) != 0 && --indeg[b] == 0) ready.push(b);
  }
  if (order.size() != k) return std::nullopt;
  return order;
}

struct MatrixOnBasis {
  GradedBasis basis;
  RatMatrix matrix;
};

MatrixOnBasis checked_matrix(const SecondOrderOp& op, const CharVector& f, int n) {
  const FlagVerdict v = preserves_flag(op, f, n);
  if (!v.preserved)
    throw ClosureError("flag " + f.to_string() + " is not preserved at level " + std::to_string(n) +
                       ": " + to_string(v.witness->monomial) + " maps to " +
                       to_string(v.witness->offending));
  GradedBasis basis(f, n);
  OperatorMatrix om = op_matrix(op, basis);
  return {std::move(basis), std::move(om.matrix)};
}

Spectrum spectrum_of(const SecondOrderOp& op, const GradedBasis& basis, const RatMatrix& m) {
  Spectrum s;
  s.frame = op.frame();
  s.strict = true;
  std::size_t start = 0;
  while (start < basis.size()) {
    const int g = basis.grade(start);
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < basis.size() && basis.grade(i) == g; ++i) idx.push_back(i);
    start += idx.size();
    if (block_order(m, idx)) {
      for (std::size_t i : idx) s.lines.push_back({basis[i], g, m(i, i), std::nullopt});
      continue;
    }
    s.strict = false;
    RatMatrix block(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = m(idx[a], idx[b]);
    std::vector<Rational> rest;
    for (const auto& r : rational_eigenvalues(block, &rest))
      s.lines.push_back({std::nullopt, g, r, std::nullopt});
    if (rest.size() > 1) {
      IrreducibleBlock ib{g, {}, block, rest};
      for (std::size_t i : idx) ib.monomials.push_back(basis[i]);
      s.irreducible.push_back(std::move(ib));
    }
  }
  return s;
}

}  // namespace

Spectrum spectrum_from_matrix(const SecondOrderOp& op, const CharVector& f, int n) {
  const MatrixOnBasis mb = checked_matrix(op, f, n);
  return spectrum_of(op, mb.basis, mb.matrix);
}

Eigensystem eigenfunctions(const SecondOrderOp& op, const CharVector& f, int n) {
  const MatrixOnBasis mb = checked_matrix(op, f, n);
  Eigensystem out;
  out.spectrum = spectrum_of(op, mb.basis, mb.matrix);

  std::map<Rational, std::vector<const SpectralLine*>> by_value;
  for (const auto& line : out.spectrum.lines) by_value[line.eigenvalue].push_back(&line);

  const std::size_t size = mb.basis.size();
  for (const auto& [lambda, lines] : by_value) {
    RatMatrix shifted = mb.matrix;
    for (std::size_t i = 0; i < size; ++i) shifted(i, i) -= lambda;
    const auto vectors = nullspace(shifted);
    if (vectors.size() < lines.size()) out.defective.push_back({lambda, lines.size(), vectors.size()});
    const bool single = vectors.size() == 1 && lines.size() == 1;
    for (const auto& v : vectors) {
      MPoly psi(op.frame());
      int grade = 0;
      for (std::size_t i = 0; i < size; ++i)
        if (v[i] != 0) {
          psi.add_term(mb.basis[i], v[i]);
          grade = std::max(grade, mb.basis.grade(i));
        }
      const bool ok = op_apply(op, psi) == psi * lambda;
      out.residuals_zero = out.residuals_zero && ok;
      SpectralLine pair{std::nullopt, grade, lambda, std::move(psi)};
      if (single) pair.label = lines.front()->label;
      out.pairs.push_back(std::move(pair));
    }
  }
  return out;
}

std::optional<AffineFit> fit_affine(const std::vector<SpectralLine>& lines, const ModelParams& params) {
  const SpectralLine* ground = nullptr;
  for (const auto& l : lines)
    if (l.label && *l.label == QuantumNumbers{0, 0, 0, 0}) ground = &l;
  if (!ground) return std::nullopt;
  for (const auto& l : lines) {
    if (!l.label || l.eigenvalue == ground->eigenvalue) continue;
    const Rational e0 = closed_form_energy(*ground->label, params);
    const Rational e1 = closed_form_energy(*l.label, params);
    const Rational scale = (e1 - e0) / (l.eigenvalue - ground->eigenvalue);
    return AffineFit{scale, e0 - scale * ground->eigenvalue};
  }
  return std::nullopt;
}

}  // namespace f4solv
