// SPDX-License-Identifier: Apache-2.0

#include "exact_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace f4solv {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  auto valid_int = [](std::string_view v) {
    if (!v.empty() && (v.front() == '-' || v.front() == '+')) v.remove_prefix(1);
    return !v.empty() &&
           std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
    throw ParseError("not a rational: '" + std::string(text) + "'");
  if (num.front() == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

std::string_view frame_name(Frame f) {
  switch (f) {
    case Frame::T: return "t";
    case Frame::Tau: return "tau";
    case Frame::Rho: return "rho";
    case Frame::Y: return "y";
  }
  return "?";
}

Frame parse_frame(std::string_view name) {
  if (name == "t") return Frame::T;
  if (name == "tau") return Frame::Tau;
  if (name == "rho") return Frame::Rho;
  if (name == "y") return Frame::Y;
  throw ParseError("unknown frame '" + std::string(name) + "'");
}

int variable_index(int label) {
  for (int i = 0; i < 4; ++i)
    if (kVariableLabels[i] == label) return i;
  throw MapError("no invariant variable with label " + std::to_string(label));
}

std::string to_string(const ExpVec& e) {
  std::ostringstream os;
  os << '(' << e[0] << ',' << e[1] << ',' << e[2] << ',' << e[3] << ')';
  return os.str();
}

namespace {

void require_same_frame(const MPoly& a, const MPoly& b, const char* what) {
  if (a.frame() != b.frame())
    throw FrameError(std::string(what) + ": frame mismatch (" + std::string(frame_name(a.frame())) +
                     " vs " + std::string(frame_name(b.frame())) + ")");
}

std::string variable_name(Frame f, int index) {
  if (f == Frame::Y) return "y" + std::to_string(index + 1);
  return std::string(frame_name(f)) + std::to_string(kVariableLabels[index]);
}

}  // namespace

MPoly MPoly::constant(Frame frame, const Rational& c) {
  MPoly p(frame);
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

MPoly MPoly::variable(Frame frame, int index) {
  ExpVec e{0, 0, 0, 0};
  e.at(index) = 1;
  return monomial(frame, e);
}

MPoly MPoly::monomial(Frame frame, const ExpVec& e, const Rational& c) {
  MPoly p(frame);
  p.add_term(e, c);
  return p;
}

Rational MPoly::coeff(const ExpVec& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MPoly::add_term(const ExpVec& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

MPoly& MPoly::operator+=(const MPoly& o) {
  require_same_frame(*this, o, "poly_add");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  require_same_frame(*this, o, "poly_sub");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MPoly& MPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
MPoly operator-(MPoly a) { return a *= Rational(-1); }
MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
MPoly operator*(const Rational& c, MPoly a) { return a *= c; }

MPoly operator*(const MPoly& a, const MPoly& b) {
  require_same_frame(a, b, "poly_mul");
  MPoly out(a.frame());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
  return out;
}

MPoly MPoly::derivative(int index) const {
  MPoly out(frame_);
  for (const auto& [e, c] : terms_) {
    if (e.at(index) == 0) continue;
    ExpVec d = e;
    d[index] -= 1;
    out.add_term(d, c * e[index]);
  }
  return out;
}

MPoly MPoly::pow(int k) const {
  MPoly out = constant(frame_, 1);
  MPoly base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return out;
}

MPoly MPoly::retagged(Frame f) const {
  MPoly out(f);
  out.terms_ = terms_;
  return out;
}

MPoly MPoly::substitute(const Substitution& s) const {
  if (s.source != frame_)
    throw FrameError("poly_substitute: polynomial is in frame " + std::string(frame_name(frame_)) +
                     ", substitution expects " + std::string(frame_name(s.source)));
  std::array<int, 4> max_exp{0, 0, 0, 0};
  for (const auto& [e, c] : terms_)
    for (int v = 0; v < 4; ++v) max_exp[v] = std::max(max_exp[v], e[v]);

  std::array<std::vector<MPoly>, 4> powers;
  for (int v = 0; v < 4; ++v) {
    if (max_exp[v] == 0) continue;
    if (!s.images[v])
      throw MapError("poly_substitute: no image for variable " + variable_name(frame_, v));
    if (s.images[v]->frame() != s.target)
      throw MapError("poly_substitute: image of " + variable_name(frame_, v) +
                     " is not in the target frame");
    powers[v].reserve(max_exp[v] + 1);
    powers[v].push_back(MPoly::constant(s.target, 1));
    for (int k = 1; k <= max_exp[v]; ++k) powers[v].push_back(powers[v].back() * *s.images[v]);
  }

  MPoly out(s.target);
  for (const auto& [e, c] : terms_) {
    MPoly term = MPoly::constant(s.target, c);
    for (int v = 0; v < 4; ++v)
      if (e[v] > 0) term = term * powers[v][e[v]];
    out += term;
  }
  return out;
}

Rational MPoly::eval(std::span<const Rational, 4> point) const {
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < e[v]; ++k) term *= point[v];
    acc += term;
  }
  return acc;
}

int MPoly::max_weighted_grade(const std::array<int, 4>& weights) const {
  int g = -1;
  for (const auto& [e, c] : terms_) g = std::max(g, weighted_grade(e, weights));
  return g;
}

std::string to_string(const MPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    const bool is_const = e == ExpVec{0, 0, 0, 0};
    bool need_star = false;
    if (mag != 1 || is_const) {
      os << mag.get_str();
      need_star = true;
    }
    for (int v = 0; v < 4; ++v) {
      if (e[v] == 0) continue;
      if (need_star) os << '*';
      os << variable_name(p.frame(), v);
      if (e[v] > 1) os << '^' << e[v];
      need_star = true;
    }
  }
  return os.str();
}

Substitution Substitution::identity(Frame f) {
  Substitution s{f, f, {}};
  for (int v = 0; v < 4; ++v) s.images[v] = MPoly::variable(f, v);
  return s;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  if (first.target != second.source)
    throw FrameError("compose: frame mismatch between substitutions");
  Substitution out{first.source, second.target, {}};
  for (int v = 0; v < 4; ++v)
    if (first.images[v]) out.images[v] = first.images[v]->substitute(second);
  return out;
}

// ---------------------------------------------------------------------------

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Rational> RatMatrix::multiply(std::span<const Rational> v) const {
  if (v.size() != cols_) throw std::invalid_argument("RatMatrix::multiply: dimension mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational acc = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn((*this)(r, c)) != 0) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

namespace {

/// Fraction-free row echelon form of an integer matrix. Entries after step k
/// are k x k minors of the input, so every division is exact.
struct Echelon {
  std::vector<std::vector<Integer>> rows;
  std::vector<std::size_t> pivot_cols;
};

Echelon bareiss(std::vector<std::vector<Integer>> a, std::size_t ncols) {
  const std::size_t nrows = a.size();
  Echelon out;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && a[p][c] == 0) ++p;
    if (p == nrows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < nrows; ++i) {
      for (std::size_t j = c + 1; j < ncols; ++j) {
        Integer v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(v);
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    out.pivot_cols.push_back(c);
    ++r;
  }
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

/// Scales each row by the lcm of its denominators.
std::vector<std::vector<Integer>> integer_rows(const RatMatrix& m, std::span<const Rational> rhs) {
  const bool aug = !rhs.empty();
  std::vector<std::vector<Integer>> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    if (aug) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), rhs[r].get_den_mpz_t());
    auto& row = out[r];
    row.reserve(m.cols() + (aug ? 1 : 0));
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).get_num() * (l / m(r, c).get_den()));
    if (aug) row.push_back(rhs[r].get_num() * (l / rhs[r].get_den()));
  }
  return out;
}

/// Back substitution on an echelon form; `rhs_col` is the augmented column
/// or npos for a homogeneous system, `free_values` fixes the free columns.
std::vector<Rational> back_substitute(const Echelon& e, std::size_t nvars, std::size_t rhs_col,
                                      const std::vector<Rational>& free_values) {
  std::vector<Rational> x = free_values;
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const std::size_t pc = e.pivot_cols[k];
    const auto& row = e.rows[k];
    Rational acc = rhs_col == std::string::npos ? Rational(0) : Rational(row[rhs_col]);
    for (std::size_t j = pc + 1; j < nvars; ++j)
      if (row[j] != 0 && x[j] != 0) acc -= Rational(row[j]) * x[j];
    x[pc] = acc / Rational(row[pc]);
  }
  return x;
}

}  // namespace

std::optional<std::vector<Rational>> solve_linear_exact(const RatMatrix& m,
                                                        std::span<const Rational> rhs) {
  if (rhs.size() != m.rows())
    throw std::invalid_argument("solve_linear_exact: rhs size does not match row count");
  const std::size_t n = m.cols();
  std::vector<Rational> padded_rhs(rhs.begin(), rhs.end());
  // An all-zero rhs would drop the augmented column; keep it explicit.
  auto rows = integer_rows(m, padded_rhs);
  if (rows.empty()) return std::vector<Rational>(n);
  Echelon e = bareiss(std::move(rows), n + 1);
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == n) return std::nullopt;
  return back_substitute(e, n, n, std::vector<Rational>(n));
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& m) {
  const std::size_t n = m.cols();
  Echelon e = bareiss(integer_rows(m, {}), n);
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> seed(n);
    seed[f] = 1;
    basis.push_back(back_substitute(e, n, std::string::npos, seed));
  }
  return basis;
}

std::size_t rank(const RatMatrix& m) { return bareiss(integer_rows(m, {}), m.cols()).pivot_cols.size(); }

}  // namespace f4solv
