// SPDX-License-Identifier: Apache-2.0
//
// Exact rationals, sparse polynomials in four variables and exact dense
// linear algebra. Everything else in the library is built on these types.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace f4solv {

using Rational = mpq_class;
using Integer = mpz_class;

/// Base of every error thrown by the library core.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FrameError : Error {
  using Error::Error;
};
struct MapError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

/// Accepts "p", "p/q" and "-p/q"; the result is canonical.
Rational parse_rational(std::string_view text);
/// Always "num/den", e.g. "3/1", "-1/6".
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// ---------------------------------------------------------------------------
// Variable frames

/// Which set of four variables a polynomial is written in. `Y` is the
/// Cartesian frame y_k = x_k^2 (or sin^2(beta x_k)/beta^2) used by the oracle.
enum class Frame : std::uint8_t { T, Tau, Rho, Y };

std::string_view frame_name(Frame f);
Frame parse_frame(std::string_view name);

/// Labels of the invariant variables, indexed 0..3.
inline constexpr std::array<int, 4> kVariableLabels{1, 3, 4, 6};
/// Maps a label in {1,3,4,6} to its index; throws MapError otherwise.
int variable_index(int label);

/// Exponents (p1, p3, p4, p6) of a monomial.
using ExpVec = std::array<int, 4>;

inline int weighted_grade(const ExpVec& e, const std::array<int, 4>& weights) {
  return e[0] * weights[0] + e[1] * weights[1] + e[2] * weights[2] + e[3] * weights[3];
}

std::string to_string(const ExpVec& e);

// ---------------------------------------------------------------------------
// MPoly

struct Substitution;

/// Sparse polynomial with exact coefficients; zero coefficients are never
/// stored, so equality is map equality.
class MPoly {
 public:
  using Terms = std::map<ExpVec, Rational>;

  explicit MPoly(Frame frame = Frame::T) : frame_(frame) {}

  static MPoly constant(Frame frame, const Rational& c);
  static MPoly variable(Frame frame, int index);
  static MPoly monomial(Frame frame, const ExpVec& e, const Rational& c = 1);

  Frame frame() const { return frame_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const ExpVec& e) const;

  /// Adds c*x^e, dropping the term if it cancels.
  void add_term(const ExpVec& e, const Rational& c);

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const Rational& c);

  MPoly derivative(int index) const;
  MPoly substitute(const Substitution& s) const;
  MPoly pow(int k) const;
  /// Same coefficients, different frame tag.
  MPoly retagged(Frame f) const;

  Rational eval(std::span<const Rational, 4> point) const;

  /// Evaluates over any numeric type; `conv` turns a Rational into T.
  template <class T, class Conv>
  T eval_as(const std::array<T, 4>& point, Conv&& conv) const {
    T acc = T(0);
    for (const auto& [e, c] : terms_) {
      T term = conv(c);
      for (int v = 0; v < 4; ++v)
        for (int k = 0; k < e[v]; ++k) term *= point[v];
      acc += term;
    }
    return acc;
  }

  int max_weighted_grade(const std::array<int, 4>& weights) const;

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.frame_ == b.frame_ && a.terms_ == b.terms_;
  }

 private:
  Frame frame_;
  Terms terms_;
};

MPoly operator+(MPoly a, const MPoly& b);
MPoly operator-(MPoly a, const MPoly& b);
MPoly operator-(MPoly a);
MPoly operator*(const MPoly& a, const MPoly& b);
MPoly operator*(MPoly a, const Rational& c);
MPoly operator*(const Rational& c, MPoly a);

// Free-function spellings of the ring operations.
inline MPoly poly_add(const MPoly& a, const MPoly& b) { return a + b; }
inline MPoly poly_mul(const MPoly& a, const MPoly& b) { return a * b; }
inline MPoly poly_derivative(const MPoly& p, int index) { return p.derivative(index); }
inline Rational poly_eval(const MPoly& p, std::span<const Rational, 4> x) { return p.eval(x); }

/// Human readable, e.g. "2*t1^2*t3 - 1/6*t4".
std::string to_string(const MPoly& p);

/// Images of the four `source` variables, written in the `target` frame.
/// A missing image is a MapError when the variable is actually used.
struct Substitution {
  Frame source = Frame::T;
  Frame target = Frame::T;
  std::array<std::optional<MPoly>, 4> images;

  static Substitution identity(Frame f);
};

inline MPoly poly_substitute(const MPoly& p, const Substitution& s) { return p.substitute(s); }

/// s2 after s1: x -> s2(s1(x)). Requires s1.target == s2.source.
Substitution compose(const Substitution& first, const Substitution& second);

// ---------------------------------------------------------------------------
// Dense exact linear algebra

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> multiply(std::span<const Rational> v) const;
  bool is_zero() const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// One particular solution of m*x = rhs (free variables set to zero), or
/// nullopt when the system is inconsistent. Overdetermined systems are fine.
std::optional<std::vector<Rational>> solve_linear_exact(const RatMatrix& m,
                                                        std::span<const Rational> rhs);

/// Exact basis of {x : m*x = 0}; one vector per free column, with a 1 in
/// that column. Empty when m has full column rank.
std::vector<std::vector<Rational>> nullspace(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);

}  // namespace f4solv
