// SPDX-License-Identifier: Apache-2.0
//
// Characteristic vectors and the graded monomial bases of flag spaces.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exact_core.hpp"

namespace f4solv {

/// Weights (1, a3, a4, a6) of a flag; the first weight is always 1.
class CharVector {
 public:
  CharVector(int a3, int a4, int a6);
  /// From a full 4-vector; throws ParseError unless w[0] == 1 and all >= 1.
  static CharVector from_array(const std::array<int, 4>& w);
  /// Parses "1,2,2,3" or the three trailing weights "2,2,3".
  static CharVector parse(const std::string& text);

  const std::array<int, 4>& weights() const { return w_; }
  int grade(const ExpVec& e) const { return weighted_grade(e, w_); }
  std::string to_string() const;

  /// Componentwise <= and not equal.
  bool strictly_below(const CharVector& o) const;

  friend auto operator<=>(const CharVector&, const CharVector&) = default;

 private:
  std::array<int, 4> w_;
};

/// The canonical flag of both models.
inline const CharVector kMinimalFlag{2, 2, 3};

/// Monomials with grade <= level, ordered by grade ascending and then
/// lexicographically descending on (p1, p3, p4, p6); so t1^2 < t3 < t4.
class GradedBasis {
 public:
  GradedBasis(CharVector f, int level);

  const CharVector& charvec() const { return f_; }
  int level() const { return level_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<ExpVec>& monomials() const { return monomials_; }
  const ExpVec& operator[](std::size_t i) const { return monomials_[i]; }
  std::optional<std::size_t> index_of(const ExpVec& e) const;
  int grade(std::size_t i) const { return f_.grade(monomials_[i]); }

  /// Canonical order as a strict weak ordering on monomials.
  bool precedes(const ExpVec& a, const ExpVec& b) const;

 private:
  CharVector f_;
  int level_;
  std::vector<ExpVec> monomials_;
};

inline GradedBasis enumerate_basis(const CharVector& f, int level) { return GradedBasis(f, level); }

/// Number of monomials of grade exactly `grade`, by weighted-partition
/// counting (independent of the enumeration above).
std::size_t count_monomials_of_grade(const CharVector& f, int grade);

}  // namespace f4solv
