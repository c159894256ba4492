// SPDX-License-Identifier: Apache-2.0

#include "graded_basis.hpp"

#include <algorithm>
#include <sstream>

namespace f4solv {

CharVector::CharVector(int a3, int a4, int a6) : w_{1, a3, a4, a6} {
  if (a3 < 1 || a4 < 1 || a6 < 1) throw ParseError("characteristic vector components must be >= 1");
}

CharVector CharVector::from_array(const std::array<int, 4>& w) {
  if (w[0] != 1) throw ParseError("characteristic vector must start with 1");
  return CharVector(w[1], w[2], w[3]);
}

CharVector CharVector::parse(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("bad characteristic vector '" + text + "'");
    }
  }
  if (v.size() == 3) return CharVector(v[0], v[1], v[2]);
  if (v.size() == 4) return from_array({v[0], v[1], v[2], v[3]});
  throw ParseError("characteristic vector needs 3 or 4 components: '" + text + "'");
}

std::string CharVector::to_string() const {
  std::ostringstream os;
  os << '(' << w_[0] << ',' << w_[1] << ',' << w_[2] << ',' << w_[3] << ')';
  return os.str();
}

bool CharVector::strictly_below(const CharVector& o) const {
  bool le = true;
  for (int i = 0; i < 4; ++i) le = le && w_[i] <= o.w_[i];
  return le && w_ != o.w_;
}

GradedBasis::GradedBasis(CharVector f, int level) : f_(f), level_(level) {
  if (level < 0) throw ParseError("flag level must be non-negative");
  const auto& w = f_.weights();
  for (int p6 = 0; p6 * w[3] <= level; ++p6)
    for (int p4 = 0; p4 * w[2] + p6 * w[3] <= level; ++p4)
      for (int p3 = 0; p3 * w[1] + p4 * w[2] + p6 * w[3] <= level; ++p3)
        for (int p1 = 0; p1 + p3 * w[1] + p4 * w[2] + p6 * w[3] <= level; ++p1)
          monomials_.push_back({p1, p3, p4, p6});
  std::sort(monomials_.begin(), monomials_.end(),
            [this](const ExpVec& a, const ExpVec& b) { return precedes(a, b); });
}

bool GradedBasis::precedes(const ExpVec& a, const ExpVec& b) const {
  const int ga = f_.grade(a), gb = f_.grade(b);
  if (ga != gb) return ga < gb;
  return a > b;
}

std::optional<std::size_t> GradedBasis::index_of(const ExpVec& e) const {
  auto it = std::lower_bound(monomials_.begin(), monomials_.end(), e,
                             [this](const ExpVec& a, const ExpVec& b) { return precedes(a, b); });
  if (it != monomials_.end() && *it == e) return static_cast<std::size_t>(it - monomials_.begin());
  return std::nullopt;
}

std::size_t count_monomials_of_grade(const CharVector& f, int grade) {
  // Coefficient of x^grade in prod_i 1/(1 - x^{w_i}).
  if (grade < 0) return 0;
  std::vector<std::size_t> ways(grade + 1, 0);
  ways[0] = 1;
  for (int w : f.weights())
    for (int g = w; g <= grade; ++g) ways[g] += ways[g - w];
  return ways[grade];
}

}  // namespace f4solv
