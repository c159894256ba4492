// SPDX-License-Identifier: Apache-2.0
//
// Flag preservation, triangularity and characteristic-vector scans.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffop.hpp"
#include "graded_basis.hpp"
#include "models_f4.hpp"

namespace f4solv {

struct FlagVerdict {
  bool preserved = true;
  /// Lowest-grade monomial whose image raises the grade.
  std::optional<ClosureWitness> witness;
};

/// True iff op maps every P_k into P_k for k <= n, i.e. no basis monomial
/// of P_n has an image term of higher grade.
FlagVerdict preserves_flag(const SecondOrderOp& op, const CharVector& f, int n);

/// Matrix entry (row monomial in the image of the column monomial) that
/// blocks a triangular ordering.
struct TriangularViolation {
  ExpVec column;
  ExpVec row;
  Rational coefficient;
};

struct TriangularVerdict {
  /// Grade non-increasing (block triangular by grade).
  bool block = false;
  /// Some grade-compatible ordering of the basis makes the matrix upper triangular.
  bool strict = false;
  /// The canonical ordering already works.
  bool canonical = false;
  /// A triangularizing order when strict, otherwise empty.
  std::vector<ExpVec> order;
  std::optional<ClosureWitness> closure_witness;
  std::optional<TriangularViolation> violation;
};

/// Within each grade the images define a dependency graph; the operator is
/// strictly triangular iff every such graph is acyclic. The order is found by
/// a topological sort tie-broken by canonical position.
TriangularVerdict is_triangular(const SecondOrderOp& op, const CharVector& f, int n);

/// Caches op images of monomials so that many flags can be checked cheaply.
class ImageCache {
 public:
  explicit ImageCache(const SecondOrderOp& op) : op_(op) {}
  const MPoly& image(const ExpVec& e);
  const SecondOrderOp& op() const { return op_; }

 private:
  const SecondOrderOp& op_;
  std::map<ExpVec, MPoly> images_;
};

FlagVerdict preserves_flag(ImageCache& cache, const CharVector& f, int n);

struct FlagScan {
  int bound = 0;
  int level = 0;
  /// Sorted by component sum, then lexicographically.
  std::vector<CharVector> preserved;
  /// Preserved vectors with no preserved vector strictly below them.
  std::vector<CharVector> minimal;
  /// Failure witness for every rejected vector.
  std::map<CharVector, ClosureWitness> witnesses;
};

FlagScan scan_characteristic_vectors(const SecondOrderOp& op, int bound, int level);

/// The flags listed for the rational model under various choices of variables.
const std::vector<CharVector>& listed_flags();

struct AmbiguityHit {
  CharVector flag;
  AmbiguityParams params;
};

struct AmbiguitySearch {
  std::string grid;
  std::size_t candidates_tried = 0;
  std::vector<AmbiguityHit> hits;
  std::vector<CharVector> not_found;
};

/// Deterministic search over ambiguity parameters of height <= max_height:
/// one nonzero parameter first, then pairs. A hit is a transformed operator
/// that loses (1,2,2,3) but preserves a flag of the list at `level` and at
/// level 2*a6. The first hit per flag is kept.
AmbiguitySearch search_ambiguity_flags(const SecondOrderOp& op, int level, int max_height = 4,
                                       std::size_t pair_budget = 20000);

}  // namespace f4solv
