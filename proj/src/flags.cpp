// SPDX-License-Identifier: Apache-2.0

#include "flags.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace f4solv {

const MPoly& ImageCache::image(const ExpVec& e) {
  auto it = images_.find(e);
  if (it == images_.end()) it = images_.emplace(e, op_apply(op_, MPoly::monomial(op_.frame(), e))).first;
  return it->second;
}

FlagVerdict preserves_flag(ImageCache& cache, const CharVector& f, int n) {
  const GradedBasis basis(f, n);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const int g = basis.grade(j);
    for (const auto& [e, c] : cache.image(basis[j]).terms())
      if (f.grade(e) > g) return {false, ClosureWitness{basis[j], e, c}};
  }
  return {};
}

FlagVerdict preserves_flag(const SecondOrderOp& op, const CharVector& f, int n) {
  ImageCache cache(op);
  return preserves_flag(cache, f, n);
}

TriangularVerdict is_triangular(const SecondOrderOp& op, const CharVector& f, int n) {
  TriangularVerdict out;
  const GradedBasis basis(f, n);
  ImageCache cache(op);
  const FlagVerdict flag = preserves_flag(cache, f, n);
  if (!flag.preserved) {
    out.closure_witness = flag.witness;
    return out;
  }
  out.block = true;
  out.canonical = true;

  const std::size_t size = basis.size();
  // preds[j]: same-grade rows that must precede column j.
  std::vector<std::vector<std::size_t>> preds(size), succs(size);
  std::map<std::pair<std::size_t, std::size_t>, Rational> entries;
  for (std::size_t j = 0; j < size; ++j) {
    for (const auto& [e, c] : cache.image(basis[j]).terms()) {
      const std::size_t i = *basis.index_of(e);
      if (i == j || basis.grade(i) != basis.grade(j)) continue;
      preds[j].push_back(i);
      succs[i].push_back(j);
      entries[{i, j}] = c;
      if (i > j) out.canonical = false;
    }
  }

  std::vector<std::size_t> indeg(size);
  for (std::size_t j = 0; j < size; ++j) indeg[j] = preds[j].size();
  // Grades are contiguous in the canonical order, so a global Kahn pass
  // keyed on canonical index never mixes grades.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t j = 0; j < size; ++j)
    if (indeg[j] == 0) ready.push(j);
  std::vector<std::size_t> order;
  std::vector<bool> placed(size, false);
  while (!ready.empty()) {
    const std::size_t j = ready.top();
    ready.pop();
    order.push_back(j);
    placed[j] = true;
    for (std::size_t k : succs[j])
      if (--indeg[k] == 0) ready.push(k);
  }

  if (order.size() == size) {
    out.strict = true;
    for (std::size_t j : order) out.order.push_back(basis[j]);
    return out;
  }

  // Walk predecessors inside the unplaced set until a node repeats; that loop
  // is a cycle. Report its edge that runs backwards in canonical order.
  std::size_t start = 0;
  while (placed[start]) ++start;
  std::vector<std::size_t> path;
  std::vector<int> seen(size, -1);
  std::size_t cur = start;
  while (seen[cur] < 0) {
    seen[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    std::size_t next = cur;
    for (std::size_t p : preds[cur])
      if (!placed[p]) {
        next = p;
        break;
      }
    cur = next;
  }
  const std::vector<std::size_t> cycle(path.begin() + seen[cur], path.end());
  // Consecutive cycle nodes (a, b): b is a predecessor of a, so entry (b, a).
  std::optional<TriangularViolation> fallback;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const std::size_t col = cycle[k];
    const std::size_t row = cycle[(k + 1) % cycle.size()];
    TriangularViolation v{basis[col], basis[row], entries.at({row, col})};
    if (row > col) {
      out.violation = v;
      break;
    }
    if (!fallback) fallback = v;
  }
  if (!out.violation) out.violation = fallback;
  return out;
}

namespace {

bool component_less(const CharVector& a, const CharVector& b) {
  const auto& wa = a.weights();
  const auto& wb = b.weights();
  const int sa = wa[1] + wa[2] + wa[3], sb = wb[1] + wb[2] + wb[3];
  if (sa != sb) return sa < sb;
  return wa < wb;
}

}  // namespace

FlagScan scan_characteristic_vectors(const SecondOrderOp& op, int bound, int level) {
  FlagScan scan;
  scan.bound = bound;
  scan.level = level;
  ImageCache cache(op);
  for (int a3 = 1; a3 <= bound; ++a3)
    for (int a4 = 1; a4 <= bound; ++a4)
      for (int a6 = 1; a6 <= bound; ++a6) {
        const CharVector f(a3, a4, a6);
        const FlagVerdict v = preserves_flag(cache, f, level);
        if (v.preserved) scan.preserved.push_back(f);
        else scan.witnesses.emplace(f, *v.witness);
      }
  std::sort(scan.preserved.begin(), scan.preserved.end(), component_less);
  for (const auto& f : scan.preserved) {
    const bool dominated = std::any_of(scan.preserved.begin(), scan.preserved.end(),
                                       [&](const CharVector& g) { return g.strictly_below(f); });
    if (!dominated) scan.minimal.push_back(f);
  }
  return scan;
}

const std::vector<CharVector>& listed_flags() {
  static const std::vector<CharVector> list{
      {2, 2, 3}, {2, 3, 4}, {2, 3, 5}, {3, 3, 5}, {4, 4, 6}, {4, 4, 7}, {5, 5, 8},
      {5, 5, 9}, {5, 7, 9}, {6, 6, 9}, {6, 6, 10}, {6, 6, 11}, {6, 7, 10}, {7, 7, 11}};
  return list;
}

namespace {

std::vector<Rational> height_grid(int max_height) {
  std::set<Rational> values;
  for (int p = 1; p <= max_height; ++p)
    for (int d = 1; d <= max_height; ++d) {
      Rational v(p, d);
      v.canonicalize();
      values.insert(v);
    }
  std::vector<Rational> out;
  for (const auto& v : values) {
    out.push_back(v);
    out.push_back(-v);
  }
  // Small absolute values first, positive before negative.
  std::stable_sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) {
    return abs(a) < abs(b);
  });
  return out;
}

Rational* param_slot(AmbiguityParams& p, int k) {
  switch (k) {
    case 0: return &p.a;
    case 1: return &p.b1;
    case 2: return &p.b2;
    case 3: return &p.c1;
    case 4: return &p.c2;
    case 5: return &p.c3;
    default: return &p.c4;
  }
}

}  // namespace

AmbiguitySearch search_ambiguity_flags(const SecondOrderOp& op, int level, int max_height,
                                       std::size_t pair_budget) {
  if (op.frame() != Frame::T) throw FrameError("ambiguity search expects a t-frame operator");
  AmbiguitySearch out;
  const std::vector<Rational> grid = height_grid(max_height);
  std::ostringstream desc;
  const std::size_t all_pairs = 21 * grid.size() * grid.size();
  desc << "heights <= " << max_height << " (" << grid.size() << " nonzero values); single parameters, then ";
  if (pair_budget >= all_pairs) desc << "all " << all_pairs << " pairs";
  else desc << "the first " << pair_budget << " of " << all_pairs << " pairs";
  desc << "; level " << level << ", hits confirmed at level max(" << level
       << ", 2*a6)";
  out.grid = desc.str();

  std::vector<CharVector> targets;
  for (const auto& f : listed_flags())
    if (f != kMinimalFlag) targets.push_back(f);
  std::vector<bool> found(targets.size(), false);

  auto try_params = [&](const AmbiguityParams& p) {
    ++out.candidates_tried;
    const SecondOrderOp moved = op_change_variables(op, ambiguity_map(p));
    ImageCache cache(moved);
    if (preserves_flag(cache, kMinimalFlag, level).preserved) return;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (found[k]) continue;
      // Large weights leave few monomials at low levels, so confirm deeper.
      const int deep = std::max(level, 2 * targets[k].weights()[3]);
      if (preserves_flag(cache, targets[k], level).preserved &&
          preserves_flag(cache, targets[k], deep).preserved) {
        found[k] = true;
        out.hits.push_back({targets[k], p});
      }
    }
  };
  auto all_found = [&] { return std::all_of(found.begin(), found.end(), [](bool b) { return b; }); };

  for (int k = 0; k < 7 && !all_found(); ++k)
    for (const auto& v : grid) {
      AmbiguityParams p{};
      *param_slot(p, k) = v;
      try_params(p);
    }
  std::size_t pairs = 0;
  for (int k = 0; k < 7 && !all_found() && pairs < pair_budget; ++k)
    for (int l = k + 1; l < 7 && pairs < pair_budget; ++l)
      for (const auto& v : grid)
        for (const auto& w : grid) {
          if (pairs >= pair_budget || all_found()) break;
          AmbiguityParams p{};
          *param_slot(p, k) = v;
          *param_slot(p, l) = w;
          try_params(p);
          ++pairs;
        }

  for (std::size_t k = 0; k < targets.size(); ++k)
    if (!found[k]) out.not_found.push_back(targets[k]);
  std::sort(out.hits.begin(), out.hits.end(),
            [](const AmbiguityHit& a, const AmbiguityHit& b) { return component_less(a.flag, b.flag); });
  return out;
}

}  // namespace f4solv
