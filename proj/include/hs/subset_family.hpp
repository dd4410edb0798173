#pragma once

// Layered random partition of a coin set.
//
// Level 0 splits the ground set into 2^lq cells by uniform labels
// (lq = ceil(log2 q)). Each cell j at level i-1 has children 2j-1 and 2j at
// level i: by fair coin flips for i < ceil(2 log2 q), by deterministic
// halving (first ceil(|cell|/2) coins to 2j-1) from there up to
// depth = ceil(3 log2 n). Only nonempty cells are stored; every index in
// 1..2^{lq+i} is addressable and reads back empty when absent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hs/errors.hpp"
#include "hs/instances.hpp"
#include "hs/random.hpp"

namespace hs {

using CellIndex = std::uint64_t;

// Smallest L >= 0 with 2^L >= x, for real x > 0.
inline int ceil_log2(double x) {
  int L = 0;
  while (std::ldexp(1.0, L) < x) ++L;
  return L;
}

struct Cell {
  CellIndex index;
  std::vector<CoinId> coins;
};

class SubsetFamily {
 public:
  double q() const noexcept { return q_; }
  std::uint32_t n() const noexcept { return n_; }
  int lq() const noexcept { return lq_; }
  // First level split deterministically: ceil(2 log2 q).
  int split_start() const noexcept { return split_start_; }
  // Last level split at random, clamped to depth.
  int random_levels() const noexcept { return std::min(split_start_ - 1, depth_); }
  int depth() const noexcept { return depth_; }
  const std::vector<CoinId>& ground() const noexcept { return ground_; }

  CellIndex cell_count(int level) const { return CellIndex{1} << (lq_ + level); }

  const std::vector<Cell>& cells(int level) const { return levels_.at(level); }

  std::span<const CoinId> cell(int level, CellIndex j) const {
    const auto& row = levels_.at(level);
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Cell& c, CellIndex v) { return c.index < v; });
    if (it == row.end() || it->index != j) return {};
    return it->coins;
  }

 private:
  friend SubsetFamily build_family(std::vector<CoinId> ground, double q, std::uint32_t n,
                                   Rng& rng);
  double q_ = 2;
  std::uint32_t n_ = 1;
  int lq_ = 1, split_start_ = 2, depth_ = 0;
  std::vector<CoinId> ground_;
  std::vector<std::vector<Cell>> levels_;
};

// Throws InvalidArgument if q < 2, q > max(n, 2), |ground| > n, or the
// deepest index would not fit in 62 bits.
inline SubsetFamily build_family(std::vector<CoinId> ground, double q, std::uint32_t n,
                                 Rng& rng) {
  if (!(q >= 2)) throw InvalidArgument("family parameter q must be at least 2");
  if (n < 1 || ground.size() > n) throw InvalidArgument("ground set larger than n");
  if (q > std::max<double>(n, 2)) throw InvalidArgument("family parameter q exceeds n");
  std::sort(ground.begin(), ground.end());
  if (std::adjacent_find(ground.begin(), ground.end()) != ground.end())
    throw InvalidArgument("ground set has duplicates");

  SubsetFamily f;
  f.q_ = q;
  f.n_ = n;
  f.lq_ = ceil_log2(q);
  f.split_start_ = ceil_log2(q * q);
  const double n3 = static_cast<double>(n) * n * n;
  f.depth_ = ceil_log2(n3);
  if (f.lq_ + f.depth_ > 62) throw InvalidArgument("family too deep for 64-bit cell indices");
  f.ground_ = ground;
  f.levels_.resize(f.depth_ + 1);

  // level 0
  {
    const std::uint64_t width = std::uint64_t{1} << f.lq_;
    std::vector<std::pair<CellIndex, CoinId>> tagged;
    tagged.reserve(ground.size());
    for (CoinId c : ground) tagged.emplace_back(1 + uniform_below(rng, width), c);
    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    auto& row = f.levels_[0];
    for (const auto& [j, c] : tagged) {
      if (row.empty() || row.back().index != j) row.push_back({j, {}});
      row.back().coins.push_back(c);
    }
  }

  BitSource bits(rng);
  for (int i = 1; i <= f.depth_; ++i) {
    const bool random = i < f.split_start_;
    auto& row = f.levels_[i];
    for (const Cell& parent : f.levels_[i - 1]) {
      Cell first{2 * parent.index - 1, {}}, second{2 * parent.index, {}};
      if (random) {
        for (CoinId c : parent.coins) (bits.next() ? second : first).coins.push_back(c);
      } else {
        const std::size_t half = (parent.coins.size() + 1) / 2;
        first.coins.assign(parent.coins.begin(), parent.coins.begin() + half);
        second.coins.assign(parent.coins.begin() + half, parent.coins.end());
      }
      if (!first.coins.empty()) row.push_back(std::move(first));
      if (!second.coins.empty()) row.push_back(std::move(second));
    }
  }
  return f;
}

// Empty string when every structural invariant holds, otherwise a description
// of the first violation: level 0 partitions the ground set, children
// partition their parent, deterministic levels halve with the larger half
// first, indices lie in 1..2^{lq+i}, and deepest cells hold at most one coin.
inline std::string family_violation(const SubsetFamily& f) {
  auto sorted = [](std::vector<CoinId> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  std::vector<CoinId> all;
  for (const Cell& c : f.cells(0)) all.insert(all.end(), c.coins.begin(), c.coins.end());
  if (sorted(all) != f.ground()) return "level 0 does not partition the ground set";
  for (int i = 0; i <= f.depth(); ++i) {
    CellIndex prev = 0;
    for (const Cell& c : f.cells(i)) {
      if (c.index < 1 || c.index > f.cell_count(i))
        return "cell index out of range at level " + std::to_string(i);
      if (c.index <= prev) return "cells out of order at level " + std::to_string(i);
      prev = c.index;
    }
  }
  for (int i = 1; i <= f.depth(); ++i) {
    for (const Cell& parent : f.cells(i - 1)) {
      auto a = f.cell(i, 2 * parent.index - 1);
      auto b = f.cell(i, 2 * parent.index);
      std::vector<CoinId> u(a.begin(), a.end());
      u.insert(u.end(), b.begin(), b.end());
      if (sorted(u) != sorted(parent.coins))
        return "children do not partition parent at level " + std::to_string(i);
      if (i >= f.split_start() && a.size() != (parent.coins.size() + 1) / 2)
        return "deterministic split not halving at level " + std::to_string(i);
    }
    std::size_t count = 0;
    for (const Cell& c : f.cells(i)) count += c.coins.size();
    if (count != f.ground().size()) return "level " + std::to_string(i) + " loses coins";
  }
  for (const Cell& c : f.cells(f.depth()))
    if (c.coins.size() > 1) return "deepest cell holds more than one coin";
  return {};
}

// Working labels 1..|J| for the surviving cells of one level, and the
// original indices of their children one level down.
class LabelMap {
 public:
  explicit LabelMap(std::vector<CellIndex> originals) : orig_(std::move(originals)) {
    std::sort(orig_.begin(), orig_.end());
  }

  std::size_t size() const noexcept { return orig_.size(); }
  bool empty() const noexcept { return orig_.empty(); }
  CellIndex original(std::size_t r) const { return orig_.at(r - 1); }

  // Child index for working child label j in 1..2|J|: (r, odd) -> 2J_r - 1,
  // (r, even) -> 2J_r with r = ceil(j/2).
  CellIndex child(std::size_t j) const {
    const CellIndex parent = original((j + 1) / 2);
    return j % 2 == 1 ? 2 * parent - 1 : 2 * parent;
  }

  // Working label of an original index, 0 if not present.
  std::size_t working(CellIndex original_index) const {
    auto it = std::lower_bound(orig_.begin(), orig_.end(), original_index);
    return it != orig_.end() && *it == original_index ? (it - orig_.begin()) + 1 : 0;
  }

  const std::vector<CellIndex>& originals() const noexcept { return orig_; }

 private:
  std::vector<CellIndex> orig_;
};

// ---------------------------------------------------------------------------
// White-box audit against ground truth (charges no queries).

struct LevelAudit {
  int level = 0;
  std::size_t max_load = 0;     // most counterfeit coins in one cell
  double load_bound = 0;        // (i + 2 log2 q) / i
  std::size_t multi_cells = 0;  // cells holding >= 2 counterfeit coins
  double multi_bound = 0;       // 2^{-(i+1)} q + q^{3/4}
  bool load_ok = true;
  bool multi_ok = true;
};

struct AuditReport {
  double q = 0;
  std::size_t counterfeit = 0;
  std::size_t light = 0;  // counterfeit coins with |w| < alpha
  bool hypothesis_ok = true;  // counterfeit <= q and light <= q/2

  std::size_t level0_bad = 0;  // light or sharing a level-0 cell
  double level0_bound = 0;     // 5q/6
  bool a_ok = true;
  std::vector<LevelAudit> levels;
  bool b_ok = true;
  bool c_ok = true;
  bool d_ok = true;  // levels >= ceil(2 log q) - 1 hold <= 1 counterfeit per cell
  bool e_ok = true;  // deepest cells hold <= 1 coin
  bool structure_ok = true;

  bool all_ok() const { return a_ok && b_ok && c_ok && d_ok && e_ok && structure_ok; }
};

inline AuditReport audit_family(const SubsetFamily& f, const std::function<double(CoinId)>& weight,
                                double alpha) {
  AuditReport r;
  r.q = f.q();
  const double log_q = std::log2(f.q());
  auto counterfeit_in = [&](const Cell& c) {
    std::size_t k = 0;
    for (CoinId id : c.coins) k += weight(id) != 0;
    return k;
  };
  for (CoinId id : f.ground()) {
    const double w = weight(id);
    if (w == 0) continue;
    ++r.counterfeit;
    if (std::abs(w) < alpha) ++r.light;
  }
  r.hypothesis_ok = r.counterfeit <= f.q() && r.light <= f.q() / 2;

  r.level0_bound = 5.0 * f.q() / 6.0;
  for (const Cell& c : f.cells(0)) {
    const std::size_t k = counterfeit_in(c);
    for (CoinId id : c.coins) {
      const double w = weight(id);
      if (w != 0 && (k > 1 || std::abs(w) < alpha)) ++r.level0_bad;
    }
  }
  r.a_ok = r.level0_bad <= r.level0_bound;

  for (int i = 1; i <= f.random_levels(); ++i) {
    LevelAudit la;
    la.level = i;
    la.load_bound = (i + 2 * log_q) / i;
    la.multi_bound = std::ldexp(f.q(), -(i + 1)) + std::pow(f.q(), 0.75);
    for (const Cell& c : f.cells(i)) {
      const std::size_t k = counterfeit_in(c);
      la.max_load = std::max(la.max_load, k);
      la.multi_cells += k >= 2;
    }
    la.load_ok = la.max_load <= la.load_bound;
    la.multi_ok = la.multi_cells <= la.multi_bound;
    r.b_ok = r.b_ok && la.load_ok;
    r.c_ok = r.c_ok && la.multi_ok;
    r.levels.push_back(la);
  }

  for (int i = std::max(0, f.split_start() - 1); i <= f.depth() && r.d_ok; ++i)
    for (const Cell& c : f.cells(i))
      if (counterfeit_in(c) > 1) {
        r.d_ok = false;
        break;
      }

  for (const Cell& c : f.cells(f.depth())) r.e_ok = r.e_ok && c.coins.size() <= 1;
  r.structure_ok = family_violation(f).empty();
  return r;
}

inline AuditReport audit_family(const SubsetFamily& f, const CoinInstance& inst) {
  return audit_family(f, [&](CoinId c) { return inst.weight(c); }, inst.alpha());
}

}  // namespace hs
