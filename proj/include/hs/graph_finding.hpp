#pragma once

// Reconstructing a hidden weighted bipartite graph from cross queries
// w(A, B) = sum of w(x, y) over x in A, y in B.
//
// Every query made here is residual: the weight of edges already found is
// subtracted from the raw answer, so later phases only see what is left.
// reconstruct_bipartite runs Algorithm B on the X side (vertices whose
// sampled degree is large get their full neighbourhood by coin weighing),
// then on the Y side with roles exchanged, then Algorithm A on what remains
// (random partition, coin weighing per part, unique pair edges, and a final
// randomized binary search).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hs/coin_weighing.hpp"
#include "hs/errors.hpp"
#include "hs/instances.hpp"
#include "hs/ledger.hpp"
#include "hs/random.hpp"
#include "hs/search_matrix.hpp"
#include "hs/subset_family.hpp"

namespace hs {

struct FoundEdge {
  VertexId x;
  VertexId y;
  double w;
  std::string phase;
};

// Edges found so far, by (x, y). Each pair is recorded at most once.
class EdgeLedger {
 public:
  EdgeLedger(std::uint32_t nx, std::uint32_t ny) : rows_(std::size_t{nx} + 1), marks_(ny) {}

  bool contains(VertexId x, VertexId y) const { return index_.contains({x, y}); }

  // Returns false (and records nothing) if the pair is already known.
  bool add(VertexId x, VertexId y, double w, std::string phase) {
    if (!index_.emplace(std::pair(x, y), edges_.size()).second) return false;
    edges_.push_back({x, y, w, std::move(phase)});
    rows_.at(x).emplace_back(y, w);
    return true;
  }

  // Sum of known weights over A x B.
  double known_cross(std::span<const VertexId> A, std::span<const VertexId> B) {
    if (edges_.empty() || A.empty() || B.empty()) return 0.0;
    marks_.set(B, 1);
    double s = 0;
    for (VertexId x : A)
      for (const auto& [y, w] : rows_.at(x))
        if (marks_[y]) s += w;
    marks_.clear(B);
    return s;
  }

  const std::vector<FoundEdge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }

 private:
  std::map<std::pair<VertexId, VertexId>, std::size_t> index_;
  std::vector<FoundEdge> edges_;
  std::vector<std::vector<std::pair<VertexId, double>>> rows_;
  detail::Marks marks_;
};

// A cross oracle minus the known edges. The swapped view answers w(B, A)
// for A on the Y side, so one algorithm serves both orientations.
template <CrossOracle O>
class ResidualView {
 public:
  ResidualView(O& oracle, EdgeLedger& known, bool swapped = false)
      : oracle_(&oracle), known_(&known), swapped_(swapped) {}

  double cross(std::span<const VertexId> A, std::span<const VertexId> B, std::string_view phase) {
    if (swapped_) return oracle_->cross(B, A, phase) - known_->known_cross(B, A);
    return oracle_->cross(A, B, phase) - known_->known_cross(A, B);
  }

  bool record(VertexId a, VertexId b, double w, std::string phase) {
    return swapped_ ? known_->add(b, a, w, std::move(phase)) : known_->add(a, b, w, std::move(phase));
  }

  bool known(VertexId a, VertexId b) const {
    return swapped_ ? known_->contains(b, a) : known_->contains(a, b);
  }

  ResidualView swapped() const { return ResidualView(*oracle_, *known_, !swapped_); }
  bool is_swapped() const noexcept { return swapped_; }

  std::uint32_t left_size() const { return swapped_ ? oracle_->ny() : oracle_->nx(); }
  std::uint32_t right_size() const { return swapped_ ? oracle_->nx() : oracle_->ny(); }
  QueryLedger& ledger() { return oracle_->ledger(); }
  std::uint64_t charge_per_query() const { return oracle_->charge_per_query(); }

 private:
  O* oracle_;
  EdgeLedger* known_;
  bool swapped_;
};

// Weighs right-side vertices as coins against a fixed left-side set.
template <class View>
class PinnedScale {
 public:
  PinnedScale(View& view, std::vector<VertexId> pinned) : view_(&view), pinned_(std::move(pinned)) {}
  double weigh(std::span<const CoinId> S, std::string_view phase) {
    return view_->cross(pinned_, S, phase);
  }
  QueryLedger& ledger() { return view_->ledger(); }

 private:
  View* view_;
  std::vector<VertexId> pinned_;
};

struct GraphConfig {
  double alpha = 1.0;
  double beta = 4.0;
  std::uint32_t m = 1;  // bound on the number of edges
  std::uint32_t n = 1;  // bound on the size of each part
  double delta = 0.05;
  double eta = 64.0;
  PlanKind plan = PlanKind::Identity;
};

inline double log2_at_least_one(double v) { return std::max(1.0, std::log2(v)); }

// Rounds a parameter such as 4/(1-4 delta) up to an integer, ignoring
// floating-point noise just above an integer.
inline std::uint32_t ceil_param(double v) {
  return static_cast<std::uint32_t>(std::max(1.0, std::ceil(v - 1e-9)));
}

// ---------------------------------------------------------------------------
// Randomized binary search for edges

struct RbsGraphResult {
  std::vector<Edge> edges;  // in the view's orientation
  bool exhausted = false;
  bool swept = false;
  bool reached_bound = false;
};

// A random sample X' x Y' contains a given residual edge with probability
// 1/4, so confirming that nothing is left takes log_{4/3} as many zero
// samples as a coin sweep does.
inline std::uint32_t graph_sweep_length(std::uint64_t m_bound) {
  const double coin = coin_sweep_length(m_bound);
  return static_cast<std::uint32_t>(std::ceil(coin / std::log2(4.0 / 3.0)));
}

inline std::uint64_t rbs_graph_budget(std::uint32_t n, std::uint64_t m_bound) {
  return (2 * static_cast<std::uint64_t>(ceil_log2(n)) + 5) * m_bound;
}

namespace detail {

// Halves `part` (ceil first) until one vertex is left whose pairing with the
// fixed side still weighs nonzero; `weight` is the current total.
template <class Weigh>
VertexId halve_to_one(std::vector<VertexId> part, double& weight, Weigh&& weigh, double alpha) {
  while (part.size() > 1) {
    const std::size_t half = (part.size() + 1) / 2;
    const double w1 = weigh(std::span<const VertexId>(part.data(), half));
    if (!is_zero(w1, alpha)) {
      part.resize(half);
      weight = w1;
    } else {
      part.erase(part.begin(), part.begin() + half);
      weight -= w1;
      if (is_zero(weight, alpha)) throw NotFound("both halves weigh zero");
    }
  }
  return part.front();
}

}  // namespace detail

// Samples X' and Y' (each vertex with probability 1/2); on a nonzero residual
// answer, halves X' down to one x and then Y' down to one y and records the
// edge. Stops at m_bound edges, after graph_sweep_length(m_bound) zero
// samples in a row, or when the budget (in cross queries) runs out.
template <class View>
RbsGraphResult rbs_graph(View& view, const std::vector<VertexId>& X, const std::vector<VertexId>& Y,
                         std::uint64_t m_bound, std::uint64_t budget, Rng& rng,
                         std::string_view phase, double alpha) {
  RbsGraphResult res;
  const std::uint32_t sweep = graph_sweep_length(m_bound);
  auto scope = view.ledger().scope(std::string(phase), budget * view.charge_per_query());
  std::uint32_t zeros = 0;
  try {
    while (true) {
      if (res.edges.size() >= m_bound) {
        res.reached_bound = true;
        break;
      }
      if (X.empty() || Y.empty() || zeros >= sweep) {
        res.swept = true;
        break;
      }
      auto xs = sample_half(X, rng);
      auto ys = sample_half(Y, rng);
      if (xs.empty() || ys.empty()) {
        ++zeros;
        continue;
      }
      double w = view.cross(xs, ys, phase);
      if (is_zero(w, alpha)) {
        ++zeros;
        continue;
      }
      zeros = 0;
      const VertexId x = detail::halve_to_one(
          std::move(xs), w,
          [&](std::span<const VertexId> part) { return view.cross(part, ys, phase); }, alpha);
      const VertexId row[] = {x};
      const VertexId y = detail::halve_to_one(
          std::move(ys), w,
          [&](std::span<const VertexId> part) { return view.cross(row, part, phase); }, alpha);
      view.record(x, y, w, std::string(phase));
      res.edges.push_back({x, y, w});
    }
  } catch (const BudgetExhausted&) {
    res.exhausted = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Random partition for Algorithm A

struct PartitionScheme {
  double delta = 0.05;
  std::uint32_t cells = 1;                    // ceil(m^{1/2 + 2 delta}) per side
  std::vector<std::uint32_t> x_cell, y_cell;  // by vertex id; 0 = not partitioned
  std::vector<std::vector<VertexId>> x_parts, y_parts;
};

inline std::uint32_t partition_cells(std::uint32_t m, double delta) {
  return static_cast<std::uint32_t>(std::ceil(std::pow(static_cast<double>(std::max(m, 1U)), 0.5 + 2 * delta)));
}

inline PartitionScheme make_partition(const std::vector<VertexId>& X, const std::vector<VertexId>& Y,
                                      std::uint32_t nx, std::uint32_t ny, std::uint32_t m,
                                      double delta, Rng& rng) {
  PartitionScheme p;
  p.delta = delta;
  p.cells = partition_cells(m, delta);
  p.x_cell.assign(std::size_t{nx} + 1, 0);
  p.y_cell.assign(std::size_t{ny} + 1, 0);
  p.x_parts.resize(p.cells);
  p.y_parts.resize(p.cells);
  for (VertexId x : X) {
    const auto c = static_cast<std::uint32_t>(uniform_below(rng, p.cells));
    p.x_cell.at(x) = c + 1;
    p.x_parts[c].push_back(x);
  }
  for (VertexId y : Y) {
    const auto c = static_cast<std::uint32_t>(uniform_below(rng, p.cells));
    p.y_cell.at(y) = c + 1;
    p.y_parts[c].push_back(y);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Algorithms A and B

struct SubrunStats {
  std::size_t runs = 0;
  std::size_t confirmed = 0;
  std::size_t rejected = 0;
  std::size_t unclean = 0;
};

struct AlgorithmAResult {
  PartitionScheme partition;
  std::size_t n0_x_total = 0;  // sum over parts X_i of |N0(X_i)|
  std::size_t n0_y_total = 0;
  std::size_t unique_pairs = 0;
  std::size_t pair_edges = 0;
  RbsGraphResult sweep;
  SubrunStats subruns;
};

namespace detail {

inline std::vector<VertexId> without(const std::vector<VertexId>& all, const std::vector<VertexId>& drop) {
  std::vector<VertexId> sorted_drop(drop);
  std::sort(sorted_drop.begin(), sorted_drop.end());
  std::vector<VertexId> out;
  for (VertexId v : all)
    if (!std::binary_search(sorted_drop.begin(), sorted_drop.end(), v)) out.push_back(v);
  return out;
}

inline std::vector<VertexId> iota_ids(std::uint32_t n) {
  std::vector<VertexId> v(n);
  for (std::uint32_t k = 0; k < n; ++k) v[k] = k + 1;
  return v;
}

template <class View>
std::vector<CoinId> part_neighbours(View& view, const std::vector<VertexId>& part,
                                    const std::vector<VertexId>& coins, const CoinConfig& cc,
                                    std::uint32_t mu, Rng& rng, SubrunStats& stats) {
  PinnedScale<View> scale(view, part);
  auto rep = find_with_verification(scale, coins, cc, mu, rng);
  ++stats.runs;
  stats.confirmed += rep.declared.size();
  stats.rejected += rep.rejected;
  stats.unclean += !rep.swept_clean;
  return rep.declared;
}

}  // namespace detail

// Algorithm A on X x Y (the current residual).
template <class View>
AlgorithmAResult algorithm_a(View& view, const std::vector<VertexId>& X, const std::vector<VertexId>& Y,
                             const GraphConfig& cfg, Rng& rng, const std::string& prefix) {
  AlgorithmAResult res;
  const double m = std::max<double>(cfg.m, 1);
  const double delta = cfg.delta;
  res.partition = make_partition(X, Y, view.left_size(), view.right_size(), cfg.m, delta, rng);
  const PartitionScheme& P = res.partition;

  CoinConfig cc;
  cc.alpha = cfg.alpha;
  cc.beta = 3 * cfg.beta;
  cc.eps = std::pow(m, -0.5 + 7 * delta);
  cc.m = static_cast<std::uint32_t>(std::ceil(2 * std::pow(m, 0.5 - 2 * delta)));
  cc.n = cfg.n;
  cc.plan = cfg.plan;
  cc.eta = cfg.eta;
  cc.phase_prefix = phase_tag(prefix, "i");
  const std::uint32_t mu = ceil_param(4 / (1 - 4 * delta));

  // (i) N0(X_i) over Y-coins and N0(Y_j) over X-coins
  std::vector<std::vector<CoinId>> n0x(P.cells), n0y(P.cells);
  auto flipped = view.swapped();
  for (std::uint32_t i = 0; i < P.cells; ++i) {
    if (P.x_parts[i].empty() || Y.empty()) continue;
    n0x[i] = detail::part_neighbours(view, P.x_parts[i], Y, cc, mu, rng, res.subruns);
    res.n0_x_total += n0x[i].size();
  }
  for (std::uint32_t j = 0; j < P.cells; ++j) {
    if (P.y_parts[j].empty() || X.empty()) continue;
    n0y[j] = detail::part_neighbours(flipped, P.y_parts[j], X, cc, mu, rng, res.subruns);
    res.n0_y_total += n0y[j].size();
  }

  // (ii) pairs (X_i, Y_j) seen by exactly one candidate from each side
  struct Seen {
    std::uint32_t count = 0;
    VertexId v = 0;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, Seen> from_x, from_y;
  for (std::uint32_t i = 0; i < P.cells; ++i)
    for (VertexId y : n0x[i]) {
      const std::uint32_t j = P.y_cell.at(y);
      if (j == 0) continue;
      auto& s = from_x[{i, j - 1}];
      ++s.count;
      s.v = y;
    }
  for (std::uint32_t j = 0; j < P.cells; ++j)
    for (VertexId x : n0y[j]) {
      const std::uint32_t i = P.x_cell.at(x);
      if (i == 0) continue;
      auto& s = from_y[{i - 1, j}];
      ++s.count;
      s.v = x;
    }
  const std::string tag_ii = phase_tag(prefix, "ii");
  for (const auto& [key, sx] : from_x) {
    auto it = from_y.find(key);
    if (sx.count != 1 || it == from_y.end() || it->second.count != 1) continue;
    ++res.unique_pairs;
    const VertexId x = it->second.v, y = sx.v;
    if (view.known(x, y)) continue;
    const VertexId a[] = {x}, b[] = {y};
    const double w = view.cross(a, b, tag_ii);
    if (!is_zero(w, cfg.alpha) && view.record(x, y, w, tag_ii)) ++res.pair_edges;
  }

  // (iii) whatever is left
  const auto budget = floor_budget((6.0 * ceil_log2(cfg.n) + 15) * std::pow(m, 1 - 3 * delta));
  res.sweep = rbs_graph(view, X, Y, cfg.m, budget, rng, phase_tag(prefix, "iii"), cfg.alpha);
  return res;
}

struct AlgorithmBResult {
  std::vector<VertexId> sample;  // Y'
  RbsGraphResult sampled;        // G2
  std::vector<VertexId> large;   // flagged vertices, ascending
  std::size_t neighbour_edges = 0;
  SubrunStats subruns;
};

// Algorithm B on X x Y.
template <class View>
AlgorithmBResult algorithm_b(View& view, const std::vector<VertexId>& X, const std::vector<VertexId>& Y,
                             const GraphConfig& cfg, Rng& rng, const std::string& prefix) {
  AlgorithmBResult res;
  const double m = std::max<double>(cfg.m, 1);
  const double delta = cfg.delta;
  const double keep = std::pow(m, -delta);
  for (VertexId y : Y)
    if (bernoulli(rng, keep)) res.sample.push_back(y);

  // (i) G2 = edges of X x Y' found by binary search
  const auto budget = floor_budget((2.0 * ceil_log2(cfg.n) + 5) * std::pow(m, 1 - delta / 2));
  res.sampled = rbs_graph(view, X, res.sample, cfg.m, budget, rng, phase_tag(prefix, "i"), cfg.alpha);

  // (ii) full neighbourhoods of the vertices with large sampled degree
  std::map<VertexId, std::uint32_t> degree;
  for (const Edge& e : res.sampled.edges) ++degree[e.a];
  const double threshold = std::pow(m, delta) / 2;
  const std::uint32_t mu = ceil_param(1 / delta);
  const std::string tag_ii = phase_tag(prefix, "ii");
  for (const auto& [x, d] : degree) {
    if (d < threshold) continue;
    res.large.push_back(x);
    CoinConfig cc;
    cc.alpha = cfg.alpha;
    cc.beta = cfg.beta;
    cc.eps = 0;
    cc.m = static_cast<std::uint32_t>(std::ceil(2 * std::pow(m, delta) * d));
    cc.n = cfg.n;
    cc.plan = cfg.plan;
    cc.eta = cfg.eta;
    cc.phase_prefix = tag_ii;
    PinnedScale<View> scale(view, {x});
    auto rep = find_with_verification(scale, Y, cc, mu, rng);
    ++res.subruns.runs;
    res.subruns.confirmed += rep.declared.size();
    res.subruns.rejected += rep.rejected;
    res.subruns.unclean += !rep.swept_clean;
    for (const auto& [y, w] : rep.confirmed_weight)
      if (view.record(x, y, w, tag_ii)) ++res.neighbour_edges;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Composed pipeline

struct PhaseAttribution {
  std::string phase;
  std::uint64_t queries = 0;        // ledger units
  std::uint64_t cross_queries = 0;  // queries / charge per cross query
  std::size_t edges_found = 0;
};

struct GraphRunReport {
  std::vector<Edge> edges;  // sorted by (a, b)
  std::vector<VertexId> large_x, large_y;
  PhaseCounts queries;
  std::uint64_t total_queries = 0;
  std::uint64_t charge_per_query = 1;
  std::uint64_t cap = 0;  // ledger units
  bool budget_exhausted = false;
  std::vector<PhaseAttribution> phases;
  std::vector<BudgetRecord> budgets;  // scopes closed during the run
  SubrunStats subruns;
  std::size_t sample_edges_x = 0;  // |G2| on each side
  std::size_t sample_edges_y = 0;
};

inline const std::vector<std::string>& pipeline_phases() {
  static const std::vector<std::string> phases = {"B.x/i", "B.x/ii", "B.y/i", "B.y/ii",
                                                  "A/i",   "A/ii",   "A/iii"};
  return phases;
}

inline std::uint64_t pipeline_cap(const GraphConfig& cfg) {
  const double m = std::max<double>(cfg.m, 1);
  return floor_budget(cfg.eta * m * std::log2(cfg.beta / cfg.alpha) * log2_at_least_one(cfg.n) /
                      log2_at_least_one(m));
}

template <CrossOracle O>
GraphRunReport reconstruct_bipartite(O& oracle, const GraphConfig& cfg, Rng& rng) {
  if (!(cfg.alpha > 0) || !(cfg.beta > cfg.alpha)) throw InvalidArgument("need 0 < alpha < beta");
  GraphRunReport rep;
  auto& ledger = oracle.ledger();
  const PhaseCounts before = ledger.counters();
  const std::uint64_t total_before = ledger.total();
  const std::uint64_t events_before = ledger.exhaustion_events();
  const std::size_t log_before = ledger.budget_log().size();
  rep.charge_per_query = oracle.charge_per_query();

  EdgeLedger known(oracle.nx(), oracle.ny());
  ResidualView<O> view(oracle, known);
  if (cfg.m > 0) {
    rep.cap = pipeline_cap(cfg) * rep.charge_per_query;
    auto cap = ledger.scope("pipeline", rep.cap);
    try {
      const auto X = detail::iota_ids(oracle.nx());
      const auto Y = detail::iota_ids(oracle.ny());
      Rng rng_bx = child_rng(rng, "B.x");
      auto bx = algorithm_b(view, X, Y, cfg, rng_bx, "B.x");
      rep.large_x = bx.large;
      rep.sample_edges_x = bx.sampled.edges.size();
      rep.subruns.runs += bx.subruns.runs;
      rep.subruns.rejected += bx.subruns.rejected;
      rep.subruns.unclean += bx.subruns.unclean;
      const auto X_rest = detail::without(X, bx.large);

      auto flipped = view.swapped();
      Rng rng_by = child_rng(rng, "B.y");
      auto by = algorithm_b(flipped, Y, X_rest, cfg, rng_by, "B.y");
      rep.large_y = by.large;
      rep.sample_edges_y = by.sampled.edges.size();
      rep.subruns.runs += by.subruns.runs;
      rep.subruns.rejected += by.subruns.rejected;
      rep.subruns.unclean += by.subruns.unclean;
      const auto Y_rest = detail::without(Y, by.large);

      Rng rng_a = child_rng(rng, "A");
      auto a = algorithm_a(view, X_rest, Y_rest, cfg, rng_a, "A");
      rep.subruns.runs += a.subruns.runs;
      rep.subruns.rejected += a.subruns.rejected;
      rep.subruns.unclean += a.subruns.unclean;
    } catch (const BudgetExhausted&) {
    }
  }

  for (const FoundEdge& e : known.edges()) rep.edges.push_back({e.x, e.y, e.w});
  std::sort(rep.edges.begin(), rep.edges.end(),
            [](const Edge& l, const Edge& r) { return std::pair(l.a, l.b) < std::pair(r.a, r.b); });
  rep.budget_exhausted = ledger.exhaustion_events() != events_before;
  rep.queries = diff_counts(ledger.counters(), before);
  rep.total_queries = ledger.total() - total_before;
  const auto& log = ledger.budget_log();
  rep.budgets.assign(log.begin() + static_cast<std::ptrdiff_t>(log_before), log.end());

  std::map<std::string, std::size_t, std::less<>> found;
  for (const FoundEdge& e : known.edges()) ++found[e.phase];
  auto under = [](const PhaseCounts& counts, std::string_view prefix) {
    std::uint64_t sum = 0;
    for (const auto& [tag, n] : counts)
      if (tag == prefix || (tag.starts_with(prefix) && tag.size() > prefix.size() && tag[prefix.size()] == '/'))
        sum += n;
    return sum;
  };
  for (const std::string& phase : pipeline_phases()) {
    PhaseAttribution pa;
    pa.phase = phase;
    pa.queries = under(rep.queries, phase);
    pa.cross_queries = pa.queries / rep.charge_per_query;
    if (auto it = found.find(phase); it != found.end()) pa.edges_found = it->second;
    rep.phases.push_back(pa);
  }
  return rep;
}

// General graphs through the double cover: every edge uv shows up as two
// cover edges, so the cover is searched with bound 2m and the results are
// folded back to unordered pairs.
inline GraphRunReport reconstruct_general(LiftOracle& oracle, const GraphConfig& cfg, Rng& rng) {
  GraphConfig cover = cfg;
  cover.m = 2 * cfg.m;
  GraphRunReport rep = reconstruct_bipartite(oracle, cover, rng);
  std::map<std::pair<VertexId, VertexId>, double> folded;
  for (const Edge& e : rep.edges) {
    if (e.a == e.b) continue;
    folded.try_emplace(std::minmax(e.a, e.b), e.w);
  }
  rep.edges.clear();
  for (const auto& [key, w] : folded) rep.edges.push_back({key.first, key.second, w});
  return rep;
}

// ---------------------------------------------------------------------------
// White-box audits (no queries)

struct PartitionAudit {
  std::uint32_t cells = 0;
  std::size_t max_neighbourhood = 0;  // max |N(X_i)| over both sides
  double neighbourhood_bound = 0;     // 2 m^{1/2 - 2 delta}
  std::uint32_t max_part_degree = 0;  // max d(y; X_i) over both sides
  std::size_t max_multi = 0;          // max #{y : d(y; X_i) >= 2} over both sides
  double multi_bound = 0;             // m^{5 delta}
  std::size_t non_unique = 0;         // edges sharing their (X_i, Y_j) pair
  double non_unique_bound = 0;        // 3 m^{1 - 3 delta}
  bool a_ok = true, b_ok = true, c_ok = true, e_ok = true;
  bool all_ok() const { return a_ok && b_ok && c_ok && e_ok; }
};

inline PartitionAudit audit_partition(const BipartiteInstance& g, const PartitionScheme& p, std::uint32_t m) {
  PartitionAudit a;
  const double md = std::max<double>(m, 1);
  a.cells = p.cells;
  a.neighbourhood_bound = 2 * std::pow(md, 0.5 - 2 * p.delta);
  a.multi_bound = std::pow(md, 5 * p.delta);
  a.non_unique_bound = 3 * std::pow(md, 1 - 3 * p.delta);

  // side 0: parts of X against Y; side 1: parts of Y against X
  for (int side = 0; side < 2; ++side) {
    std::map<std::pair<std::uint32_t, VertexId>, std::uint32_t> deg;  // (part, other) -> d
    for (const Edge& e : g.edges()) {
      const std::uint32_t part = side == 0 ? p.x_cell.at(e.a) : p.y_cell.at(e.b);
      if (part == 0) continue;
      ++deg[{part, side == 0 ? e.b : e.a}];
    }
    std::map<std::uint32_t, std::size_t> nbhd, multi;
    for (const auto& [key, d] : deg) {
      ++nbhd[key.first];
      if (d >= 2) ++multi[key.first];
      a.max_part_degree = std::max(a.max_part_degree, d);
    }
    for (const auto& [part, k] : nbhd) a.max_neighbourhood = std::max(a.max_neighbourhood, k);
    for (const auto& [part, k] : multi) a.max_multi = std::max(a.max_multi, k);
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> pair_count;
  for (const Edge& e : g.edges())
    if (p.x_cell.at(e.a) && p.y_cell.at(e.b)) ++pair_count[{p.x_cell.at(e.a), p.y_cell.at(e.b)}];
  for (const auto& [key, k] : pair_count)
    if (k >= 2) a.non_unique += k;

  a.a_ok = a.max_neighbourhood <= a.neighbourhood_bound;
  a.b_ok = a.max_part_degree <= 3;
  a.c_ok = a.max_multi <= a.multi_bound;
  a.e_ok = a.non_unique <= a.non_unique_bound;
  return a;
}

struct SampleAudit {
  std::size_t sampled = 0;  // |Y'|
  std::size_t edges = 0;    // edges of X x Y'
  double bound = 0;         // m^{1 - delta/2}
  bool ok = true;
};

// Draws Y' exactly as Algorithm B does and counts the edges it keeps.
inline SampleAudit audit_sample(const BipartiteInstance& g, std::uint32_t m, double delta, Rng& rng) {
  SampleAudit a;
  const double md = std::max<double>(m, 1);
  const double keep = std::pow(md, -delta);
  std::vector<std::uint8_t> in(std::size_t{g.ny()} + 1, 0);
  for (VertexId y = 1; y <= g.ny(); ++y)
    if (bernoulli(rng, keep)) {
      in[y] = 1;
      ++a.sampled;
    }
  for (const Edge& e : g.edges()) a.edges += in[e.b];
  a.bound = std::pow(md, 1 - delta / 2);
  a.ok = a.edges <= a.bound;
  return a;
}

}  // namespace hs
