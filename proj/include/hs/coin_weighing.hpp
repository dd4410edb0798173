#pragma once

// Finding counterfeit coins with a spring scale.
//
// find_counterfeit runs rounds with a shrinking parameter q. A round builds
// a layered random partition, weighs the level-0 cells, and then descends
// level by level: the weights of the even children of every surviving cell
// are guessed from one batch of non-adaptive weighings (a MatrixPlan), and on
// the randomly split levels a walk of random tests over cells guessed to be
// empty detects and repairs wrong guesses. Coins left in surviving cells at
// the deepest level are declared counterfeit and removed. A randomized binary
// search picks up what the rounds leave behind.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hs/errors.hpp"
#include "hs/instances.hpp"
#include "hs/ledger.hpp"
#include "hs/random.hpp"
#include "hs/search_matrix.hpp"
#include "hs/subset_family.hpp"

namespace hs {

struct CoinConfig {
  double alpha = 1.0;
  double beta = 4.0;
  double eps = 0.0;
  std::uint32_t m = 1;  // bound on the number of counterfeit coins
  std::uint32_t n = 1;  // size of the coin universe
  PlanKind plan = PlanKind::Identity;
  double eta = 64.0;
  std::string phase_prefix;
  // Ground truth for white-box diagnostics. Never charged; never steers the run.
  std::function<double(std::span<const CoinId>)> truth;
  bool trace = false;
};

struct WalkTraceRow {
  double q;
  int level;
  std::uint64_t step;
  std::int64_t s;
  std::string action;  // pass | correct | skip
  std::uint64_t queries;
};

struct LevelDiag {
  int level = 0;
  std::size_t survivors = 0;  // |J|
  int gamma = 0;
  std::uint64_t plan_queries = 0;
  bool walked = false;
  std::uint64_t tests = 0;
  std::uint64_t corrections = 0;
  std::uint64_t skipped = 0;  // failed tests with s > 2|J|
  // white-box
  bool truth_known = false;
  bool prev_exact = true;  // w_{i-1,r} = w(A_{i-1,r}) for all r
  double max_tail = 0;     // max_r |sum_l w(A_{i,2(r+l)}) / 2^{l gamma}|
  bool exact = true;       // w_{i,j} = w(A_{i,j}) for all j on exit
  // An episode opens at a failed test and closes when the least-indexed wrong
  // guess is corrected (good); one still open when the walk ends is bad.
  std::uint64_t episodes = 0;
  std::uint64_t good_episodes = 0;
  bool ended_wrong = false;  // the walk left a wrong guess behind
};

struct RoundDiag {
  double q = 0;
  std::size_t ground = 0;
  std::size_t survivors0 = 0;
  std::size_t declared = 0;
  bool completed = false;
  std::vector<LevelDiag> levels;
  std::optional<AuditReport> audit;  // white-box
};

struct CoinRunReport {
  std::vector<CoinId> declared;                 // sorted
  std::map<CoinId, double> confirmed_weight;    // set when verified
  PhaseCounts queries;                          // charged during this run
  std::uint64_t total_queries = 0;
  std::vector<RoundDiag> rounds;
  bool verified = false;
  bool budget_exhausted = false;
  bool swept_clean = false;  // cleanup ended by a confirming sweep or by the bound
  std::uint64_t cleanup_queries = 0;
  std::uint64_t cleanup_budget = 0;
  std::uint64_t run_cap = 0;
  std::size_t runs = 1;
  std::size_t rejected = 0;  // declared coins that weighed zero on verification
  std::vector<WalkTraceRow> trace;
};

// ---------------------------------------------------------------------------
// Binary searches

// Halves S (first part ceil(|S|/2)) until one coin is left, keeping the first
// half whenever it weighs nonzero. `weight` is w(S), already known to the
// caller; the weight of an unweighed second half is inferred by subtraction.
// Uses at most ceil(log2 |S|) queries. Throws NotFound when the current part
// weighs zero.
template <CoinScale Scale>
CoinId det_binary_search(Scale& scale, std::vector<CoinId> S, double weight,
                         std::string_view phase, double alpha) {
  if (S.empty() || is_zero(weight, alpha)) throw NotFound("binary search over a zero-weight set");
  while (S.size() > 1) {
    const std::size_t half = (S.size() + 1) / 2;
    std::span<const CoinId> first(S.data(), half);
    const double w1 = scale.weigh(first, phase);
    if (!is_zero(w1, alpha)) {
      S.resize(half);
      weight = w1;
    } else {
      S.erase(S.begin(), S.begin() + half);
      weight -= w1;
      if (is_zero(weight, alpha)) throw NotFound("both halves weigh zero");
    }
  }
  return S.front();
}

struct RbsResult {
  std::vector<CoinId> found;
  bool exhausted = false;  // stopped by a budget
  bool swept = false;      // stopped after a run of zero-weight samples
  bool reached_bound = false;
};

// Zero samples in a row needed before concluding nothing is left: each sample
// misses a remaining counterfeit with probability at most 1/2.
inline std::uint32_t coin_sweep_length(std::uint64_t m_bound) {
  return static_cast<std::uint32_t>(ceil_log2(static_cast<double>(std::max<std::uint64_t>(m_bound, 1)))) + 3;
}

// Randomized binary search: weigh a random half of the remaining coins; on a
// nonzero answer extract one counterfeit coin by det_binary_search. Stops
// after m_bound coins, after a confirming sweep of zero samples, or when the
// budget (or any enclosing cap) runs out.
template <CoinScale Scale>
RbsResult rbs_coins(Scale& scale, std::vector<CoinId> A, std::uint64_t m_bound,
                    std::uint64_t budget, Rng& rng, std::string_view phase, double alpha) {
  RbsResult res;
  if (m_bound == 0) {
    res.reached_bound = true;
    return res;
  }
  const std::uint32_t sweep = coin_sweep_length(m_bound);
  auto scope = scale.ledger().scope(std::string(phase), budget);
  std::uint32_t zeros = 0;
  try {
    while (true) {
      if (res.found.size() >= m_bound) {
        res.reached_bound = true;
        break;
      }
      if (A.empty() || zeros >= sweep) {
        res.swept = true;
        break;
      }
      auto sample = sample_half(A, rng);
      if (sample.empty()) {
        ++zeros;
        continue;
      }
      const double w = scale.weigh(sample, phase);
      if (is_zero(w, alpha)) {
        ++zeros;
        continue;
      }
      zeros = 0;
      const CoinId c = det_binary_search(scale, std::move(sample), w, phase, alpha);
      res.found.push_back(c);
      A.erase(std::find(A.begin(), A.end(), c));
    }
  } catch (const BudgetExhausted&) {
    res.exhausted = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// One level of the descent

// gamma_i = max(ceil(log2(6 beta/alpha)), ceil(log2(3 beta (i + 2 log2 q) / (i alpha))))
inline int level_gamma(int i, double q, double alpha, double beta) {
  const int base = ceil_log2(6 * beta / alpha);
  const int spread = ceil_log2(3 * beta * (i + 2 * std::log2(q)) / (i * alpha));
  return std::max(base, spread);
}

// Weighings per random test at level i: ceil(log2(i^2 + 1)) + 3.
inline int tests_per_check(int i) { return ceil_log2(static_cast<double>(i) * i + 1) + 3; }

// Walk length bound: the walk continues while s <= 2|J| + 8 i^2 log2 q.
inline double walk_bound(std::size_t survivors, int i, double q) {
  return 2.0 * static_cast<double>(survivors) + 8.0 * i * i * std::log2(q);
}

// Guesses for the children of the surviving cells of level i-1.
// Working child labels run 1..2|J|; children 2r-1 and 2r belong to working
// parent r, and u[2r-1] + u[2r] = w_prev[r] at all times.
struct WalkState {
  int level = 1;
  std::vector<double> w_prev;  // w_{i-1,r}, r = 1..|J|
  std::vector<double> x;       // resolved plan values, r = 1..|J|
  std::vector<double> u;       // guesses, j = 1..2|J|
  int gamma = 1;
  std::int64_t s = -2;

  WalkState(int i, std::vector<double> prev, int g)
      : level(i), w_prev(std::move(prev)), u(2 * w_prev.size(), 0.0), gamma(g) {}

  std::size_t parents() const { return w_prev.size(); }
  double& at(std::size_t j) { return u.at(j - 1); }
  double at(std::size_t j) const { return u.at(j - 1); }
};

// Weighs the union of the level-i cells named by working child labels.
using ChildWeigh = std::function<double(std::span<const std::uint32_t>, std::string_view)>;

// Re-runs the guessing rule for r = from..|J|:
//   u_{2r} = w_prev[r] if |x_r - sum_{k<r} a_{rk} u_{2k}| >= alpha/2, else 0
//   u_{2r-1} = w_prev[r] - u_{2r}
inline void apply_guess_rule(WalkState& st, const MatrixPlan& plan, std::size_t from, double alpha) {
  for (std::size_t r = from; r <= st.parents(); ++r) {
    double acc = st.x[r - 1];
    for (const PlanTerm& term : plan.coeffs(static_cast<std::uint32_t>(r)))
      acc -= term.a * st.at(2 * term.k);
    const double prev = st.w_prev[r - 1];
    st.at(2 * r) = std::abs(acc) >= alpha / 2 ? prev : 0.0;
    st.at(2 * r - 1) = prev - st.at(2 * r);
  }
}

// Resolves x through the plan (slot r bound to working child 2r) and guesses u.
inline void guess_level(WalkState& st, const MatrixPlan& plan, const ChildWeigh& weigh,
                        double alpha) {
  if (plan.m() != st.parents()) throw InvalidArgument("plan size does not match |J|");
  std::vector<std::uint32_t> children;
  st.x = execute_and_resolve(plan, [&](std::span<const std::uint32_t> slots) {
    children.clear();
    for (std::uint32_t r : slots) children.push_back(2 * r);
    return weigh(children, "plan");
  });
  apply_guess_rule(st, plan, 1, alpha);
}

// One random test at s: tests_per_check(i) weighings of random halves of
// {j <= min(s, 2|J|) : u_j = 0}. Empty selections are still charged.
inline bool random_test(const WalkState& st, const ChildWeigh& weigh, Rng& rng, double alpha) {
  const std::int64_t limit = std::min<std::int64_t>(st.s, static_cast<std::int64_t>(st.u.size()));
  std::vector<std::uint32_t> candidates;
  for (std::int64_t j = 1; j <= limit; ++j)
    if (is_zero(st.at(static_cast<std::size_t>(j)), alpha))
      candidates.push_back(static_cast<std::uint32_t>(j));
  bool pass = true;
  const int count = tests_per_check(st.level);
  for (int t = 0; t < count; ++t) {
    const auto selected = sample_half(candidates, rng);
    if (!is_zero(weigh(selected, "walk"), alpha)) pass = false;
  }
  return pass;
}

// After a failed test: if s <= 2|J|, weigh cell s directly, fix u_s and
// u_{s-1}, and redo the guessing rule above s (no new queries). s drops by 2.
inline void correction_step(WalkState& st, const MatrixPlan& plan, const ChildWeigh& weigh,
                            double alpha) {
  if (st.s <= static_cast<std::int64_t>(st.u.size())) {
    if (st.s < 2 || st.s % 2 != 0)
      throw std::logic_error("correction requested at invalid walk position " + std::to_string(st.s));
    const auto s = static_cast<std::uint32_t>(st.s);
    const std::uint32_t cell[] = {s};
    const double v = weigh(cell, "correct");
    st.at(s) = v;
    st.at(s - 1) = st.w_prev[s / 2 - 1] - v;
    apply_guess_rule(st, plan, s / 2 + 1, alpha);
  }
  st.s -= 2;
}

struct WalkStats {
  std::uint64_t tests = 0;
  std::uint64_t corrections = 0;
  std::uint64_t skipped = 0;
  std::uint64_t episodes = 0;
  std::uint64_t good_episodes = 0;
  bool ended_wrong = false;
};

struct WalkObserver {
  std::span<const double> truth;  // true child weights, j = 1..2|J|; empty if unknown
  std::vector<WalkTraceRow>* trace = nullptr;
  const QueryLedger* ledger = nullptr;
  double q = 0;
};

// Walks until s > 2|J| + 8 i^2 log2 q: a passed test moves s up by 2 i^2, a
// failed one triggers a correction step. Returns u as w_{i,1..2|J|}.
inline std::vector<double> run_level_walk(WalkState& st, const MatrixPlan& plan,
                                          const ChildWeigh& weigh, Rng& rng, double q,
                                          double alpha, WalkStats& stats,
                                          const WalkObserver& obs = {}) {
  const double bound = walk_bound(st.parents(), st.level, q);
  const std::int64_t stride = 2 * static_cast<std::int64_t>(st.level) * st.level;
  const double tau = zero_tolerance(alpha);
  auto least_wrong = [&]() -> std::size_t {
    for (std::size_t r = 1; r <= st.parents(); ++r)
      if (std::abs(st.at(2 * r) - obs.truth[2 * r - 1]) > tau ||
          std::abs(st.at(2 * r - 1) - obs.truth[2 * r - 2]) > tau)
        return r;
    return 0;
  };
  const bool white_box = obs.truth.size() == st.u.size() && !st.u.empty();
  std::uint64_t step = 0;
  bool in_episode = false;
  while (static_cast<double>(st.s) <= bound) {
    ++stats.tests;
    const char* action;
    if (random_test(st, weigh, rng, alpha)) {
      st.s += stride;
      action = "pass";
    } else {
      if (white_box && !in_episode) {
        in_episode = true;
        ++stats.episodes;
      }
      if (st.s > static_cast<std::int64_t>(st.u.size())) {
        ++stats.skipped;
        correction_step(st, plan, weigh, alpha);
        action = "skip";
      } else {
        const std::size_t wrong = white_box ? least_wrong() : 0;
        const std::int64_t at = st.s;
        correction_step(st, plan, weigh, alpha);
        ++stats.corrections;
        if (in_episode && wrong != 0 && at == static_cast<std::int64_t>(2 * wrong)) {
          ++stats.good_episodes;
          in_episode = false;
        }
        action = "correct";
      }
    }
    if (obs.trace)
      obs.trace->push_back({obs.q, st.level, ++step, st.s, action,
                            obs.ledger ? obs.ledger->total() : 0});
  }
  stats.ended_wrong = white_box && least_wrong() != 0;
  return st.u;
}

// ---------------------------------------------------------------------------
// Full algorithm

namespace detail {

inline std::uint64_t run_cap(const CoinConfig& cfg) {
  const double log_ratio = std::log2(cfg.beta / cfg.alpha);
  const double log_n = std::max(1.0, std::log2(static_cast<double>(cfg.n)));
  const double log_m = std::max(1.0, std::log2(static_cast<double>(cfg.m)));
  return floor_budget(cfg.eta * cfg.m * log_ratio * log_n / log_m);
}

// One round with parameter q over the coins in A; returns the declared coins.
template <CoinScale Scale>
std::vector<CoinId> coin_round(Scale& scale, const std::vector<CoinId>& A, double q,
                               const CoinConfig& cfg, Rng& rng, RoundDiag& diag,
                               std::vector<WalkTraceRow>* trace) {
  const double qf = std::min(q, std::max<double>(cfg.n, 2));
  const SubsetFamily fam = build_family(A, qf, cfg.n, rng);
  diag.q = qf;
  diag.ground = A.size();
  const bool white_box = static_cast<bool>(cfg.truth);
  if (white_box)
    diag.audit = audit_family(
        fam, [&](CoinId c) { return cfg.truth(std::span<const CoinId>(&c, 1)); }, cfg.alpha);

  const std::string tag_level0 = phase_tag(cfg.phase_prefix, "level0");
  std::vector<CellIndex> J;
  std::vector<double> w_prev;
  for (CellIndex j = 1; j <= fam.cell_count(0); ++j) {
    const double v = scale.weigh(fam.cell(0, j), tag_level0);
    if (std::abs(v) >= cfg.alpha) {
      J.push_back(j);
      w_prev.push_back(v);
    }
  }
  diag.survivors0 = J.size();

  std::vector<CoinId> buffer;
  std::vector<double> truth_children;
  for (int i = 1; i <= fam.depth() && !J.empty(); ++i) {
    const LabelMap labels(J);
    LevelDiag ld;
    ld.level = i;
    ld.survivors = J.size();
    ld.gamma = level_gamma(i, qf, cfg.alpha, cfg.beta);
    const auto plan = cached_plan(cfg.plan, ld.gamma, static_cast<std::uint32_t>(J.size()));
    ld.plan_queries = plan->query_count();

    const ChildWeigh weigh = [&](std::span<const std::uint32_t> children, std::string_view leaf) {
      buffer.clear();
      for (std::uint32_t j : children) {
        auto cell = fam.cell(i, labels.child(j));
        buffer.insert(buffer.end(), cell.begin(), cell.end());
      }
      return scale.weigh(buffer, phase_tag(cfg.phase_prefix, leaf));
    };

    truth_children.clear();
    if (white_box) {
      ld.truth_known = true;
      for (std::size_t j = 1; j <= 2 * J.size(); ++j)
        truth_children.push_back(cfg.truth(fam.cell(i, labels.child(j))));
      const double tau = zero_tolerance(cfg.alpha);
      for (std::size_t r = 1; r <= J.size(); ++r) {
        if (std::abs(w_prev[r - 1] - cfg.truth(fam.cell(i - 1, J[r - 1]))) > tau)
          ld.prev_exact = false;
        double tail = 0;
        for (std::uint32_t l = 1; l <= plan->tail(static_cast<std::uint32_t>(r)); ++l)
          tail += truth_children[2 * (r + l) - 1] / plan->tail_divisor(l);
        ld.max_tail = std::max(ld.max_tail, std::abs(tail));
      }
    }

    WalkState st(i, w_prev, ld.gamma);
    guess_level(st, *plan, weigh, cfg.alpha);
    if (i <= fam.random_levels()) {
      ld.walked = true;
      WalkStats stats;
      WalkObserver obs{truth_children, trace, &scale.ledger(), qf};
      run_level_walk(st, *plan, weigh, rng, qf, cfg.alpha, stats, obs);
      ld.tests = stats.tests;
      ld.corrections = stats.corrections;
      ld.skipped = stats.skipped;
      ld.episodes = stats.episodes;
      ld.good_episodes = stats.good_episodes;
      ld.ended_wrong = stats.ended_wrong;
    }
    if (white_box) {
      const double tau = zero_tolerance(cfg.alpha);
      for (std::size_t j = 0; j < st.u.size(); ++j)
        if (std::abs(st.u[j] - truth_children[j]) > tau) ld.exact = false;
    }

    std::vector<CellIndex> next;
    std::vector<double> next_w;
    for (std::size_t j = 1; j <= st.u.size(); ++j)
      if (std::abs(st.at(j)) >= cfg.alpha) {
        next.push_back(labels.child(j));
        next_w.push_back(st.at(j));
      }
    J = std::move(next);
    w_prev = std::move(next_w);
    diag.levels.push_back(ld);
  }

  std::vector<CoinId> declared;
  for (CellIndex j : J) {
    auto cell = fam.cell(fam.depth(), j);
    declared.insert(declared.end(), cell.begin(), cell.end());
  }
  std::sort(declared.begin(), declared.end());
  diag.declared = declared.size();
  diag.completed = true;
  return declared;
}

}  // namespace detail

// Rounds while q > m^0.8 + 2 eps m (q starts at m and shrinks to 5q/6), then
// a randomized binary search over the remaining coins with budget
// (ceil(log2 n) + 3)(m^0.8 + 2 eps m). The whole run is capped at
// eta m log2(beta/alpha) log2 n / log2 m queries; hitting any cap ends the
// run with what has been declared so far.
template <CoinScale Scale>
CoinRunReport find_counterfeit(Scale& scale, std::vector<CoinId> coins, const CoinConfig& cfg,
                               Rng& rng) {
  if (!(cfg.alpha > 0) || !(cfg.beta > cfg.alpha))
    throw InvalidArgument("need 0 < alpha < beta");
  CoinRunReport rep;
  auto& ledger = scale.ledger();
  const PhaseCounts before = ledger.counters();
  const std::uint64_t total_before = ledger.total();
  const std::uint64_t events_before = ledger.exhaustion_events();
  std::sort(coins.begin(), coins.end());

  if (cfg.m > 0 && !coins.empty()) {
    const double threshold = std::pow(static_cast<double>(cfg.m), 0.8) + 2 * cfg.eps * cfg.m;
    rep.run_cap = detail::run_cap(cfg);
    auto cap = ledger.scope(phase_tag(cfg.phase_prefix, "run"), rep.run_cap);
    std::vector<CoinId> declared;
    try {
      for (double q = cfg.m; q > threshold && !coins.empty(); q = 5.0 * q / 6.0) {
        RoundDiag rd;
        rep.rounds.emplace_back();
        auto found = detail::coin_round(scale, coins, q, cfg, rng, rep.rounds.back(),
                                        cfg.trace ? &rep.trace : nullptr);
        std::vector<CoinId> rest;
        std::set_difference(coins.begin(), coins.end(), found.begin(), found.end(),
                            std::back_inserter(rest));
        coins = std::move(rest);
        declared.insert(declared.end(), found.begin(), found.end());
      }
      const std::uint64_t left =
          cfg.m > declared.size() ? cfg.m - declared.size() : std::uint64_t{1};
      rep.cleanup_budget = floor_budget((ceil_log2(static_cast<double>(cfg.n)) + 3) * threshold);
      const std::uint64_t used_before = ledger.total();
      auto cleanup = rbs_coins(scale, coins, left, rep.cleanup_budget, rng,
                               phase_tag(cfg.phase_prefix, "cleanup"), cfg.alpha);
      rep.cleanup_queries = ledger.total() - used_before;
      declared.insert(declared.end(), cleanup.found.begin(), cleanup.found.end());
      rep.swept_clean = !cleanup.exhausted && (cleanup.swept || cleanup.reached_bound);
    } catch (const BudgetExhausted&) {
    }
    std::sort(declared.begin(), declared.end());
    rep.declared = std::move(declared);
  }
  rep.budget_exhausted = ledger.exhaustion_events() != events_before;
  if (rep.budget_exhausted) rep.swept_clean = false;
  rep.queries = diff_counts(ledger.counters(), before);
  rep.total_queries = ledger.total() - total_before;
  return rep;
}

// Repeats find_counterfeit up to 2 mu times, weighing every declared coin on
// its own and keeping only the nonzero ones. Later runs search the coins not
// yet confirmed, with the bound reduced accordingly. Stops after the first run
// that ends cleanly (no cap hit, cleanup ended by a sweep, no rejected coin).
template <CoinScale Scale>
CoinRunReport find_with_verification(Scale& scale, std::vector<CoinId> coins,
                                     const CoinConfig& cfg, std::uint32_t mu, Rng& rng) {
  CoinRunReport rep;
  rep.verified = true;
  rep.runs = 0;
  auto& ledger = scale.ledger();
  const PhaseCounts before = ledger.counters();
  const std::uint64_t total_before = ledger.total();
  const std::uint64_t events_before = ledger.exhaustion_events();
  const std::string verify_tag = phase_tag(cfg.phase_prefix, "verify");
  std::sort(coins.begin(), coins.end());
  const std::uint32_t max_runs = 2 * std::max<std::uint32_t>(mu, 1);

  for (std::uint32_t run = 0; run < max_runs; ++run) {
    if (rep.confirmed_weight.size() >= cfg.m || coins.empty()) {
      rep.swept_clean = true;
      break;
    }
    CoinConfig sub = cfg;
    sub.m = cfg.m - static_cast<std::uint32_t>(rep.confirmed_weight.size());
    CoinRunReport r = find_counterfeit(scale, coins, sub, rng);
    ++rep.runs;
    rep.run_cap = std::max(rep.run_cap, r.run_cap);
    rep.cleanup_queries += r.cleanup_queries;
    rep.cleanup_budget = std::max(rep.cleanup_budget, r.cleanup_budget);
    for (auto& rd : r.rounds) rep.rounds.push_back(std::move(rd));
    for (auto& row : r.trace) rep.trace.push_back(std::move(row));

    std::size_t rejected = 0;
    bool cut = false;
    for (CoinId c : r.declared) {
      try {
        const double v = scale.weigh(std::span<const CoinId>(&c, 1), verify_tag);
        if (is_zero(v, cfg.alpha))
          ++rejected;
        else
          rep.confirmed_weight[c] = v;
      } catch (const BudgetExhausted&) {
        cut = true;
        break;
      }
    }
    rep.rejected += rejected;
    std::vector<CoinId> rest;
    for (CoinId c : coins)
      if (!rep.confirmed_weight.contains(c)) rest.push_back(c);
    coins = std::move(rest);
    rep.swept_clean = r.swept_clean && !r.budget_exhausted && rejected == 0 && !cut;
    if (cut || rep.swept_clean) break;
  }
  for (const auto& [c, w] : rep.confirmed_weight) rep.declared.push_back(c);
  rep.budget_exhausted = ledger.exhaustion_events() != events_before;
  rep.queries = diff_counts(ledger.counters(), before);
  rep.total_queries = ledger.total() - total_before;
  return rep;
}

}  // namespace hs
