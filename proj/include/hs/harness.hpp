#pragma once

// Seeded experiments: instance generators, the trial runner, and CSV / JSON
// report emission. All randomness of trial t comes from
// derive_seed(spec.seed, t, "instance") and derive_seed(spec.seed, t, "run").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hs/coin_weighing.hpp"
#include "hs/graph_finding.hpp"
#include "hs/instances.hpp"
#include "hs/random.hpp"
#include "hs/serialize.hpp"

namespace hs {

enum class Kind { Coins, Bipartite, General };
enum class Profile { Uniform, StarMix };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::Coins: return "coins";
    case Kind::Bipartite: return "bipartite";
    case Kind::General: return "general";
  }
  return "?";
}

inline const char* to_string(Profile p) { return p == Profile::Uniform ? "uniform" : "star-mix"; }

struct ExperimentSpec {
  Kind kind = Kind::Coins;
  std::uint32_t n = 4096;  // coins, or vertices per part
  std::uint32_t m = 64;
  double alpha = 1.0;
  double beta = 4.0;
  double eps = 0.0;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  PlanKind plan = PlanKind::Identity;
  double eta = 64.0;
  Profile profile = Profile::Uniform;
  std::uint32_t mu = 2;          // verification repetitions for coins; 0 runs unverified
  std::uint32_t max_degree = 8;  // uniform graph profile resamples above this
  bool timing = false;           // adds a wall_ms column to the CSV
  bool white_box = false;        // coin runs collect audits and walk diagnostics
  bool trace = false;            // coin runs record walk traces
};

inline void validate(const ExperimentSpec& s) {
  if (s.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (s.n < 1) throw InvalidArgument("n must be positive");
  if (!(s.alpha > 0) || !(2 * s.alpha < s.beta)) throw InvalidArgument("need 0 < alpha and 2*alpha < beta");
  if (!(s.eps >= 0 && s.eps < 0.5)) throw InvalidArgument("eps must lie in [0, 1/2)");
  if (!(s.eta > 0)) throw InvalidArgument("eta must be positive");
  const double n = s.n;
  switch (s.kind) {
    case Kind::Coins:
      if (s.m > s.n) throw InvalidArgument("m exceeds n");
      break;
    case Kind::Bipartite:
      if (s.m > n * n) throw InvalidArgument("m exceeds the number of possible edges");
      if (s.profile == Profile::StarMix && s.m / 2 > s.n) throw InvalidArgument("hub degree exceeds n");
      break;
    case Kind::General:
      if (s.m > n * (n - 1) / 2) throw InvalidArgument("m exceeds the number of possible edges");
      if (s.profile == Profile::StarMix && s.m / 2 > s.n - 1) throw InvalidArgument("hub degree exceeds n-1");
      break;
  }
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

inline double signed_weight(Rng& rng, double lo, double hi) {
  double w = 0;
  while (w == 0) w = uniform_real(rng, lo, hi);
  return bernoulli(rng, 0.5) ? w : -w;
}

// k distinct values from 1..n in draw order.
inline std::vector<std::uint32_t> distinct_ids(Rng& rng, std::uint32_t n, std::uint32_t k) {
  std::set<std::uint32_t> seen;
  std::vector<std::uint32_t> out;
  while (out.size() < k) {
    const auto v = static_cast<std::uint32_t>(1 + uniform_below(rng, n));
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline CoinInstance gen_coins(const ExperimentSpec& s, Rng& rng) {
  validate(s);
  const auto ids = detail::distinct_ids(rng, s.n, s.m);
  const auto light = static_cast<std::uint32_t>(std::floor(s.eps * s.m));
  std::vector<CoinWeight> coins;
  for (std::uint32_t k = 0; k < ids.size(); ++k) {
    const double w = k < light ? detail::signed_weight(rng, 0, s.alpha)
                               : detail::signed_weight(rng, s.alpha, s.beta);
    coins.push_back({ids[k], w});
  }
  return CoinInstance(s.n, std::move(coins), s.alpha, s.beta, s.eps);
}

struct GeneratedGraph {
  std::variant<BipartiteInstance, GeneralInstance> instance;
  std::uint32_t resamples = 0;
};

inline std::uint32_t max_degree(const std::vector<Edge>& edges, std::uint32_t n, bool general) {
  std::vector<std::uint32_t> da(std::size_t{n} + 1, 0), db(std::size_t{n} + 1, 0);
  std::uint32_t best = 0;
  for (const Edge& e : edges) {
    best = std::max(best, ++da[e.a]);
    best = std::max(best, general ? ++da[e.b] : ++db[e.b]);
  }
  return best;
}

// m distinct edges with weights uniform on +-[alpha, beta]. star-mix puts a
// hub of degree floor(m/2) at a random vertex and scatters the rest away
// from it; uniform redraws the whole edge set while the maximum degree
// exceeds spec.max_degree (up to 1000 attempts).
inline GeneratedGraph gen_graph(const ExperimentSpec& s, Rng& rng) {
  validate(s);
  if (s.kind == Kind::Coins) throw InvalidArgument("gen_graph needs a graph kind");
  const bool general = s.kind == Kind::General;
  auto draw = [&]() {
    std::set<std::pair<VertexId, VertexId>> seen;
    std::vector<Edge> edges;
    auto add = [&](VertexId a, VertexId b) {
      if (general) {
        if (a == b) return;
        if (a > b) std::swap(a, b);
      }
      if (seen.insert({a, b}).second) edges.push_back({a, b, detail::signed_weight(rng, s.alpha, s.beta)});
    };
    VertexId hub = 0;
    if (s.profile == Profile::StarMix) {
      hub = static_cast<VertexId>(1 + uniform_below(rng, s.n));
      while (edges.size() < s.m / 2) add(hub, static_cast<VertexId>(1 + uniform_below(rng, s.n)));
    }
    while (edges.size() < s.m) {
      const auto a = static_cast<VertexId>(1 + uniform_below(rng, s.n));
      const auto b = static_cast<VertexId>(1 + uniform_below(rng, s.n));
      if (hub != 0 && (a == hub || (general && b == hub))) continue;
      add(a, b);
    }
    return edges;
  };
  GeneratedGraph out{BipartiteInstance(1, 1, {}, s.alpha, s.beta), 0};
  std::vector<Edge> edges = draw();
  if (s.profile == Profile::Uniform) {
    while (max_degree(edges, s.n, general) > s.max_degree) {
      if (++out.resamples >= 1000) throw InvalidArgument("uniform profile cannot meet the degree cap");
      edges = draw();
    }
  }
  if (general)
    out.instance = GeneralInstance(s.n, std::move(edges), s.alpha, s.beta);
  else
    out.instance = BipartiteInstance(s.n, s.n, std::move(edges), s.alpha, s.beta);
  return out;
}

// ---------------------------------------------------------------------------
// Trials

struct TrialRow {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;  // instance seed
  bool success = false;
  std::size_t declared = 0;
  std::size_t true_count = 0;
  std::size_t false_positives = 0;
  std::size_t missed = 0;
  std::uint64_t queries = 0;
  bool exhausted = false;
  std::uint32_t resamples = 0;
  std::vector<std::uint64_t> phase_queries;  // in phase_columns order
  double wall_ms = 0;
};

struct SuiteResult {
  ExperimentSpec spec;
  std::vector<std::string> phase_columns;
  std::vector<TrialRow> rows;
  std::vector<CoinRunReport> coin_reports;    // kept when white_box or trace
  std::vector<GraphRunReport> graph_reports;  // always kept for graph kinds
  double wall_ms = 0;
};

inline std::vector<std::string> phase_columns(Kind k) {
  if (k == Kind::Coins) return {"level0", "plan", "walk", "correct", "cleanup", "verify"};
  return pipeline_phases();
}

// Relative comparison used for ground-truth weights.
inline bool weights_match(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace detail {

inline std::uint64_t phase_sum(const PhaseCounts& counts, const std::string& prefix) {
  std::uint64_t sum = 0;
  for (const auto& [tag, n] : counts)
    if (tag == prefix || (tag.starts_with(prefix) && tag.size() > prefix.size() && tag[prefix.size()] == '/'))
      sum += n;
  return sum;
}

// Leaf tag of a coin phase: "A/i/walk" -> "walk".
inline std::string leaf(const std::string& tag) {
  const auto slash = tag.rfind('/');
  return slash == std::string::npos ? tag : tag.substr(slash + 1);
}

template <class Truth>
void compare_edges(const std::vector<Edge>& found, const Truth& truth, TrialRow& row) {
  std::map<std::pair<VertexId, VertexId>, double> want;
  for (const Edge& e : truth) want[{e.a, e.b}] = e.w;
  row.declared = found.size();
  row.true_count = want.size();
  bool weights_ok = true;
  std::size_t hit = 0;
  for (const Edge& e : found) {
    auto it = want.find({e.a, e.b});
    if (it == want.end()) {
      ++row.false_positives;
      continue;
    }
    ++hit;
    weights_ok = weights_ok && weights_match(e.w, it->second);
  }
  row.missed = row.true_count - hit;
  row.success = row.false_positives == 0 && row.missed == 0 && weights_ok;
}

}  // namespace detail

inline SuiteResult run_suite(const ExperimentSpec& spec) {
  validate(spec);
  using Clock = std::chrono::steady_clock;
  const auto suite_start = Clock::now();
  SuiteResult out;
  out.spec = spec;
  out.phase_columns = phase_columns(spec.kind);

  for (std::uint32_t t = 0; t < spec.trials; ++t) {
    const auto start = Clock::now();
    TrialRow row;
    row.trial = t;
    row.seed = derive_seed(spec.seed, t, "instance");
    Rng inst_rng = make_rng(row.seed);
    Rng run_rng = make_rng(derive_seed(spec.seed, t, "run"));
    QueryLedger ledger;

    if (spec.kind == Kind::Coins) {
      const CoinInstance inst = gen_coins(spec, inst_rng);
      InstanceScale scale(inst, ledger);
      CoinConfig cfg;
      cfg.alpha = spec.alpha;
      cfg.beta = spec.beta;
      cfg.eps = spec.eps;
      cfg.m = spec.m;
      cfg.n = spec.n;
      cfg.plan = spec.plan;
      cfg.eta = spec.eta;
      cfg.trace = spec.trace;
      if (spec.white_box) cfg.truth = [&inst](std::span<const CoinId> s) { return inst.sum(s); };
      std::vector<CoinId> all(spec.n);
      for (std::uint32_t k = 0; k < spec.n; ++k) all[k] = k + 1;
      CoinRunReport rep = spec.mu > 0 ? find_with_verification(scale, all, cfg, spec.mu, run_rng)
                                      : find_counterfeit(scale, all, cfg, run_rng);
      row.declared = rep.declared.size();
      row.true_count = inst.counterfeit_count();
      bool weights_ok = true;
      for (CoinId c : rep.declared) {
        if (inst.weight(c) == 0) {
          ++row.false_positives;
          continue;
        }
        if (auto it = rep.confirmed_weight.find(c); it != rep.confirmed_weight.end())
          weights_ok = weights_ok && weights_match(it->second, inst.weight(c));
      }
      row.missed = row.true_count - (row.declared - row.false_positives);
      row.success = row.false_positives == 0 && row.missed == 0 && weights_ok;
      row.exhausted = rep.budget_exhausted;
      row.queries = rep.total_queries;
      row.phase_queries.assign(out.phase_columns.size(), 0);
      for (const auto& [tag, n] : rep.queries) {
        const auto it = std::find(out.phase_columns.begin(), out.phase_columns.end(), detail::leaf(tag));
        if (it != out.phase_columns.end()) row.phase_queries[it - out.phase_columns.begin()] += n;
      }
      if (spec.white_box || spec.trace) out.coin_reports.push_back(std::move(rep));
    } else {
      GeneratedGraph g = gen_graph(spec, inst_rng);
      row.resamples = g.resamples;
      GraphConfig cfg;
      cfg.alpha = spec.alpha;
      cfg.beta = spec.beta;
      cfg.m = spec.m;
      cfg.n = spec.n;
      cfg.eta = spec.eta;
      cfg.plan = spec.plan;
      GraphRunReport rep;
      if (auto* bip = std::get_if<BipartiteInstance>(&g.instance)) {
        BipartiteOracle oracle(*bip, ledger);
        rep = reconstruct_bipartite(oracle, cfg, run_rng);
        detail::compare_edges(rep.edges, bip->edges(), row);
      } else {
        const auto& gen = std::get<GeneralInstance>(g.instance);
        LiftOracle oracle(gen, ledger);
        rep = reconstruct_general(oracle, cfg, run_rng);
        detail::compare_edges(rep.edges, gen.edges(), row);
      }
      row.exhausted = rep.budget_exhausted;
      row.queries = rep.total_queries;
      for (const std::string& col : out.phase_columns) row.phase_queries.push_back(detail::phase_sum(rep.queries, col));
      out.graph_reports.push_back(std::move(rep));
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    out.rows.push_back(std::move(row));
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - suite_start).count();
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string to_csv(const SuiteResult& r) {
  std::ostringstream os;
  os << "trial,seed,success,declared,true_count,false_positives,missed,queries_total,exhausted,resamples";
  for (const std::string& c : r.phase_columns) os << ",q_" << c;
  if (r.spec.timing) os << ",wall_ms";
  os << "\n";
  for (const TrialRow& row : r.rows) {
    os << row.trial << ',' << row.seed << ',' << (row.success ? 1 : 0) << ',' << row.declared << ','
       << row.true_count << ',' << row.false_positives << ',' << row.missed << ',' << row.queries << ','
       << (row.exhausted ? 1 : 0) << ',' << row.resamples;
    for (std::uint64_t q : row.phase_queries) os << ',' << q;
    if (r.spec.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", row.wall_ms);
      os << ',' << buf;
    }
    os << "\n";
  }
  return os.str();
}

// Nearest-rank quantile of a sorted sample.
inline double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
}

// queries / (m log2(beta/alpha) log2 n / log2 m), the bound's shape.
inline double normalized_ratio(double queries, const ExperimentSpec& s) {
  const double m = std::max<double>(s.m, 1);
  const double denom = m * std::log2(s.beta / s.alpha) * log2_at_least_one(s.n) / log2_at_least_one(m);
  return queries / denom;
}

// queries / (m log2(beta/alpha) log2 n), without the log m saving.
inline double plain_ratio(double queries, const ExperimentSpec& s) {
  const double m = std::max<double>(s.m, 1);
  return queries / (m * std::log2(s.beta / s.alpha) * log2_at_least_one(s.n));
}

inline Json spec_json(const ExperimentSpec& s) {
  return {{"kind", to_string(s.kind)},   {"n", s.n},         {"m", s.m},
          {"alpha", s.alpha},            {"beta", s.beta},   {"eps", s.eps},
          {"trials", s.trials},          {"seed", s.seed},   {"plan", to_string(s.plan)},
          {"eta", s.eta},                {"profile", to_string(s.profile)},
          {"mu", s.mu},                  {"max_degree", s.max_degree}};
}

inline Json summary_json(const SuiteResult& r) {
  const double trials = static_cast<double>(r.rows.size());
  std::size_t ok = 0, fp_trials = 0, exhausted = 0;
  std::uint64_t resamples = 0;
  std::vector<double> queries;
  std::vector<double> phase_mean(r.phase_columns.size(), 0.0);
  for (const TrialRow& row : r.rows) {
    ok += row.success;
    fp_trials += row.false_positives > 0;
    exhausted += row.exhausted;
    resamples += row.resamples;
    queries.push_back(static_cast<double>(row.queries));
    for (std::size_t k = 0; k < row.phase_queries.size(); ++k)
      phase_mean[k] += static_cast<double>(row.phase_queries[k]) / trials;
  }
  std::sort(queries.begin(), queries.end());
  double mean = 0;
  for (double q : queries) mean += q / trials;
  Json phases = Json::object();
  for (std::size_t k = 0; k < r.phase_columns.size(); ++k) phases[r.phase_columns[k]] = phase_mean[k];
  Json j = {{"spec", spec_json(r.spec)},
            {"trials", r.rows.size()},
            {"success_rate", static_cast<double>(ok) / trials},
            {"false_positive_trials", fp_trials},
            {"exhausted_trials", exhausted},
            {"queries",
             {{"mean", mean},
              {"min", queries.front()},
              {"p50", quantile(queries, 0.5)},
              {"p90", quantile(queries, 0.9)},
              {"p99", quantile(queries, 0.99)},
              {"max", queries.back()}}},
            {"phase_means", phases},
            {"normalized_ratio", normalized_ratio(mean, r.spec)},
            {"plain_ratio", plain_ratio(mean, r.spec)}};
  if (r.spec.kind != Kind::Coins) {
    j["resample_policy"] = r.spec.profile == Profile::Uniform
                               ? "redraw while max degree > " + std::to_string(r.spec.max_degree)
                               : std::string("none");
    j["resamples"] = resamples;
  }
  j["wall_ms"] = r.wall_ms;
  return j;
}

inline std::string trace_csv(const std::vector<WalkTraceRow>& rows) {
  std::ostringstream os;
  os << "q,i,step,s,action,queries\n";
  char q[32];
  for (const WalkTraceRow& t : rows) {
    std::snprintf(q, sizeof q, "%.6g", t.q);
    os << q << ',' << t.level << ',' << t.step << ',' << t.s << ',' << t.action << ',' << t.queries << "\n";
  }
  return os.str();
}

}  // namespace hs
