// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hs/hs.hpp"

using namespace hs;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::uint32_t> iota(std::uint32_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::uint32_t k = 0; k < n; ++k) v[k] = k + 1;
  return v;
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

// ---------------------------------------------------------------------------
// 1-3: one white-box coin suite, n = 4096, m = 64, mu = 2

void coin_criteria() {
  const std::uint32_t n = 4096, m = 64, trials = 200;
  const double alpha = 1, beta = 4, eps = 0;
  ExperimentSpec spec;
  spec.n = n;
  spec.m = m;
  std::size_t exact = 0, fp_trials = 0;
  std::size_t cleanup_runs = 0, cleanup_over = 0, run_over = 0;
  std::size_t audited_rounds = 0, tail_violations = 0;
  const double threshold = std::pow(m, 0.8) + 2 * eps * m;
  const auto cleanup_cap = static_cast<std::uint64_t>(std::floor((std::ceil(std::log2(n)) + 3) * threshold));
  const auto run_cap =
      static_cast<std::uint64_t>(std::floor(64.0 * m * std::log2(beta / alpha) * std::log2(n) / std::log2(m)));

  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng inst_rng = make_rng(derive_seed(1, t, "instance"));
    Rng run_rng = make_rng(derive_seed(1, t, "run"));
    const CoinInstance inst = gen_coins(spec, inst_rng);
    QueryLedger ledger;
    InstanceScale scale(inst, ledger);
    CoinConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.eps = eps;
    cfg.m = m;
    cfg.n = n;
    cfg.truth = [&inst](std::span<const CoinId> s) { return inst.sum(s); };
    const auto rep = find_with_verification(scale, iota(n), cfg, 2, run_rng);

    std::set<CoinId> truth;
    for (CoinId c = 1; c <= n; ++c)
      if (inst.weight(c) != 0) truth.insert(c);
    bool fp = false;
    for (CoinId c : rep.declared) fp = fp || !truth.contains(c);
    fp_trials += fp;
    exact += std::set<CoinId>(rep.declared.begin(), rep.declared.end()) == truth;

    for (const BudgetRecord& b : ledger.budget_log()) {
      if (b.label == "cleanup") {
        ++cleanup_runs;
        cleanup_over += b.used > b.cap || b.cap > cleanup_cap;
      }
      if (b.label == "run") run_over += b.used > b.cap || b.cap > run_cap;
    }
    for (const RoundDiag& rd : rep.rounds) {
      if (!rd.audit || !rd.audit->b_ok || !rd.audit->d_ok) continue;
      ++audited_rounds;
      for (const LevelDiag& ld : rd.levels) tail_violations += !(ld.max_tail < alpha / 2);
    }
  }
  report(1, "coin soundness", fp_trials == 0 && exact >= 0.95 * trials,
         fmt("%zu/%u exact, %zu trials with false positives", exact, trials, fp_trials));

  // Standalone randomized binary search with budget (ceil(log2 n) + 3) m.
  std::size_t rbs_over = 0, rbs_unsound = 0;
  const std::uint64_t rbs_cap = static_cast<std::uint64_t>(std::ceil(std::log2(n)) + 3) * m;
  for (std::uint32_t t = 0; t < trials; ++t) {
    Rng inst_rng = make_rng(derive_seed(2, t, "instance"));
    Rng run_rng = make_rng(derive_seed(2, t, "run"));
    const CoinInstance inst = gen_coins(spec, inst_rng);
    QueryLedger ledger;
    InstanceScale scale(inst, ledger);
    const auto r = rbs_coins(scale, iota(n), m, rbs_cap, run_rng, "rbs", alpha);
    rbs_over += ledger.total() > rbs_cap;
    for (CoinId c : r.found) rbs_unsound += inst.weight(c) == 0;
  }
  report(2, "coin budgets",
         cleanup_over == 0 && run_over == 0 && rbs_over == 0 && rbs_unsound == 0 && cleanup_runs > 0,
         fmt("cleanup cap %llu: %zu/%zu runs over; run cap %llu: %zu over; rbs cap %llu: %zu over, %zu unsound",
             static_cast<unsigned long long>(cleanup_cap), cleanup_over, cleanup_runs,
             static_cast<unsigned long long>(run_cap), run_over, static_cast<unsigned long long>(rbs_cap),
             rbs_over, rbs_unsound));
  report(3, "tail bound", tail_violations == 0 && audited_rounds > 0,
         fmt("%zu rounds passing (b) and (d), %zu levels with a tail >= alpha/2", audited_rounds, tail_violations));
}

// ---------------------------------------------------------------------------
// 4: family audit at q = 256

void family_criterion() {
  const std::uint32_t n = 4096, builds = 100;
  const double q = 256;
  ExperimentSpec spec;
  spec.n = n;
  spec.m = 256;
  std::size_t b = 0, c = 0, d = 0, e = 0, structure = 0;
  for (std::uint32_t t = 0; t < builds; ++t) {
    Rng inst_rng = make_rng(derive_seed(1, t, "instance"));
    Rng fam_rng = make_rng(derive_seed(1, t, "family"));
    const CoinInstance inst = gen_coins(spec, inst_rng);
    const auto fam = build_family(iota(n), q, n, fam_rng);
    const auto a = audit_family(fam, inst);
    b += a.b_ok;
    c += a.c_ok;
    d += a.d_ok;
    e += a.e_ok;
    structure += a.structure_ok && family_violation(fam).empty();
  }
  const double need = 0.99 * builds;
  report(4, "family audit", b >= need && c >= need && d >= need && e == builds && structure == builds,
         fmt("of %u builds: (b) %zu, (c) %zu, (d) %zu, (e) %zu, structure %zu", builds, b, c, d, e, structure));
}

// ---------------------------------------------------------------------------
// 5: matrix resolution identity

// Residual of w_j = x_j - sum_{k<j} a_{jk} w_k - sum_l w_{j+l} / 2^{l gamma},
// with the answers computed here from the query sets.
double residual(const MatrixPlan& plan, const std::vector<double>& w) {
  std::vector<double> answers;
  for (const auto& set : plan.query_sets()) {
    double y = 0;
    for (std::uint32_t j : set) y += w[j - 1];
    answers.push_back(y);
  }
  const auto x = plan.resolve(answers);
  double worst = 0;
  for (std::uint32_t j = 1; j <= plan.m(); ++j) {
    double rhs = x[j - 1];
    for (std::uint32_t k = 1; k < j; ++k) rhs -= plan.coeff(j, k) * w[k - 1];
    for (std::uint32_t l = 1; l <= plan.tail(j); ++l) rhs -= w[j + l - 1] / std::ldexp(1.0, static_cast<int>(l) * plan.gamma());
    worst = std::max(worst, std::abs(w[j - 1] - rhs));
  }
  return worst;
}

void matrix_criterion() {
  Rng rng = make_rng(5);
  std::size_t checks = 0, bad = 0;
  double worst = 0;
  for (PlanKind kind : {PlanKind::Identity, PlanKind::Compressed})
    for (int gamma : {1, 3, 7})
      for (std::uint32_t m : {1u, 4u, 16u, 64u}) {
        const MatrixPlan plan = build_plan(kind, gamma, m);
        for (int k = 0; k < 100; ++k) {
          std::vector<double> w(m);
          for (double& v : w) v = uniform_real(rng, -10, 10);
          const double r = residual(plan, w);
          worst = std::max(worst, r);
          bad += !(r < 1e-9);
          ++checks;
        }
      }
  report(5, "matrix resolution", bad == 0, fmt("%zu/%zu vectors below 1e-9, worst residual %.3g", checks - bad, checks, worst));
}

// ---------------------------------------------------------------------------
// 6-8: graphs

struct GraphBudgetCheck {
  std::size_t records = 0, over = 0;
  void run(const GraphRunReport& rep, std::uint32_t n, std::uint32_t m) {
    const double delta = 0.05, md = m;
    const double lg = std::ceil(std::log2(n));
    const auto a_iii = static_cast<std::uint64_t>(std::floor((6 * lg + 15) * std::pow(md, 1 - 3 * delta)));
    const auto b_i = static_cast<std::uint64_t>(std::floor((2 * lg + 5) * std::pow(md, 1 - delta / 2)));
    for (const BudgetRecord& b : rep.budgets) {
      std::uint64_t cap = 0;
      if (b.label == "A/iii") cap = a_iii;
      else if (b.label == "B.x/i" || b.label == "B.y/i") cap = b_i;
      else if (b.label == "pipeline") cap = rep.cap / rep.charge_per_query;
      else continue;
      ++records;
      over += b.used > cap * rep.charge_per_query || b.cap != cap * rep.charge_per_query;
    }
  }
};

struct SuiteTally {
  std::size_t exact = 0, fp = 0, trials = 0;
};

SuiteTally tally(const SuiteResult& r) {
  SuiteTally t;
  t.trials = r.rows.size();
  for (const TrialRow& row : r.rows) {
    t.exact += row.success;
    t.fp += row.false_positives > 0;
  }
  return t;
}

void graph_criteria() {
  GraphBudgetCheck budgets;
  ExperimentSpec spec;
  spec.kind = Kind::Bipartite;
  spec.n = 512;
  spec.m = 128;
  spec.trials = 100;
  spec.profile = Profile::Uniform;
  const auto uniform = run_suite(spec);
  spec.profile = Profile::StarMix;
  const auto star = run_suite(spec);
  const auto tu = tally(uniform), ts = tally(star);
  for (const auto* suite : {&uniform, &star})
    for (const auto& rep : suite->graph_reports) budgets.run(rep, spec.n, spec.m);
  report(6, "bipartite reconstruction",
         tu.exact >= 0.9 * tu.trials && ts.exact >= 0.9 * ts.trials && tu.fp == 0 && ts.fp == 0,
         fmt("uniform %zu/%zu exact, star-mix %zu/%zu exact, %zu trials with false positives", tu.exact, tu.trials,
             ts.exact, ts.trials, tu.fp + ts.fp));

  // Lift equivalence against the double sum over ordered pairs.
  Rng rng = make_rng(8);
  std::size_t pairs = 0, mismatches = 0;
  while (pairs < 1000) {
    const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 31));
    std::set<std::pair<VertexId, VertexId>> seen;
    std::vector<Edge> edges;
    const auto target = uniform_below(rng, n * (n - 1) / 2 + 1);
    while (edges.size() < target) {
      VertexId a = 1 + uniform_below(rng, n), b = 1 + uniform_below(rng, n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (seen.insert({a, b}).second) edges.push_back({a, b, (bernoulli(rng, 0.5) ? 1 : -1) * uniform_real(rng, 1, 4)});
    }
    const GeneralInstance g(n, edges, 1, 4);
    std::map<std::pair<VertexId, VertexId>, double> w;
    for (const Edge& e : g.edges()) w[{e.a, e.b}] = w[{e.b, e.a}] = e.w;
    QueryLedger ledger;
    for (int k = 0; k < 50 && pairs < 1000; ++k, ++pairs) {
      std::vector<VertexId> A, B;
      for (VertexId v = 1; v <= n; ++v) {
        if (bernoulli(rng, 0.5)) A.push_back(v);
        if (bernoulli(rng, 0.5)) B.push_back(v);
      }
      double brute = 0;
      for (VertexId a : A)
        for (VertexId b : B)
          if (auto it = w.find({a, b}); it != w.end()) brute += it->second;
      const std::uint64_t before = ledger.total();
      const double lifted = lift_query(g, A, B, ledger, "lift");
      mismatches += std::abs(lifted - brute) > 1e-9 * std::max(1.0, std::abs(brute)) || ledger.total() - before != 4;
    }
  }
  spec.kind = Kind::General;
  spec.n = 256;
  spec.m = 64;
  spec.profile = Profile::Uniform;
  const auto general = run_suite(spec);
  const auto tg = tally(general);
  std::size_t charge_bad = 0;
  for (const auto& rep : general.graph_reports) {
    budgets.run(rep, spec.n, 2 * spec.m);
    charge_bad += rep.charge_per_query != 4 || rep.total_queries % 4 != 0;
    for (const auto& pa : rep.phases) charge_bad += pa.queries != 4 * pa.cross_queries;
  }

  // Standalone rbs_graph with budget (2 ceil(log2 n) + 5) m.
  std::size_t rbs_over = 0;
  for (std::uint32_t t = 0; t < 100; ++t) {
    ExperimentSpec s;
    s.kind = Kind::Bipartite;
    s.n = 512;
    s.m = 128;
    Rng inst_rng = make_rng(derive_seed(7, t, "instance"));
    Rng run_rng = make_rng(derive_seed(7, t, "run"));
    const auto inst = std::get<BipartiteInstance>(gen_graph(s, inst_rng).instance);
    QueryLedger ledger;
    BipartiteOracle oracle(inst, ledger);
    EdgeLedger known(s.n, s.n);
    ResidualView<BipartiteOracle> view(oracle, known);
    const std::uint64_t cap = (2 * static_cast<std::uint64_t>(std::ceil(std::log2(s.n))) + 5) * s.m;
    const auto r = rbs_graph(view, iota(s.n), iota(s.n), s.m, cap, run_rng, "rbs", 1.0);
    rbs_over += ledger.total() > cap;
    for (const Edge& e : r.edges) rbs_over += std::abs(inst.weight(e.a, e.b) - e.w) > 1e-9;
  }
  report(7, "graph budgets", budgets.over == 0 && rbs_over == 0 && budgets.records > 0,
         fmt("%zu phase budgets checked, %zu over or mis-sized; standalone rbs_graph %zu/100 over", budgets.records,
             budgets.over, rbs_over));
  report(8, "lift equivalence", mismatches == 0 && tg.exact >= 0.9 * tg.trials && tg.fp == 0 && charge_bad == 0,
         fmt("%zu/1000 pairs mismatched; general n=256 m=64: %zu/%zu exact, %zu with false positives, %zu charge errors",
             mismatches, tg.exact, tg.trials, tg.fp, charge_bad));
}

// ---------------------------------------------------------------------------
// 9: query scaling at n = 2^14

double mean_queries(PlanKind plan, std::uint32_t m) {
  ExperimentSpec s;
  s.n = 1 << 14;
  s.m = m;
  s.plan = plan;
  s.trials = 5;
  s.seed = 9;
  const auto r = run_suite(s);
  double mean = 0;
  for (const auto& row : r.rows) mean += static_cast<double>(row.queries) / r.rows.size();
  return mean;
}

void scaling_criterion() {
  const double n = 1 << 14, ratio_log = std::log2(4.0 / 1.0);
  std::string detail = "identity plain ratio:";
  double worst_plain = 0;
  for (std::uint32_t m : {64u, 256u}) {
    const double r = mean_queries(PlanKind::Identity, m) / (m * ratio_log * std::log2(n));
    worst_plain = std::max(worst_plain, r);
    detail += fmt(" m=%u %.2f", m, r);
  }
  detail += "; compressed normalized ratio:";
  double lo = 1e300, hi = 0;
  for (std::uint32_t m : {64u, 256u, 1024u}) {
    const double r = mean_queries(PlanKind::Compressed, m) / (m * ratio_log * std::log2(n) / std::log2(m));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    detail += fmt(" m=%u %.2f", m, r);
  }
  detail += fmt(" (spread %.2fx)", hi / lo);
  report(9, "query scaling", worst_plain <= 8 && hi <= 2 * lo, detail);
}

// ---------------------------------------------------------------------------
// 10: determinism

void determinism_criterion() {
  std::size_t suites = 0, same = 0;
  for (Kind k : {Kind::Coins, Kind::Bipartite, Kind::General})
    for (PlanKind plan : {PlanKind::Identity, PlanKind::Compressed}) {
      ExperimentSpec s;
      s.kind = k;
      s.n = k == Kind::Coins ? 4096 : 256;
      s.m = 64;
      s.trials = 5;
      s.seed = 10;
      s.plan = plan;
      s.profile = k == Kind::Bipartite ? Profile::StarMix : Profile::Uniform;
      ++suites;
      same += to_csv(run_suite(s)) == to_csv(run_suite(s));
    }
  report(10, "determinism", same == suites, fmt("%zu/%zu suites byte-identical", same, suites));
}

}  // namespace

int main() {
  coin_criteria();
  family_criterion();
  matrix_criterion();
  graph_criteria();
  scaling_criterion();
  determinism_criterion();
  return failures == 0 ? 0 : 1;
}
