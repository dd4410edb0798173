// hs: generate instances, run seeded suites, audit the random structures,
// and benchmark query counts.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hs/hs.hpp"

namespace {

struct Options {
  std::uint32_t n = 4096;
  std::uint32_t m = 64;
  double alpha = 1.0;
  double beta = 4.0;
  double eps = 0.0;
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  std::string plan = "identity";
  double eta = 64.0;
  std::string profile = "uniform";
  std::uint32_t mu = 2;
  std::uint32_t max_degree = 8;
  double q = 0;  // audit family; 0 means q = m
  bool general = false;
  bool timing = false;
  bool white_box = false;
  std::string out;
  std::string summary;
  std::string trace;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "coins, or vertices per part");
  app->add_option("--m", o.m, "counterfeit coins or edges");
  app->add_option("--alpha", o.alpha, "lower weight magnitude");
  app->add_option("--beta", o.beta, "upper weight magnitude");
  app->add_option("--eps", o.eps, "fraction of coins lighter than alpha");
  app->add_option("--trials", o.trials, "number of seeded trials");
  app->add_option("--seed", o.seed, "base seed (HS_SEED overrides)");
  app->add_option("--plan", o.plan, "identity | compressed")->check(CLI::IsMember({"identity", "compressed"}));
  app->add_option("--eta", o.eta, "constant of the overall query cap");
  app->add_option("--profile", o.profile, "uniform | star-mix")->check(CLI::IsMember({"uniform", "star-mix"}));
  app->add_option("--out", o.out, "output path (stdout if omitted)");
  app->add_option("--trace", o.trace, "walk trace CSV of the first coin trial");
}

hs::ExperimentSpec make_spec(const Options& o, hs::Kind kind) {
  hs::ExperimentSpec s;
  s.kind = kind;
  s.n = o.n;
  s.m = o.m;
  s.alpha = o.alpha;
  s.beta = o.beta;
  s.eps = o.eps;
  s.trials = o.trials;
  s.seed = o.seed;
  s.plan = o.plan == "compressed" ? hs::PlanKind::Compressed : hs::PlanKind::Identity;
  s.eta = o.eta;
  s.profile = o.profile == "star-mix" ? hs::Profile::StarMix : hs::Profile::Uniform;
  s.mu = o.mu;
  s.max_degree = o.max_degree;
  s.timing = o.timing;
  s.white_box = o.white_box;
  s.trace = !o.trace.empty();
  if (const char* env = std::getenv("HS_SEED"); env && *env) s.seed = std::stoull(env, nullptr, 0);
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    hs::write_text_file(path, text);
}

int cmd_gen(const Options& o, const std::string& what) {
  hs::ExperimentSpec s = make_spec(o, what == "coins" ? hs::Kind::Coins
                                      : o.general   ? hs::Kind::General
                                                    : hs::Kind::Bipartite);
  hs::Rng rng = hs::make_rng(hs::derive_seed(s.seed, 0, "instance"));
  hs::Json j;
  if (s.kind == hs::Kind::Coins) {
    j = hs::to_json(hs::gen_coins(s, rng));
  } else {
    auto g = hs::gen_graph(s, rng);
    std::visit([&](const auto& inst) { j = hs::to_json(inst); }, g.instance);
  }
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_run(const Options& o, hs::Kind kind) {
  const hs::ExperimentSpec s = make_spec(o, kind);
  const hs::SuiteResult r = hs::run_suite(s);
  emit(o.out, hs::to_csv(r));
  const std::string summary = hs::summary_json(r).dump(2) + "\n";
  const std::string summary_path = !o.summary.empty() ? o.summary : o.out.empty() ? "" : o.out + ".summary.json";
  if (summary_path.empty())
    std::cerr << summary;
  else
    hs::write_text_file(summary_path, summary);
  if (!o.trace.empty() && !r.coin_reports.empty()) hs::write_text_file(o.trace, hs::trace_csv(r.coin_reports.front().trace));
  return 0;
}

int cmd_audit_family(const Options& o) {
  hs::ExperimentSpec s = make_spec(o, hs::Kind::Coins);
  const double q = o.q > 0 ? o.q : static_cast<double>(s.m);
  hs::Json builds = hs::Json::array();
  std::map<std::string, std::size_t> held;
  for (std::uint32_t t = 0; t < s.trials; ++t) {
    hs::Rng inst_rng = hs::make_rng(hs::derive_seed(s.seed, t, "instance"));
    hs::Rng fam_rng = hs::make_rng(hs::derive_seed(s.seed, t, "family"));
    const hs::CoinInstance inst = hs::gen_coins(s, inst_rng);
    std::vector<hs::CoinId> all(s.n);
    for (std::uint32_t k = 0; k < s.n; ++k) all[k] = k + 1;
    const auto fam = hs::build_family(all, q, s.n, fam_rng);
    const auto a = hs::audit_family(fam, inst);
    held["a"] += a.a_ok;
    held["b"] += a.b_ok;
    held["c"] += a.c_ok;
    held["d"] += a.d_ok;
    held["e"] += a.e_ok;
    held["structure"] += a.structure_ok;
    builds.push_back(hs::to_json(a));
  }
  hs::Json freq = hs::Json::object();
  for (const auto& [k, v] : held) freq[k] = static_cast<double>(v) / s.trials;
  hs::Json j = {{"spec", hs::spec_json(s)}, {"q", q}, {"frequency", freq}, {"builds", builds}};
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_audit_partition(const Options& o) {
  hs::ExperimentSpec s = make_spec(o, hs::Kind::Bipartite);
  constexpr double delta = 0.05;
  hs::Json builds = hs::Json::array();
  std::map<std::string, std::size_t> held;
  for (std::uint32_t t = 0; t < s.trials; ++t) {
    hs::Rng inst_rng = hs::make_rng(hs::derive_seed(s.seed, t, "instance"));
    hs::Rng part_rng = hs::make_rng(hs::derive_seed(s.seed, t, "partition"));
    auto g = hs::gen_graph(s, inst_rng);
    const auto& inst = std::get<hs::BipartiteInstance>(g.instance);
    std::vector<hs::VertexId> X(inst.nx()), Y(inst.ny());
    for (std::uint32_t k = 0; k < inst.nx(); ++k) X[k] = k + 1;
    for (std::uint32_t k = 0; k < inst.ny(); ++k) Y[k] = k + 1;
    const auto p = hs::make_partition(X, Y, inst.nx(), inst.ny(), s.m, delta, part_rng);
    const auto a = hs::audit_partition(inst, p, s.m);
    const auto sa = hs::audit_sample(inst, s.m, delta, part_rng);
    held["a"] += a.a_ok;
    held["b"] += a.b_ok;
    held["c"] += a.c_ok;
    held["e"] += a.e_ok;
    held["all"] += a.all_ok();
    held["sample"] += sa.ok;
    hs::Json entry = hs::to_json(a);
    entry["sample_edges"] = sa.edges;
    entry["sample_bound"] = sa.bound;
    builds.push_back(entry);
  }
  hs::Json freq = hs::Json::object();
  for (const auto& [k, v] : held) freq[k] = static_cast<double>(v) / s.trials;
  const double md = std::max<double>(s.m, 1);
  hs::Json j = {{"spec", hs::spec_json(s)},
                {"frequency", freq},
                {"partition_target", 1 - 2 * std::pow(md, -delta)},
                {"sample_target", 1 - 2 * std::pow(md, -delta / 2)},
                {"builds", builds}};
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

// Coin query counts over a grid of m at fixed n.
int cmd_bench(const Options& o) {
  std::ostringstream os;
  os << "m,trials,success_rate,mean_queries,plain_ratio,normalized_ratio\n";
  for (std::uint32_t m : {64U, 256U, 1024U}) {
    if (m > o.n) continue;
    Options row = o;
    row.m = m;
    const hs::ExperimentSpec s = make_spec(row, hs::Kind::Coins);
    const auto r = hs::run_suite(s);
    double mean = 0, ok = 0;
    for (const auto& t : r.rows) {
      mean += static_cast<double>(t.queries) / r.rows.size();
      ok += t.success;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%u,%zu,%.4f,%.2f,%.4f,%.4f\n", m, r.rows.size(), ok / r.rows.size(), mean,
                  hs::plain_ratio(mean, s), hs::normalized_ratio(mean, s));
    os << buf;
  }
  emit(o.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coin weighing and graph reconstruction with additive queries"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "write a random instance as JSON");
  gen->require_subcommand(1);
  auto* gen_coins = gen->add_subcommand("coins", "coin instance");
  auto* gen_graph = gen->add_subcommand("graph", "bipartite (default) or general graph instance");
  add_common(gen_coins, o);
  add_common(gen_graph, o);
  gen_graph->add_flag("--general", o.general, "general graph instead of bipartite");
  gen_graph->add_option("--max-degree", o.max_degree, "uniform profile degree cap");

  auto* run = app.add_subcommand("run", "run a seeded suite; CSV rows plus a JSON summary");
  run->require_subcommand(1);
  auto* run_coins = run->add_subcommand("coins", "find counterfeit coins");
  auto* run_bip = run->add_subcommand("bipartite", "reconstruct bipartite graphs");
  auto* run_gen = run->add_subcommand("general", "reconstruct general graphs through the lift");
  for (auto* sub : {run_coins, run_bip, run_gen}) {
    add_common(sub, o);
    sub->add_option("--summary", o.summary, "summary JSON path (default <out>.summary.json)");
    sub->add_flag("--timing", o.timing, "add a wall_ms column to the CSV");
  }
  run_coins->add_option("--mu", o.mu, "verification repetitions (0 = unverified)");
  run_coins->add_flag("--white-box", o.white_box, "collect family audits and walk diagnostics");
  run_bip->add_option("--max-degree", o.max_degree, "uniform profile degree cap");
  run_gen->add_option("--max-degree", o.max_degree, "uniform profile degree cap");

  auto* audit = app.add_subcommand("audit", "white-box audits of the random structures");
  audit->require_subcommand(1);
  auto* audit_family = audit->add_subcommand("family", "layered coin partition bounds");
  auto* audit_partition = audit->add_subcommand("partition", "graph partition and sample bounds");
  add_common(audit_family, o);
  add_common(audit_partition, o);
  audit_family->add_option("--q", o.q, "family parameter (default m)");
  audit_partition->add_option("--max-degree", o.max_degree, "uniform profile degree cap");

  auto* bench = app.add_subcommand("bench", "coin query counts for m in {64, 256, 1024}");
  add_common(bench, o);
  bench->add_option("--mu", o.mu, "verification repetitions (0 = unverified)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_coins->parsed()) return cmd_gen(o, "coins");
    if (gen_graph->parsed()) return cmd_gen(o, "graph");
    if (run_coins->parsed()) return cmd_run(o, hs::Kind::Coins);
    if (run_bip->parsed()) return cmd_run(o, hs::Kind::Bipartite);
    if (run_gen->parsed()) return cmd_run(o, hs::Kind::General);
    if (audit_family->parsed()) return cmd_audit_family(o);
    if (audit_partition->parsed()) return cmd_audit_partition(o);
    if (bench->parsed()) return cmd_bench(o);
  } catch (const std::exception& e) {
    std::cerr << "hs: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
