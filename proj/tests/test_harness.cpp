#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>

#include "hs/harness.hpp"

using namespace hs;

namespace {

ExperimentSpec coin_spec(std::uint32_t n, std::uint32_t m) {
  ExperimentSpec s;
  s.kind = Kind::Coins;
  s.n = n;
  s.m = m;
  return s;
}

}  // namespace

TEST(GenCoins, NoCounterfeits) {
  Rng rng(1);
  const auto inst = gen_coins(coin_spec(100, 0), rng);
  EXPECT_EQ(inst.counterfeit_count(), 0u);
}

TEST(GenCoins, AllHeavyWithoutEps) {
  Rng rng(2);
  const auto inst = gen_coins(coin_spec(4096, 64), rng);
  EXPECT_EQ(inst.counterfeit_count(), 64u);
  for (CoinId c = 1; c <= 4096; ++c) {
    const double w = std::abs(inst.weight(c));
    if (w != 0) {
      EXPECT_GE(w, 1.0);
      EXPECT_LE(w, 4.0);
    }
  }
}

TEST(GenCoins, LightShare) {
  Rng rng(3);
  auto s = coin_spec(100, 10);
  s.eps = 0.2;
  const auto inst = gen_coins(s, rng);
  std::size_t light = 0, heavy = 0;
  for (CoinId c = 1; c <= 100; ++c) {
    const double w = std::abs(inst.weight(c));
    if (w == 0) continue;
    (w < 1.0 ? light : heavy)++;
  }
  EXPECT_EQ(light, 2u);
  EXPECT_EQ(heavy, 8u);
}

TEST(GenGraph, StarMixHasHub) {
  Rng rng(4);
  ExperimentSpec s;
  s.kind = Kind::Bipartite;
  s.n = 512;
  s.m = 128;
  s.profile = Profile::StarMix;
  const auto g = gen_graph(s, rng);
  const auto& inst = std::get<BipartiteInstance>(g.instance);
  EXPECT_EQ(inst.edges().size(), 128u);
  std::map<VertexId, int> deg;
  for (const Edge& e : inst.edges()) ++deg[e.a];
  int best = 0;
  for (const auto& [v, d] : deg) best = std::max(best, d);
  EXPECT_EQ(best, 64);
  EXPECT_EQ(g.resamples, 0u);
}

TEST(GenGraph, UniformRespectsDegreeCap) {
  Rng rng(5);
  for (Kind k : {Kind::Bipartite, Kind::General}) {
    ExperimentSpec s;
    s.kind = k;
    s.n = 256;
    s.m = 64;
    const auto g = gen_graph(s, rng);
    std::visit(
        [&](const auto& inst) {
          EXPECT_EQ(inst.edges().size(), 64u);
          EXPECT_LE(max_degree(inst.edges(), 256, k == Kind::General), 8u);
        },
        g.instance);
  }
}

TEST(Validate, RejectsBadSpecs) {
  auto s = coin_spec(10, 11);
  EXPECT_THROW(validate(s), InvalidArgument);
  s = coin_spec(10, 2);
  s.beta = 2;
  EXPECT_THROW(validate(s), InvalidArgument);
  s = coin_spec(10, 2);
  s.eps = 0.5;
  EXPECT_THROW(validate(s), InvalidArgument);
  s = coin_spec(10, 2);
  s.trials = 0;
  EXPECT_THROW(validate(s), InvalidArgument);
  s.kind = Kind::General;
  s.trials = 1;
  s.n = 4;
  s.m = 7;
  EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(RunSuite, EmptyInstanceSucceeds) {
  auto s = coin_spec(64, 0);
  s.trials = 3;
  const auto r = run_suite(s);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.success);
    EXPECT_EQ(row.queries, 0u);
  }
}

TEST(RunSuite, CsvIsByteIdenticalAcrossRuns) {
  for (Kind k : {Kind::Coins, Kind::Bipartite, Kind::General}) {
    ExperimentSpec s;
    s.kind = k;
    s.n = k == Kind::Coins ? 1024 : 128;
    s.m = 16;
    s.trials = 3;
    s.seed = 99;
    const auto a = to_csv(run_suite(s));
    const auto b = to_csv(run_suite(s));
    EXPECT_EQ(a, b) << to_string(k);
    s.seed = 100;
    EXPECT_NE(to_csv(run_suite(s)), a) << to_string(k);
  }
}

TEST(RunSuite, CsvHeaderAndPhaseColumns) {
  auto s = coin_spec(512, 8);
  s.timing = true;
  const auto csv = to_csv(run_suite(s));
  const auto header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "trial,seed,success,declared,true_count,false_positives,missed,queries_total,exhausted,resamples,"
            "q_level0,q_plan,q_walk,q_correct,q_cleanup,q_verify,wall_ms");
}

TEST(RunSuite, PhaseColumnsAddUpToTotal) {
  ExperimentSpec s;
  s.kind = Kind::Bipartite;
  s.n = 256;
  s.m = 32;
  s.trials = 2;
  s.profile = Profile::StarMix;
  const auto r = run_suite(s);
  for (const auto& row : r.rows) {
    std::uint64_t sum = 0;
    for (auto q : row.phase_queries) sum += q;
    EXPECT_EQ(sum, row.queries);
  }
  auto c = coin_spec(2048, 32);
  c.trials = 2;
  for (const auto& row : run_suite(c).rows) {
    std::uint64_t sum = 0;
    for (auto q : row.phase_queries) sum += q;
    EXPECT_EQ(sum, row.queries);
  }
}

TEST(Serialize, InstancesRoundTrip) {
  Rng rng(6);
  const auto coins = gen_coins(coin_spec(300, 12), rng);
  const auto back = coin_instance_from_json(Json::parse(to_json(coins).dump()));
  EXPECT_EQ(to_json(back), to_json(coins));
  for (CoinId c = 1; c <= 300; ++c) EXPECT_EQ(back.weight(c), coins.weight(c));

  ExperimentSpec s;
  s.kind = Kind::Bipartite;
  s.n = 64;
  s.m = 20;
  const auto g = std::get<BipartiteInstance>(gen_graph(s, rng).instance);
  EXPECT_EQ(to_json(bipartite_instance_from_json(Json::parse(to_json(g).dump()))), to_json(g));
  s.kind = Kind::General;
  const auto h = std::get<GeneralInstance>(gen_graph(s, rng).instance);
  EXPECT_EQ(to_json(general_instance_from_json(Json::parse(to_json(h).dump()))), to_json(h));
}

TEST(Summary, QuantilesAndRatios) {
  EXPECT_EQ(quantile({1, 2, 3, 4}, 0.5), 2);
  EXPECT_EQ(quantile({1, 2, 3, 4}, 0.9), 4);
  EXPECT_EQ(quantile({5}, 0.01), 5);
  auto s = coin_spec(4096, 64);
  EXPECT_DOUBLE_EQ(normalized_ratio(768, s), 3.0);  // 768 / (64 * 2 * 12 / 6)
  EXPECT_DOUBLE_EQ(plain_ratio(768, s), 0.5);
}
