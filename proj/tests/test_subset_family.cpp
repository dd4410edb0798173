#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hs/subset_family.hpp"

using namespace hs;

namespace {

std::vector<CoinId> range_ids(std::uint32_t n) {
  std::vector<CoinId> v(n);
  for (std::uint32_t k = 0; k < n; ++k) v[k] = k + 1;
  return v;
}

}  // namespace

TEST(CeilLog2, SmallValues) {
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(3), 2);
  EXPECT_EQ(ceil_log2(4), 2);
  EXPECT_EQ(ceil_log2(4.0001), 3);
  EXPECT_EQ(ceil_log2(0.5), 0);
}

TEST(BuildFamily, SingleCoin) {
  Rng rng(1);
  const auto f = build_family({1}, 2, 2, rng);
  EXPECT_EQ(f.lq(), 1);
  EXPECT_EQ(f.depth(), 3);
  EXPECT_EQ(f.cell(0, 1).size() + f.cell(0, 2).size(), 1u);
  for (int i = 0; i <= f.depth(); ++i) {
    ASSERT_EQ(f.cells(i).size(), 1u);
    EXPECT_EQ(f.cells(i)[0].coins, std::vector<CoinId>{1});
  }
  EXPECT_TRUE(family_violation(f).empty());
}

TEST(BuildFamily, EightCoinsLevelZeroPartition) {
  Rng rng(2);
  const auto f = build_family(range_ids(8), 4, 8, rng);
  EXPECT_EQ(f.cell_count(0), 4u);
  std::vector<CoinId> all;
  for (CellIndex j = 1; j <= 4; ++j) {
    auto c = f.cell(0, j);
    all.insert(all.end(), c.begin(), c.end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, range_ids(8));
}

TEST(BuildFamily, LevelsAndDepth) {
  Rng rng(3);
  const auto f = build_family(range_ids(100), 16, 1000, rng);
  EXPECT_EQ(f.lq(), 4);
  EXPECT_EQ(f.split_start(), 8);
  EXPECT_EQ(f.random_levels(), 7);
  EXPECT_EQ(f.depth(), 30);  // 2^29 < 10^9 <= 2^30
}

TEST(BuildFamily, NOneHasNoLevels) {
  Rng rng(4);
  const auto f = build_family({1}, 2, 1, rng);
  EXPECT_EQ(f.depth(), 0);
  EXPECT_TRUE(family_violation(f).empty());
}

TEST(BuildFamily, Errors) {
  Rng rng(5);
  EXPECT_THROW(build_family({1, 2}, 1.5, 4, rng), InvalidArgument);
  EXPECT_THROW(build_family(range_ids(5), 2, 4, rng), InvalidArgument);
  EXPECT_THROW(build_family({1, 1}, 2, 4, rng), InvalidArgument);
  EXPECT_THROW(build_family({1}, 8, 4, rng), InvalidArgument);
}

TEST(BuildFamily, InvariantsOnRandomBuilds) {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 2000));
    std::vector<CoinId> ground;
    for (CoinId c = 1; c <= n; ++c)
      if (bernoulli(rng, 0.5)) ground.push_back(c);
    const double q = 2 + uniform_real(rng, 0, std::min<double>(n, 300) - 2);
    const auto f = build_family(ground, q, n, rng);
    EXPECT_EQ(family_violation(f), "") << "n=" << n << " q=" << q;
    for (const Cell& c : f.cells(f.depth())) EXPECT_LE(c.coins.size(), 1u);
  }
}

TEST(BuildFamily, MissingCellsReadEmpty) {
  Rng rng(7);
  const auto f = build_family({3}, 2, 4, rng);
  std::size_t nonempty = 0;
  for (CellIndex j = 1; j <= f.cell_count(2); ++j) nonempty += !f.cell(2, j).empty();
  EXPECT_EQ(nonempty, 1u);
}

TEST(LabelMap, ChildrenAndLookup) {
  const LabelMap map({7, 2, 5});
  EXPECT_EQ(map.original(1), 2u);
  EXPECT_EQ(map.original(3), 7u);
  EXPECT_EQ(map.child(1), 3u);
  EXPECT_EQ(map.child(2), 4u);
  EXPECT_EQ(map.child(5), 13u);
  EXPECT_EQ(map.child(6), 14u);
  EXPECT_EQ(map.working(5), 2u);
  EXPECT_EQ(map.working(6), 0u);
}

TEST(AuditFamily, NoCounterfeits) {
  Rng rng(8);
  CoinInstance inst(64, {}, 1, 4);
  const auto f = build_family(range_ids(64), 8, 64, rng);
  const auto a = audit_family(f, inst);
  EXPECT_EQ(a.counterfeit, 0u);
  EXPECT_EQ(a.level0_bad, 0u);
  for (const auto& l : a.levels) {
    EXPECT_EQ(l.max_load, 0u);
    EXPECT_EQ(l.multi_cells, 0u);
  }
  EXPECT_TRUE(a.all_ok());
}

TEST(AuditFamily, OneCounterfeit) {
  Rng rng(9);
  CoinInstance inst(64, {{17, -2.0}}, 1, 4);
  for (int k = 0; k < 10; ++k) {
    const auto f = build_family(range_ids(64), 8, 64, rng);
    const auto a = audit_family(f, inst);
    EXPECT_TRUE(a.b_ok && a.c_ok && a.d_ok && a.e_ok);
    for (const auto& l : a.levels) EXPECT_EQ(l.multi_cells, 0u);
  }
}

TEST(AuditFamily, CountsLightAndCrowdedCoinsAtLevelZero) {
  // q = 2 gives two level-0 cells; three counterfeits force a shared cell.
  Rng rng(10);
  CoinInstance inst(8, {{1, 2.0}, {2, 2.0}, {3, 0.5}}, 1, 4, 0.4);
  const auto f = build_family(range_ids(8), 2, 8, rng);
  const auto a = audit_family(f, inst);
  EXPECT_EQ(a.light, 1u);
  EXPECT_GE(a.level0_bad, 2u);
}

// Bounds (b)-(d) are probabilistic; at q = 256 nearly every build meets them.
TEST(AuditFamily, BoundsUsuallyHoldAtQ256) {
  Rng rng(11);
  std::vector<CoinWeight> coins;
  for (CoinId c = 1; c <= 256; ++c) coins.push_back({c * 16, 1.0 + (c % 3)});
  CoinInstance inst(4096, coins, 1, 4);
  int held = 0;
  const int builds = 30;
  for (int k = 0; k < builds; ++k) {
    const auto f = build_family(range_ids(4096), 256, 4096, rng);
    const auto a = audit_family(f, inst);
    EXPECT_TRUE(a.e_ok && a.structure_ok);
    held += a.b_ok && a.c_ok && a.d_ok;
  }
  EXPECT_GE(held, builds - 3);
}
