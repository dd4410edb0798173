// Hides a few counterfeit coins among 4096 and finds them with the scale.

#include <cstdio>
#include <vector>

#include "hs/hs.hpp"

int main() {
  hs::Rng rng = hs::make_rng(7);
  hs::ExperimentSpec spec;
  spec.n = 4096;
  spec.m = 32;
  const hs::CoinInstance inst = hs::gen_coins(spec, rng);

  hs::QueryLedger ledger;
  hs::InstanceScale scale(inst, ledger);
  hs::CoinConfig cfg;
  cfg.n = spec.n;
  cfg.m = spec.m;
  std::vector<hs::CoinId> coins(spec.n);
  for (std::uint32_t k = 0; k < spec.n; ++k) coins[k] = k + 1;

  const auto rep = hs::find_with_verification(scale, coins, cfg, 2, rng);
  std::size_t right = 0;
  for (const auto& [c, w] : rep.confirmed_weight) right += inst.weight(c) == w;
  std::printf("declared %zu of %zu counterfeit coins (%zu with exact weight)\n", rep.declared.size(),
              inst.counterfeit_count(), right);
  std::printf("queries: %llu (cap %llu per run)\n", static_cast<unsigned long long>(rep.total_queries),
              static_cast<unsigned long long>(rep.run_cap));
  for (const auto& [phase, n] : rep.queries)
    std::printf("  %-8s %llu\n", phase.c_str(), static_cast<unsigned long long>(n));
  return rep.declared.size() == inst.counterfeit_count() ? 0 : 1;
}
