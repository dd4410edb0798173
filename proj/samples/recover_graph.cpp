// Recovers a weighted graph with a dense star from cross queries.

#include <cstdio>

#include "hs/hs.hpp"

int main() {
  hs::Rng rng = hs::make_rng(11);
  hs::ExperimentSpec spec;
  spec.kind = hs::Kind::Bipartite;
  spec.n = 512;
  spec.m = 128;
  spec.profile = hs::Profile::StarMix;
  const auto g = hs::gen_graph(spec, rng);
  const auto& inst = std::get<hs::BipartiteInstance>(g.instance);

  hs::QueryLedger ledger;
  hs::BipartiteOracle oracle(inst, ledger);
  hs::GraphConfig cfg;
  cfg.n = spec.n;
  cfg.m = spec.m;
  const auto rep = hs::reconstruct_bipartite(oracle, cfg, rng);

  std::printf("found %zu of %zu edges with %llu queries (cap %llu)\n", rep.edges.size(), inst.edges().size(),
              static_cast<unsigned long long>(rep.total_queries), static_cast<unsigned long long>(rep.cap));
  for (const auto& pa : rep.phases)
    std::printf("  %-7s %6llu queries  %3zu edges\n", pa.phase.c_str(),
                static_cast<unsigned long long>(pa.queries), pa.edges_found);
  return rep.edges.size() == inst.edges().size() ? 0 : 1;
}
