#pragma once

// JSON forms of instances, plans, audits and run reports.
//
//   coins:     {"n", "alpha", "beta", "eps", "counterfeit": [{"id", "w"}]}
//   bipartite: {"nx", "ny", "alpha", "beta", "edges": [{"x", "y", "w"}]}
//   general:   {"n", "alpha", "beta", "edges": [{"u", "v", "w"}]}

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hs/coin_weighing.hpp"
#include "hs/graph_finding.hpp"
#include "hs/instances.hpp"
#include "hs/search_matrix.hpp"
#include "hs/subset_family.hpp"

namespace hs {

using Json = nlohmann::ordered_json;

inline Json to_json(const CoinInstance& inst) {
  Json coins = Json::array();
  for (const auto& c : inst.counterfeit()) coins.push_back({{"id", c.id}, {"w", c.w}});
  return {{"n", inst.n()},         {"alpha", inst.alpha()}, {"beta", inst.beta()},
          {"eps", inst.eps()},     {"counterfeit", coins}};
}

inline CoinInstance coin_instance_from_json(const Json& j) {
  std::vector<CoinWeight> coins;
  for (const auto& c : j.at("counterfeit")) coins.push_back({c.at("id").get<CoinId>(), c.at("w").get<double>()});
  return CoinInstance(j.at("n").get<std::uint32_t>(), std::move(coins), j.at("alpha").get<double>(),
                      j.at("beta").get<double>(), j.value("eps", 0.0));
}

inline Json to_json(const BipartiteInstance& inst) {
  Json edges = Json::array();
  for (const Edge& e : inst.edges()) edges.push_back({{"x", e.a}, {"y", e.b}, {"w", e.w}});
  return {{"nx", inst.nx()},       {"ny", inst.ny()},     {"alpha", inst.alpha()},
          {"beta", inst.beta()},   {"edges", edges}};
}

inline BipartiteInstance bipartite_instance_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("x").get<VertexId>(), e.at("y").get<VertexId>(), e.at("w").get<double>()});
  return BipartiteInstance(j.at("nx").get<std::uint32_t>(), j.at("ny").get<std::uint32_t>(),
                           std::move(edges), j.at("alpha").get<double>(), j.at("beta").get<double>());
}

inline Json to_json(const GeneralInstance& inst) {
  Json edges = Json::array();
  for (const Edge& e : inst.edges()) edges.push_back({{"u", e.a}, {"v", e.b}, {"w", e.w}});
  return {{"n", inst.n()}, {"alpha", inst.alpha()}, {"beta", inst.beta()}, {"edges", edges}};
}

inline GeneralInstance general_instance_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("u").get<VertexId>(), e.at("v").get<VertexId>(), e.at("w").get<double>()});
  return GeneralInstance(j.at("n").get<std::uint32_t>(), std::move(edges), j.at("alpha").get<double>(),
                         j.at("beta").get<double>());
}

inline Json to_json(const MatrixPlan& p) {
  Json coeffs = Json::array(), tails = Json::array();
  for (std::uint32_t j = 1; j <= p.m(); ++j) {
    Json row = Json::array();
    for (const PlanTerm& t : p.coeffs(j)) row.push_back({{"k", t.k}, {"a", t.a}});
    coeffs.push_back(row);
    tails.push_back(p.tail(j));
  }
  return {{"kind", to_string(p.kind())}, {"m", p.m()},          {"gamma", p.gamma()},
          {"t", p.t()},                   {"queries", p.query_sets()}, {"coeffs", coeffs},
          {"tails", tails}};
}

inline Json to_json(const AuditReport& a) {
  Json levels = Json::array();
  for (const LevelAudit& l : a.levels)
    levels.push_back({{"level", l.level},
                      {"max_load", l.max_load},
                      {"load_bound", l.load_bound},
                      {"multi_cells", l.multi_cells},
                      {"multi_bound", l.multi_bound}});
  return {{"q", a.q},
          {"counterfeit", a.counterfeit},
          {"light", a.light},
          {"hypothesis_ok", a.hypothesis_ok},
          {"level0_bad", a.level0_bad},
          {"level0_bound", a.level0_bound},
          {"a", a.a_ok},
          {"b", a.b_ok},
          {"c", a.c_ok},
          {"d", a.d_ok},
          {"e", a.e_ok},
          {"structure", a.structure_ok},
          {"levels", levels}};
}

inline Json to_json(const PartitionAudit& a) {
  return {{"cells", a.cells},
          {"max_neighbourhood", a.max_neighbourhood},
          {"neighbourhood_bound", a.neighbourhood_bound},
          {"max_part_degree", a.max_part_degree},
          {"max_multi", a.max_multi},
          {"multi_bound", a.multi_bound},
          {"non_unique", a.non_unique},
          {"non_unique_bound", a.non_unique_bound},
          {"a", a.a_ok},
          {"b", a.b_ok},
          {"c", a.c_ok},
          {"e", a.e_ok}};
}

inline Json to_json(const CoinRunReport& r) {
  Json rounds = Json::array();
  for (const RoundDiag& rd : r.rounds) {
    Json levels = Json::array();
    for (const LevelDiag& l : rd.levels)
      levels.push_back({{"level", l.level},
                        {"survivors", l.survivors},
                        {"gamma", l.gamma},
                        {"plan_queries", l.plan_queries},
                        {"walked", l.walked},
                        {"tests", l.tests},
                        {"corrections", l.corrections},
                        {"skipped", l.skipped},
                        {"max_tail", l.max_tail},
                        {"episodes", l.episodes},
                        {"good_episodes", l.good_episodes},
                        {"ended_wrong", l.ended_wrong}});
    Json round = {{"q", rd.q},
                  {"ground", rd.ground},
                  {"survivors0", rd.survivors0},
                  {"declared", rd.declared},
                  {"completed", rd.completed},
                  {"levels", levels}};
    if (rd.audit) round["audit"] = to_json(*rd.audit);
    rounds.push_back(round);
  }
  Json declared = Json::array();
  for (CoinId c : r.declared) {
    Json entry = {{"id", c}};
    if (auto it = r.confirmed_weight.find(c); it != r.confirmed_weight.end()) entry["w"] = it->second;
    declared.push_back(entry);
  }
  return {{"declared", declared},
          {"queries", r.queries},
          {"total_queries", r.total_queries},
          {"run_cap", r.run_cap},
          {"cleanup_queries", r.cleanup_queries},
          {"cleanup_budget", r.cleanup_budget},
          {"verified", r.verified},
          {"runs", r.runs},
          {"rejected", r.rejected},
          {"budget_exhausted", r.budget_exhausted},
          {"swept_clean", r.swept_clean},
          {"rounds", rounds}};
}

inline Json to_json(const GraphRunReport& r, bool general = false) {
  Json edges = Json::array();
  for (const Edge& e : r.edges)
    edges.push_back(general ? Json{{"u", e.a}, {"v", e.b}, {"w", e.w}} : Json{{"x", e.a}, {"y", e.b}, {"w", e.w}});
  Json phases = Json::array();
  for (const PhaseAttribution& p : r.phases)
    phases.push_back({{"phase", p.phase},
                      {"queries", p.queries},
                      {"cross_queries", p.cross_queries},
                      {"edges_found", p.edges_found}});
  Json budgets = Json::array();
  for (const BudgetRecord& b : r.budgets)
    budgets.push_back({{"label", b.label}, {"used", b.used}, {"cap", b.cap}, {"exhausted", b.exhausted}});
  return {{"edges", edges},
          {"large_x", r.large_x},
          {"large_y", r.large_y},
          {"total_queries", r.total_queries},
          {"charge_per_query", r.charge_per_query},
          {"cap", r.cap},
          {"budget_exhausted", r.budget_exhausted},
          {"phases", phases},
          {"budgets", budgets}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace hs
