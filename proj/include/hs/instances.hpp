#pragma once

// Hidden instances and the additive-query oracle over them.
//
// Ids are 1-based. Instances are immutable once built; every query goes
// through a QueryLedger, which charges before answering.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hs/errors.hpp"
#include "hs/ledger.hpp"

namespace hs {

using CoinId = std::uint32_t;
using VertexId = std::uint32_t;

// Zero predicate used by every algorithm: |v| <= alpha * 2^-20.
inline double zero_tolerance(double alpha) { return std::ldexp(alpha, -20); }
inline bool is_zero(double v, double alpha) { return std::abs(v) <= zero_tolerance(alpha); }

struct WeightBounds {
  double alpha = 1.0;
  double beta = 4.0;
};

struct CoinWeight {
  CoinId id;
  double w;
};

class CoinInstance {
 public:
  // Throws InvalidArgument unless: n >= 1, ids in 1..n and distinct, weights
  // nonzero with |w| <= beta, at most floor(eps * count) of them below alpha,
  // 2 alpha < beta and 0 <= eps < 1/2.
  CoinInstance(std::uint32_t n, std::vector<CoinWeight> counterfeit, double alpha,
               double beta, double eps = 0.0)
      : n_(n), alpha_(alpha), beta_(beta), eps_(eps), dense_(std::size_t{n} + 1, 0.0) {
    if (n == 0) throw InvalidArgument("coin count must be positive");
    if (!(alpha > 0) || !(2 * alpha < beta))
      throw InvalidArgument("need 0 < alpha and 2*alpha < beta");
    if (!(eps >= 0 && eps < 0.5)) throw InvalidArgument("eps must lie in [0, 1/2)");
    std::sort(counterfeit.begin(), counterfeit.end(),
              [](const CoinWeight& a, const CoinWeight& b) { return a.id < b.id; });
    std::size_t light = 0;
    for (std::size_t k = 0; k < counterfeit.size(); ++k) {
      const auto& [id, w] = counterfeit[k];
      if (id < 1 || id > n) throw InvalidArgument("coin id out of range: " + std::to_string(id));
      if (k > 0 && counterfeit[k - 1].id == id)
        throw InvalidArgument("duplicate coin id: " + std::to_string(id));
      if (w == 0 || !(std::abs(w) <= beta))
        throw InvalidArgument("weight must be nonzero with |w| <= beta");
      if (std::abs(w) < alpha) ++light;
      dense_[id] = w;
    }
    if (light > static_cast<std::size_t>(std::floor(eps * counterfeit.size())))
      throw InvalidArgument("too many counterfeit coins lighter than alpha");
    counterfeit_ = std::move(counterfeit);
  }

  std::uint32_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double eps() const noexcept { return eps_; }
  const std::vector<CoinWeight>& counterfeit() const noexcept { return counterfeit_; }
  std::size_t counterfeit_count() const noexcept { return counterfeit_.size(); }

  double weight(CoinId id) const {
    if (id < 1 || id > n_) throw InvalidId("coin id out of range: " + std::to_string(id));
    return dense_[id];
  }

  // Ground-truth sum; charges nothing. Used by the oracle and by white-box checks.
  double sum(std::span<const CoinId> coins) const {
    double s = 0;
    for (CoinId c : coins) s += weight(c);
    return s;
  }

 private:
  std::uint32_t n_;
  double alpha_, beta_, eps_;
  std::vector<CoinWeight> counterfeit_;
  std::vector<double> dense_;
};

struct Edge {
  VertexId a;
  VertexId b;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

namespace detail {

struct Adjacency {
  std::vector<std::vector<std::pair<VertexId, double>>> out;

  explicit Adjacency(std::size_t n) : out(n + 1) {}
};

// Reusable membership marks sized to a vertex range.
class Marks {
 public:
  explicit Marks(std::size_t n) : flag_(n + 1, 0) {}
  void set(std::span<const VertexId> ids, std::uint8_t bit) {
    for (VertexId v : ids) flag_[v] |= bit;
  }
  void clear(std::span<const VertexId> ids) {
    for (VertexId v : ids) flag_[v] = 0;
  }
  std::uint8_t operator[](VertexId v) const { return flag_[v]; }

 private:
  std::vector<std::uint8_t> flag_;
};

inline void check_ids(std::span<const VertexId> ids, std::size_t n, const char* what) {
  for (VertexId v : ids)
    if (v < 1 || v > n)
      throw InvalidId(std::string(what) + " id out of range: " + std::to_string(v));
}

}  // namespace detail

// Weighted bipartite graph on X = {1..nx}, Y = {1..ny}. Edge::a is the
// X-endpoint and Edge::b the Y-endpoint.
class BipartiteInstance {
 public:
  BipartiteInstance(std::uint32_t nx, std::uint32_t ny, std::vector<Edge> edges,
                    double alpha, double beta)
      : nx_(nx), ny_(ny), alpha_(alpha), beta_(beta), adj_(nx) {
    if (nx == 0 || ny == 0) throw InvalidArgument("part sizes must be positive");
    if (!(alpha > 0) || !(alpha <= beta)) throw InvalidArgument("need 0 < alpha <= beta");
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
      return std::pair(l.a, l.b) < std::pair(r.a, r.b);
    });
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      if (e.a < 1 || e.a > nx || e.b < 1 || e.b > ny)
        throw InvalidArgument("edge endpoint out of range");
      if (k > 0 && edges[k - 1].a == e.a && edges[k - 1].b == e.b)
        throw InvalidArgument("duplicate edge");
      if (!(std::abs(e.w) >= alpha && std::abs(e.w) <= beta))
        throw InvalidArgument("edge weight magnitude outside [alpha, beta]");
      adj_.out[e.a].emplace_back(e.b, e.w);
    }
    edges_ = std::move(edges);
  }

  std::uint32_t nx() const noexcept { return nx_; }
  std::uint32_t ny() const noexcept { return ny_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  double weight(VertexId x, VertexId y) const {
    for (const auto& [v, w] : adj_.out.at(x))
      if (v == y) return w;
    return 0.0;
  }

  // w(A, B) without charging.
  double cross_sum(std::span<const VertexId> A, std::span<const VertexId> B) const {
    detail::check_ids(A, nx_, "x");
    detail::check_ids(B, ny_, "y");
    if (A.empty() || B.empty()) return 0.0;
    detail::Marks marks(ny_);
    marks.set(B, 1);
    double s = 0;
    for (VertexId x : A)
      for (const auto& [y, w] : adj_.out[x])
        if (marks[y]) s += w;
    return s;
  }

 private:
  std::uint32_t nx_, ny_;
  double alpha_, beta_;
  std::vector<Edge> edges_;
  detail::Adjacency adj_;
};

// Weighted simple graph on V = {1..n}; Edge::a < Edge::b.
class GeneralInstance {
 public:
  GeneralInstance(std::uint32_t n, std::vector<Edge> edges, double alpha, double beta)
      : n_(n), alpha_(alpha), beta_(beta), adj_(n) {
    if (n == 0) throw InvalidArgument("vertex count must be positive");
    if (!(alpha > 0) || !(alpha <= beta)) throw InvalidArgument("need 0 < alpha <= beta");
    for (Edge& e : edges) {
      if (e.a == e.b) throw InvalidArgument("self-loops are not allowed");
      if (e.a > e.b) std::swap(e.a, e.b);
      if (e.a < 1 || e.b > n) throw InvalidArgument("edge endpoint out of range");
      if (!(std::abs(e.w) >= alpha && std::abs(e.w) <= beta))
        throw InvalidArgument("edge weight magnitude outside [alpha, beta]");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
      return std::pair(l.a, l.b) < std::pair(r.a, r.b);
    });
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (k > 0 && edges[k - 1].a == edges[k].a && edges[k - 1].b == edges[k].b)
        throw InvalidArgument("duplicate edge");
      adj_.out[edges[k].a].emplace_back(edges[k].b, edges[k].w);
      adj_.out[edges[k].b].emplace_back(edges[k].a, edges[k].w);
    }
    edges_ = std::move(edges);
  }

  std::uint32_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  double weight(VertexId u, VertexId v) const {
    for (const auto& [x, w] : adj_.out.at(u))
      if (x == v) return w;
    return 0.0;
  }

  // Sum of weights of edges with both ends in S, without charging.
  double inside_sum(std::span<const VertexId> S) const {
    detail::check_ids(S, n_, "vertex");
    detail::Marks marks(n_);
    marks.set(S, 1);
    double s = 0;
    for (VertexId u : S)
      for (const auto& [v, w] : adj_.out[u])
        if (u < v && marks[v]) s += w;
    return s;
  }

  // w(A, B) over the bipartite double cover, as the combination of four
  // inside sums: w(A u B) - w(A \ B) - w(B \ A) + w(A n B).
  double lifted_sum(std::span<const VertexId> A, std::span<const VertexId> B) const {
    detail::check_ids(A, n_, "vertex");
    detail::check_ids(B, n_, "vertex");
    detail::Marks marks(n_);
    marks.set(A, 1);
    marks.set(B, 2);
    std::vector<VertexId> uni, a_only, b_only, both;
    auto visit = [&](VertexId v) {
      const auto f = marks[v];
      if (f == 0) return;  // already consumed
      uni.push_back(v);
      if (f == 1) a_only.push_back(v);
      if (f == 2) b_only.push_back(v);
      if (f == 3) both.push_back(v);
    };
    for (VertexId v : A) {
      visit(v);
      marks.clear(std::span<const VertexId>(&v, 1));
    }
    for (VertexId v : B) {
      visit(v);
      marks.clear(std::span<const VertexId>(&v, 1));
    }
    return inside_sum(uni) - inside_sum(a_only) - inside_sum(b_only) + inside_sum(both);
  }

 private:
  std::uint32_t n_;
  double alpha_, beta_;
  std::vector<Edge> edges_;
  detail::Adjacency adj_;
};

// ---------------------------------------------------------------------------
// Charged queries

inline double coin_query(const CoinInstance& inst, std::span<const CoinId> S,
                         QueryLedger& ledger, std::string_view phase) {
  for (CoinId c : S)
    if (c < 1 || c > inst.n()) throw InvalidId("coin id out of range: " + std::to_string(c));
  ledger.charge(phase);
  return inst.sum(S);
}

inline double graph_query(const BipartiteInstance& inst, std::span<const VertexId> A,
                          std::span<const VertexId> B, QueryLedger& ledger,
                          std::string_view phase) {
  detail::check_ids(A, inst.nx(), "x");
  detail::check_ids(B, inst.ny(), "y");
  ledger.charge(phase);
  return inst.cross_sum(A, B);
}

inline double general_query(const GeneralInstance& inst, std::span<const VertexId> S,
                            QueryLedger& ledger, std::string_view phase) {
  detail::check_ids(S, inst.n(), "vertex");
  ledger.charge(phase);
  return inst.inside_sum(S);
}

// Cross query through the double cover; always charged as four general queries.
inline double lift_query(const GeneralInstance& inst, std::span<const VertexId> A,
                         std::span<const VertexId> B, QueryLedger& ledger,
                         std::string_view phase) {
  detail::check_ids(A, inst.n(), "vertex");
  detail::check_ids(B, inst.n(), "vertex");
  ledger.charge(phase, 4);
  return inst.lifted_sum(A, B);
}

// ---------------------------------------------------------------------------
// Oracle concepts consumed by the reconstruction algorithms.

// A spring scale over coin ids that charges its own ledger.
template <class S>
concept CoinScale = requires(S& s, std::span<const CoinId> set, std::string_view phase) {
  { s.weigh(set, phase) } -> std::convertible_to<double>;
  { s.ledger() } -> std::same_as<QueryLedger&>;
};

// Answers w(A, B) for A in the X part and B in the Y part.
template <class O>
concept CrossOracle = requires(O& o, std::span<const VertexId> a, std::span<const VertexId> b,
                               std::string_view phase) {
  { o.cross(a, b, phase) } -> std::convertible_to<double>;
  { o.ledger() } -> std::same_as<QueryLedger&>;
  { o.charge_per_query() } -> std::convertible_to<std::uint64_t>;
  { o.nx() } -> std::convertible_to<std::uint32_t>;
  { o.ny() } -> std::convertible_to<std::uint32_t>;
};

class InstanceScale {
 public:
  InstanceScale(const CoinInstance& inst, QueryLedger& ledger) : inst_(&inst), ledger_(&ledger) {}
  double weigh(std::span<const CoinId> S, std::string_view phase) {
    return coin_query(*inst_, S, *ledger_, phase);
  }
  QueryLedger& ledger() { return *ledger_; }
  const CoinInstance& instance() const { return *inst_; }

 private:
  const CoinInstance* inst_;
  QueryLedger* ledger_;
};

class BipartiteOracle {
 public:
  BipartiteOracle(const BipartiteInstance& inst, QueryLedger& ledger)
      : inst_(&inst), ledger_(&ledger) {}
  double cross(std::span<const VertexId> A, std::span<const VertexId> B, std::string_view phase) {
    return graph_query(*inst_, A, B, *ledger_, phase);
  }
  double exact(std::span<const VertexId> A, std::span<const VertexId> B) const {
    return inst_->cross_sum(A, B);
  }
  QueryLedger& ledger() { return *ledger_; }
  std::uint64_t charge_per_query() const { return 1; }
  std::uint32_t nx() const { return inst_->nx(); }
  std::uint32_t ny() const { return inst_->ny(); }

 private:
  const BipartiteInstance* inst_;
  QueryLedger* ledger_;
};

class LiftOracle {
 public:
  LiftOracle(const GeneralInstance& inst, QueryLedger& ledger) : inst_(&inst), ledger_(&ledger) {}
  double cross(std::span<const VertexId> A, std::span<const VertexId> B, std::string_view phase) {
    return lift_query(*inst_, A, B, *ledger_, phase);
  }
  double exact(std::span<const VertexId> A, std::span<const VertexId> B) const {
    return inst_->lifted_sum(A, B);
  }
  QueryLedger& ledger() { return *ledger_; }
  std::uint64_t charge_per_query() const { return 4; }
  std::uint32_t nx() const { return inst_->n(); }
  std::uint32_t ny() const { return inst_->n(); }

 private:
  const GeneralInstance* inst_;
  QueryLedger* ledger_;
};

// The bipartite double cover of a general graph as an explicit instance:
// (u, v) and (v, u) for every edge uv.
inline BipartiteInstance double_cover(const GeneralInstance& g) {
  std::vector<Edge> edges;
  edges.reserve(2 * g.edges().size());
  for (const Edge& e : g.edges()) {
    edges.push_back({e.a, e.b, e.w});
    edges.push_back({e.b, e.a, e.w});
  }
  return BipartiteInstance(g.n(), g.n(), std::move(edges), g.alpha(), g.beta());
}

}  // namespace hs
