#pragma once

// Non-adaptive weighing plans over m slots.
//
// A plan is a list of 0/1 query sets over slots {1..m} together with a
// resolver. Feeding it the answers y_q = sum_{j in Q_q} w_j yields x_j with
//
//   w_j = x_j - sum_{k<j} a_{jk} w_k - sum_{l=1..k_j} w_{j+l} / 2^{l*gamma}
//
// for every j. Two realizations are provided:
//
//  * identity:   m singleton queries, a_{jk} = 0, k_j = 0.
//  * compressed: 2^t queries with t minimal such that t 2^{t-1} >= gamma m.
//    Queries are indexed by u in {0,1}^t. Every slot is attached to a
//    nonzero character a (slots are handed out by decreasing popcount of a,
//    ceil(|a|/gamma) slots per character) and its indicator depends only on
//    the coordinates in a: f_j(u) = 1 iff v = u restricted to a has even
//    parity and v < 2 c_j. Then sum_u (-1)^{a.u} f_j(u) = 2^{t-|a|} c_j, the
//    Walsh coefficient vanishes for every later slot whose character does
//    not contain a, and choosing c = 2^{(g-1-l) gamma} inside a group of g
//    slots produces the geometric tail. x_j is read off the Walsh transform
//    of the answers at a_j.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "hs/errors.hpp"

namespace hs {

enum class PlanKind { Identity, Compressed };

inline const char* to_string(PlanKind k) {
  return k == PlanKind::Identity ? "identity" : "compressed";
}

struct PlanTerm {
  std::uint32_t k;  // 1-based slot, k < j
  double a;
};

class MatrixPlan {
 public:
  PlanKind kind() const noexcept { return kind_; }
  std::uint32_t m() const noexcept { return m_; }
  int gamma() const noexcept { return gamma_; }
  // Walsh dimension; 0 for the identity plan.
  int t() const noexcept { return t_; }

  std::size_t query_count() const noexcept { return query_sets_.size(); }
  const std::vector<std::vector<std::uint32_t>>& query_sets() const noexcept {
    return query_sets_;
  }

  // Nonzero a_{jk}, k < j, for 1-based slot j.
  std::span<const PlanTerm> coeffs(std::uint32_t j) const { return coeffs_.at(j - 1); }

  double coeff(std::uint32_t j, std::uint32_t k) const {
    for (const PlanTerm& term : coeffs(j))
      if (term.k == k) return term.a;
    return 0.0;
  }

  std::uint32_t tail(std::uint32_t j) const { return tails_.at(j - 1); }

  // 2^{l*gamma}
  double tail_divisor(std::uint32_t l) const { return std::ldexp(1.0, static_cast<int>(l) * gamma_); }

  // Maps the answers (one per query set, in order) to x_1..x_m.
  std::vector<double> resolve(std::span<const double> answers) const {
    if (answers.size() != query_sets_.size())
      throw InvalidArgument("answer count does not match the plan");
    if (kind_ == PlanKind::Identity) return {answers.begin(), answers.end()};
    std::vector<double> spectrum(answers.begin(), answers.end());
    walsh_transform(spectrum);
    std::vector<double> x(m_);
    for (std::uint32_t j = 0; j < m_; ++j) x[j] = spectrum[character_[j]] / diag_[j];
    return x;
  }

  static void walsh_transform(std::vector<double>& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
      for (std::size_t i = 0; i < v.size(); i += h << 1)
        for (std::size_t k = i; k < i + h; ++k) {
          const double p = v[k], q = v[k + h];
          v[k] = p + q;
          v[k + h] = p - q;
        }
  }

 private:
  friend MatrixPlan build_identity_plan(int gamma, std::uint32_t m);
  friend MatrixPlan build_compressed_plan(int gamma, std::uint32_t m);

  PlanKind kind_ = PlanKind::Identity;
  std::uint32_t m_ = 0;
  int gamma_ = 1;
  int t_ = 0;
  std::vector<std::vector<std::uint32_t>> query_sets_;
  std::vector<std::vector<PlanTerm>> coeffs_;
  std::vector<std::uint32_t> tails_;
  std::vector<std::uint32_t> character_;
  std::vector<double> diag_;
};

inline MatrixPlan build_identity_plan(int gamma, std::uint32_t m) {
  if (m < 1) throw InvalidArgument("plan needs at least one slot");
  if (gamma < 1) throw InvalidArgument("gamma must be positive");
  MatrixPlan p;
  p.kind_ = PlanKind::Identity;
  p.m_ = m;
  p.gamma_ = gamma;
  p.query_sets_.resize(m);
  for (std::uint32_t q = 0; q < m; ++q) p.query_sets_[q] = {q + 1};
  p.coeffs_.resize(m);
  p.tails_.assign(m, 0);
  return p;
}

// Smallest t >= 1 with t 2^{t-1} >= gamma m.
inline int compressed_dimension(int gamma, std::uint64_t m) {
  const std::uint64_t need = static_cast<std::uint64_t>(gamma) * m;
  int t = 1;
  while (static_cast<std::uint64_t>(t) << (t - 1) < need) ++t;
  return t;
}

namespace detail {

// Gathers the bits of u selected by mask into the low bits (software pext).
inline std::uint32_t extract_bits(std::uint32_t u, std::uint32_t mask) {
  std::uint32_t out = 0;
  int pos = 0;
  for (std::uint32_t rest = mask; rest; rest &= rest - 1, ++pos)
    if (u & (rest & -rest)) out |= 1U << pos;
  return out;
}

}  // namespace detail

inline MatrixPlan build_compressed_plan(int gamma, std::uint32_t m) {
  if (m < 1) throw InvalidArgument("plan needs at least one slot");
  if (gamma < 1) throw InvalidArgument("gamma must be positive");
  const int t = compressed_dimension(gamma, m);
  if (t > 24) throw InvalidArgument("compressed plan too large");
  const std::uint32_t size = 1U << t;

  std::vector<std::uint32_t> chars;
  for (std::uint32_t a = 1; a < size; ++a) chars.push_back(a);
  std::stable_sort(chars.begin(), chars.end(), [](std::uint32_t l, std::uint32_t r) {
    return std::popcount(l) > std::popcount(r);
  });

  struct Slot {
    std::uint32_t character;
    int width;            // |a|
    std::uint64_t count;  // c: number of even-parity points in the indicator
    std::uint32_t tail;
  };
  std::vector<Slot> slots;
  slots.reserve(m);
  for (std::uint32_t a : chars) {
    if (slots.size() == m) break;
    const int w = std::popcount(a);
    const int g = (w + gamma - 1) / gamma;
    const std::size_t first = slots.size();
    for (int l = 0; l < g && slots.size() < m; ++l)
      slots.push_back({a, w, std::uint64_t{1} << ((g - 1 - l) * gamma), 0});
    const std::size_t placed = slots.size() - first;
    for (std::size_t l = 0; l < placed; ++l)
      slots[first + l].tail = static_cast<std::uint32_t>(placed - 1 - l);
  }

  MatrixPlan p;
  p.kind_ = PlanKind::Compressed;
  p.m_ = m;
  p.gamma_ = gamma;
  p.t_ = t;

  auto member = [](const Slot& s, std::uint32_t u) {
    const std::uint32_t v = detail::extract_bits(u, s.character);
    return (std::popcount(v) % 2 == 0) && v < 2 * s.count;
  };
  p.query_sets_.resize(size);
  for (std::uint32_t u = 0; u < size; ++u)
    for (std::uint32_t j = 0; j < m; ++j)
      if (member(slots[j], u)) p.query_sets_[u].push_back(j + 1);

  // Walsh spectra of the local indicators, shared by slots with equal (|a|, c).
  std::map<std::pair<int, std::uint64_t>, std::vector<double>> spectra;
  auto spectrum = [&](const Slot& s) -> const std::vector<double>& {
    auto [it, fresh] = spectra.try_emplace({s.width, s.count});
    if (fresh) {
      std::vector<double> f(std::size_t{1} << s.width, 0.0);
      for (std::uint64_t v = 0; v < 2 * s.count; ++v)
        if (std::popcount(v) % 2 == 0) f[v] = 1.0;
      MatrixPlan::walsh_transform(f);
      it->second = std::move(f);
    }
    return it->second;
  };

  p.character_.resize(m);
  p.diag_.resize(m);
  p.tails_.resize(m);
  p.coeffs_.resize(m);
  for (std::uint32_t j = 0; j < m; ++j) {
    const Slot& s = slots[j];
    p.character_[j] = s.character;
    p.tails_[j] = s.tail;
    p.diag_[j] = std::ldexp(static_cast<double>(s.count), t - s.width);
    for (std::uint32_t k = 0; k < j; ++k) {
      const Slot& o = slots[k];
      if (s.character & ~o.character) continue;  // Walsh coefficient vanishes
      const double h = spectrum(o)[detail::extract_bits(s.character, o.character)];
      if (h == 0) continue;
      p.coeffs_[j].push_back({k + 1, std::ldexp(h, t - o.width) / p.diag_[j]});
    }
  }
  return p;
}

inline MatrixPlan build_plan(PlanKind kind, int gamma, std::uint32_t m) {
  return kind == PlanKind::Identity ? build_identity_plan(gamma, m)
                                    : build_compressed_plan(gamma, m);
}

// Plans are pure functions of (kind, gamma, m); this memoizes them process-wide.
inline std::shared_ptr<const MatrixPlan> cached_plan(PlanKind kind, int gamma, std::uint32_t m) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::uint32_t>, std::shared_ptr<const MatrixPlan>> cache;
  const auto key = std::tuple(static_cast<int>(kind), gamma, m);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto plan = std::make_shared<const MatrixPlan>(build_plan(kind, gamma, m));
  std::lock_guard lock(mu);
  return cache.try_emplace(key, std::move(plan)).first->second;
}

// Runs every query of the plan through `weigh` (slots -> real) and resolves.
template <class Weigh>
std::vector<double> execute_and_resolve(const MatrixPlan& plan, Weigh&& weigh) {
  std::vector<double> answers;
  answers.reserve(plan.query_count());
  for (const auto& q : plan.query_sets())
    answers.push_back(weigh(std::span<const std::uint32_t>(q)));
  return plan.resolve(answers);
}

// Largest violation of the resolution identity for slot values w_1..w_m.
inline double resolution_residual(const MatrixPlan& plan, std::span<const double> w) {
  if (w.size() != plan.m()) throw InvalidArgument("slot value count does not match the plan");
  const auto x = execute_and_resolve(plan, [&](std::span<const std::uint32_t> slots) {
    double s = 0;
    for (std::uint32_t j : slots) s += w[j - 1];
    return s;
  });
  double worst = 0;
  for (std::uint32_t j = 1; j <= plan.m(); ++j) {
    double rhs = x[j - 1];
    for (const PlanTerm& term : plan.coeffs(j)) rhs -= term.a * w[term.k - 1];
    for (std::uint32_t l = 1; l <= plan.tail(j); ++l) rhs -= w[j + l - 1] / plan.tail_divisor(l);
    worst = std::max(worst, std::abs(w[j - 1] - rhs));
  }
  return worst;
}

}  // namespace hs
