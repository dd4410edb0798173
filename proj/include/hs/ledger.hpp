#pragma once

// Query accounting. Every oracle call is charged to exactly one phase tag;
// caps may be set per phase, on the total, or on nested budget scopes
// (used for per-invocation budgets such as "(ceil(log n)+3) m queries").

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hs/errors.hpp"

namespace hs {

using PhaseCounts = std::map<std::string, std::uint64_t, std::less<>>;

// Outcome of one closed budget scope.
struct BudgetRecord {
  std::string label;
  std::uint64_t used = 0;
  std::uint64_t cap = 0;
  bool exhausted = false;
};

class QueryLedger {
 public:
  class Budget;

  void set_cap(std::string_view phase, std::optional<std::uint64_t> cap) {
    if (cap)
      caps_[std::string(phase)] = *cap;
    else if (auto it = caps_.find(phase); it != caps_.end())
      caps_.erase(it);
  }

  void set_total_cap(std::optional<std::uint64_t> cap) { total_cap_ = cap; }

  std::optional<std::uint64_t> cap(std::string_view phase) const {
    if (auto it = caps_.find(phase); it != caps_.end()) return it->second;
    return std::nullopt;
  }

  // Charges `count` queries to `phase`, all or nothing.
  void charge(std::string_view phase, std::uint64_t count = 1) {
    auto it = counts_.find(phase);
    const std::uint64_t current = it == counts_.end() ? 0 : it->second;
    if (auto c = cap(phase); c && current + count > *c) fail(std::string(phase), *c);
    if (total_cap_ && total_ + count > *total_cap_) fail("total", *total_cap_);
    for (auto& s : scopes_)
      if (total_ + count - s.start > s.cap) {
        s.exhausted = true;
        fail(s.label, s.cap);
      }
    if (it == counts_.end())
      counts_.emplace(std::string(phase), count);
    else
      it->second += count;
    total_ += count;
  }

  std::uint64_t count(std::string_view phase) const {
    auto it = counts_.find(phase);
    return it == counts_.end() ? 0 : it->second;
  }

  // Sum over all tags that equal `prefix` or start with `prefix` + '/'.
  std::uint64_t count_under(std::string_view prefix) const {
    std::uint64_t sum = 0;
    for (const auto& [tag, n] : counts_)
      if (tag == prefix || (tag.size() > prefix.size() && tag.starts_with(prefix) &&
                            tag[prefix.size()] == '/'))
        sum += n;
    return sum;
  }

  std::uint64_t total() const noexcept { return total_; }
  const PhaseCounts& counters() const noexcept { return counts_; }
  const std::vector<BudgetRecord>& budget_log() const noexcept { return log_; }
  std::uint64_t exhaustion_events() const noexcept { return exhaustions_; }

  // Opens a nested budget: at most `cap` queries may be charged (to any
  // phase) while the returned object is alive. Scopes close in LIFO order.
  [[nodiscard]] Budget scope(std::string label, std::uint64_t cap);

 private:
  struct OpenScope {
    std::string label;
    std::uint64_t start;
    std::uint64_t cap;
    bool exhausted;
  };

  [[noreturn]] void fail(std::string limit, std::uint64_t cap) {
    ++exhaustions_;
    throw BudgetExhausted(std::move(limit), cap);
  }

  void close(std::size_t depth) {
    while (scopes_.size() > depth) {
      auto& s = scopes_.back();
      log_.push_back({s.label, total_ - s.start, s.cap, s.exhausted});
      scopes_.pop_back();
    }
  }

  PhaseCounts counts_;
  std::map<std::string, std::uint64_t, std::less<>> caps_;
  std::optional<std::uint64_t> total_cap_;
  std::uint64_t total_ = 0;
  std::uint64_t exhaustions_ = 0;
  std::vector<OpenScope> scopes_;
  std::vector<BudgetRecord> log_;
};

class QueryLedger::Budget {
 public:
  Budget(QueryLedger& ledger, std::size_t depth) : ledger_(&ledger), depth_(depth) {}
  Budget(const Budget&) = delete;
  Budget& operator=(const Budget&) = delete;
  Budget(Budget&& other) noexcept
      : ledger_(std::exchange(other.ledger_, nullptr)), depth_(other.depth_) {}
  Budget& operator=(Budget&&) = delete;
  ~Budget() {
    if (ledger_) ledger_->close(depth_);
  }

  std::uint64_t used() const {
    const auto& s = ledger_->scopes_[depth_];
    return ledger_->total_ - s.start;
  }
  std::uint64_t cap() const { return ledger_->scopes_[depth_].cap; }
  std::uint64_t remaining() const { return cap() - used(); }
  bool exhausted() const { return ledger_->scopes_[depth_].exhausted; }

 private:
  QueryLedger* ledger_;
  std::size_t depth_;
};

inline QueryLedger::Budget QueryLedger::scope(std::string label, std::uint64_t cap) {
  scopes_.push_back({std::move(label), total_, cap, false});
  return Budget(*this, scopes_.size() - 1);
}

// Difference of two counter snapshots (after - before), zero entries dropped.
inline PhaseCounts diff_counts(const PhaseCounts& after, const PhaseCounts& before) {
  PhaseCounts out;
  for (const auto& [tag, n] : after) {
    auto it = before.find(tag);
    const std::uint64_t prev = it == before.end() ? 0 : it->second;
    if (n > prev) out.emplace(tag, n - prev);
  }
  return out;
}

// Joins phase tags with '/', so nested runs stay attributable to their caller.
inline std::string phase_tag(std::string_view prefix, std::string_view leaf) {
  if (prefix.empty()) return std::string(leaf);
  std::string out(prefix);
  out += '/';
  out += leaf;
  return out;
}

// Floors a real-valued budget to an integer cap; negative or NaN gives 0.
inline std::uint64_t floor_budget(double value) {
  if (!(value > 0)) return 0;
  if (value >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2))
    return std::numeric_limits<std::uint64_t>::max() / 2;
  return static_cast<std::uint64_t>(value);
}

}  // namespace hs
