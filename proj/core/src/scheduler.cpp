// Copyright 2026 The DreamSched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dreamsched/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "dreamsched/errors.hpp"

namespace dreamsched {

namespace {

// Incremental transfer bookkeeping for the set currently being grown.
// Layers arrive in descending order, so appending is O(1): the new
// transfer starts at the later of its BP completion and the link
// becoming free.
struct OpenSet {
  double first_start = 0.0;
  double link_free = 0.0;
  bool empty = true;

  double span() const { return empty ? 0.0 : link_free - first_start; }

  void add(int layer, const LayerTimes& times) {
    if (empty) {
      first_start = times.bp_done(layer);
      link_free = first_start + times.comm(layer);
      empty = false;
    } else {
      link_free = std::max(times.bp_done(layer), link_free) + times.comm(layer);
    }
  }

  double span_with(int layer, const LayerTimes& times) const {
    OpenSet copy = *this;
    copy.add(layer, times);
    return copy.span();
  }
};

class DfsSearch {
 public:
  DfsSearch(const LayerTimes& times, int period) : times_(times), period_(period) {
    sets_.assign(static_cast<std::size_t>(period), {});
  }

  SearchReport run() {
    solve(times_.layer_count(), 1, OpenSet{});
    SearchReport report;
    report.best.period = period_;
    report.best.sets = std::move(best_sets_);
    report.best.supplemental.assign(static_cast<std::size_t>(period_), {});
    report.best_cost = best_cost_;
    report.solutions_explored = solutions_;
    report.classification_log = std::move(log_);
    return report;
  }

 private:
  // Remaining-BP window once the set's lead layer finishes its backward
  // computation. Fixed for the set as soon as the lead layer is chosen:
  // every still-unassigned layer runs its BP in iterations h..H either way.
  double window_of(int lead) const { return times_.bp_total() - times_.bp_done(lead); }

  void record_solution() {
    ++solutions_;
    const double cost = period_objective_value(sets_, times_);
    if (cost < best_cost_) {
      best_cost_ = cost;
      best_sets_ = sets_;
    }
  }

  void solve(int layer, int h, OpenSet open) {
    if (layer == 0) {
      record_solution();
      return;
    }
    auto& set = sets_[static_cast<std::size_t>(h - 1)];
    if (h == period_) {
      // Terminal iteration: everything left communicates here.
      const std::size_t mark = set.size();
      for (int l = layer; l >= 1; --l) set.push_back(l);
      record_solution();
      set.resize(mark);
      return;
    }
    if (set.empty()) {
      log_.push_back({layer, h, AssignRule::kAtLeastOne});
      open.add(layer, times_);
      set.push_back(layer);
      solve(layer - 1, h, open);
      set.pop_back();
      return;
    }
    const double window = window_of(set.front());
    if (window >= open.span_with(layer, times_)) {
      log_.push_back({layer, h, AssignRule::kOptimalHiding});
      open.add(layer, times_);
      set.push_back(layer);
      solve(layer - 1, h, open);
      set.pop_back();
      return;
    }
    if (window < open.span()) {
      log_.push_back({layer, h, AssignRule::kDelayedCo});
      solve(layer, h + 1, OpenSet{});
      return;
    }
    // The set still fits but adding this layer would overflow it: either
    // subtree can hold the optimum, so record both. Assign first.
    log_.push_back({layer, h, AssignRule::kDfsBranch});
    OpenSet grown = open;
    grown.add(layer, times_);
    set.push_back(layer);
    solve(layer - 1, h, grown);
    set.pop_back();
    solve(layer, h + 1, OpenSet{});
  }

  const LayerTimes& times_;
  int period_;
  std::vector<std::vector<int>> sets_;
  std::vector<std::vector<int>> best_sets_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::uint64_t solutions_ = 0;
  std::vector<AssignmentDecision> log_;
};

std::uint64_t saturating_binomial(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    if (result > cap / factor) return cap + 1;
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace

Assignment classify_assignment(const AssignmentState& state, int layer,
                               const ModelProfile& profile) {
  const LayerTimes times = LayerTimes::from(profile);
  std::vector<int> augmented;
  if (!state.sets.empty()) augmented = state.sets.back();
  const int lead = augmented.empty() ? layer : augmented.front();
  augmented.push_back(layer);
  const double window = times.bp_total() - times.bp_done(lead);
  const double span = effective_comm_span(augmented, times).span;
  return window >= span ? Assignment::kCommunicationHide : Assignment::kCommunicationOverflow;
}

SearchReport schedule_dfs(const ModelProfile& profile, int period) {
  const LayerTimes times = LayerTimes::from(profile);
  if (period < 1 || period > times.layer_count()) {
    throw ArgumentError("schedule_dfs: period must be in [1, layer_count]: H=" +
                        std::to_string(period) + ", L=" + std::to_string(times.layer_count()));
  }
  return DfsSearch(times, period).run();
}

std::uint64_t brute_force_candidate_count(int layer_count, int period) {
  // Contiguous splits into exactly j non-empty sets: C(L-1, j-1). Empties
  // may only trail, so candidates sum over j = 1..min(H, L).
  constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 2;
  std::uint64_t total = 0;
  for (int j = 1; j <= std::min(period, layer_count); ++j) {
    const std::uint64_t c = saturating_binomial(layer_count - 1, j - 1, kCap);
    if (c > kCap || total > kCap - c) return kCap + 1;
    total += c;
  }
  return total;
}

SearchReport schedule_brute_force(const ModelProfile& profile, int period,
                                  std::optional<std::uint64_t> limit) {
  const LayerTimes times = LayerTimes::from(profile);
  const int layer_count = times.layer_count();
  if (period < 1) {
    throw ArgumentError("schedule_brute_force: period must be >= 1, got " +
                        std::to_string(period));
  }
  const std::uint64_t budget = limit.value_or(10'000'000ull);
  const std::uint64_t candidates = brute_force_candidate_count(layer_count, period);
  if (candidates > budget) {
    throw BudgetError("brute force would enumerate " + std::to_string(candidates) +
                      " candidates, over the budget of " + std::to_string(budget));
  }

  SearchReport report;
  report.best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(period));

  // Split positions live in ascending layer coordinates: position q cuts
  // between layers q and q+1. Candidates run set-count ascending, then
  // positions lexicographic, so earlier split points win ties.
  std::vector<int> splits;
  const auto evaluate = [&](int used_sets) {
    for (auto& s : sets) s.clear();
    int layer = layer_count;
    for (int j = 0; j < used_sets; ++j) {
      const int low = (j + 1 < used_sets) ? splits[static_cast<std::size_t>(used_sets - 2 - j)] : 0;
      while (layer > low) sets[static_cast<std::size_t>(j)].push_back(layer--);
    }
    ++report.solutions_explored;
    const double cost = period_objective_value(sets, times);
    if (cost < report.best_cost) {
      report.best_cost = cost;
      report.best.sets = sets;
    }
  };

  for (int j = 1; j <= std::min(period, layer_count); ++j) {
    splits.assign(static_cast<std::size_t>(j - 1), 0);
    const std::function<void(int, int)> choose = [&](int pos, int low) {
      if (pos == j - 1) {
        evaluate(j);
        return;
      }
      for (int q = low; q <= layer_count - (j - 1 - pos); ++q) {
        splits[static_cast<std::size_t>(pos)] = q;
        choose(pos + 1, q + 1);
      }
    };
    choose(0, 1);
  }

  report.best.period = period;
  report.best.sets.resize(static_cast<std::size_t>(period));
  report.best.supplemental.assign(static_cast<std::size_t>(period), {});
  report.oracle_cost = report.best_cost;
  return report;
}

Schedule bubble_fill(const Schedule& schedule, const ModelProfile& profile) {
  const LayerTimes times = LayerTimes::from(profile);
  const int layer_count = times.layer_count();
  schedule.validate(layer_count);

  Schedule filled = schedule;
  filled.supplemental.assign(static_cast<std::size_t>(schedule.period), {});

  std::vector<int> merged;
  for (int h = 1; h <= schedule.period; ++h) {
    const auto& sync = filled.sets[static_cast<std::size_t>(h - 1)];
    const double original_term = iteration_cost(sync, times).term;
    const int lead_cap = sync.empty() ? 0 : sync.front();
    std::vector<int> prefix;
    std::vector<int> best_prefix;
    for (int l = layer_count; l > lead_cap; --l) {
      prefix.push_back(l);
      merged.resize(prefix.size() + sync.size());
      std::merge(prefix.begin(), prefix.end(), sync.begin(), sync.end(), merged.begin(),
                 std::greater<int>());
      // Growing the prefix only delays transfers, so the first failure is
      // final.
      if (iteration_cost(merged, times).term > original_term) break;
      best_prefix = prefix;
    }
    filled.supplemental[static_cast<std::size_t>(h - 1)] = std::move(best_prefix);
  }
  return filled;
}

}  // namespace dreamsched
