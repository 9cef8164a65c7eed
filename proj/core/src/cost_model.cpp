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

#include "dreamsched/cost_model.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "dreamsched/errors.hpp"
#include "dreamsched/text_format.hpp"

namespace dreamsched {

IterationCost iteration_cost(std::span<const int> comm_set, const LayerTimes& times) {
  IterationCost cost;
  if (comm_set.empty()) {
    cost.bp_before = times.bp_total();
    cost.term = times.bp_total();
    return cost;
  }
  const int lead = comm_set.front();
  const CommSpan span = effective_comm_span(comm_set, times);
  cost.bp_before = times.bp_done(lead) - times.bp(lead);
  cost.bp_first = times.bp(lead);
  cost.overlap_window = times.bp_total() - times.bp_done(lead);
  cost.comm_span = span.span;
  cost.term = std::max(times.bp_total(), span.finish);
  return cost;
}

LayerTimes LayerTimes::from(const ModelProfile& profile) {
  profile.validate();
  const int count = profile.layer_count();
  LayerTimes times;
  times.bp_.assign(static_cast<std::size_t>(count) + 1, 0.0);
  times.comm_.assign(static_cast<std::size_t>(count) + 1, 0.0);
  times.bp_done_.assign(static_cast<std::size_t>(count) + 1, 0.0);
  for (int l = 1; l <= count; ++l) {
    const LayerProfile& layer = profile.layer(l);
    times.bp_[static_cast<std::size_t>(l)] = layer.t_bp;
    times.comm_[static_cast<std::size_t>(l)] = comm_time(layer, profile.link);
    times.fp_total_ += layer.t_fp;
    times.bp_total_ += layer.t_bp;
    times.comm_total_ += times.comm_[static_cast<std::size_t>(l)];
  }
  double done = 0.0;
  for (int l = count; l >= 1; --l) {
    done += times.bp_[static_cast<std::size_t>(l)];
    times.bp_done_[static_cast<std::size_t>(l)] = done;
  }
  return times;
}

CommSpan effective_comm_span(std::span<const int> set_descending, const LayerTimes& times) {
  if (set_descending.empty()) return {};
  const int first = set_descending.front();
  const double first_start = times.bp_done(first);
  double link_free = first_start + times.comm(first);
  for (std::size_t i = 1; i < set_descending.size(); ++i) {
    const int layer = set_descending[i];
    const double start = std::max(times.bp_done(layer), link_free);
    link_free = start + times.comm(layer);
  }
  return {link_free - first_start, link_free};
}

CommSpan effective_comm_span(std::span<const int> set, const ModelProfile& profile) {
  std::vector<int> descending(set.begin(), set.end());
  std::sort(descending.begin(), descending.end(), std::greater<int>());
  return effective_comm_span(descending, LayerTimes::from(profile));
}

PeriodCost period_objective(const Schedule& schedule, const ModelProfile& profile) {
  const LayerTimes times = LayerTimes::from(profile);
  schedule.validate(times.layer_count());
  PeriodCost cost;
  cost.per_iteration.reserve(static_cast<std::size_t>(schedule.period));
  std::vector<int> merged;
  for (int h = 1; h <= schedule.period; ++h) {
    const auto& sync = schedule.sets[static_cast<std::size_t>(h - 1)];
    merged.clear();
    if (static_cast<std::size_t>(h) <= schedule.supplemental.size() &&
        !schedule.supplemental[static_cast<std::size_t>(h - 1)].empty()) {
      const auto& fill = schedule.supplemental[static_cast<std::size_t>(h - 1)];
      merged.resize(sync.size() + fill.size());
      std::merge(fill.begin(), fill.end(), sync.begin(), sync.end(), merged.begin(),
                 std::greater<int>());
    } else {
      merged.assign(sync.begin(), sync.end());
    }
    cost.per_iteration.push_back(iteration_cost(merged, times));
    cost.objective += cost.per_iteration.back().term;
  }
  cost.total_with_fp = static_cast<double>(schedule.period) * times.fp_total() + cost.objective;
  return cost;
}

double period_objective_value(std::span<const std::vector<int>> sets, const LayerTimes& times) {
  double objective = 0.0;
  for (const auto& set : sets) {
    objective += iteration_cost(set, times).term;
  }
  return objective;
}

double t_ssgd_total(const ModelProfile& profile, long long iterations) {
  const LayerTimes times = LayerTimes::from(profile);
  return static_cast<double>(iterations) *
         (times.fp_total() + times.bp_total() + times.comm_total());
}

double t_lsgd_total(const ModelProfile& profile, long long iterations, int period) {
  if (period < 1) {
    throw ArgumentError("t_lsgd_total: period must be >= 1, got " + std::to_string(period));
  }
  const LayerTimes times = LayerTimes::from(profile);
  const long long comm_rounds = (iterations + period - 1) / period;
  return static_cast<double>(iterations) * (times.fp_total() + times.bp_total()) +
         static_cast<double>(comm_rounds) * times.comm_total();
}

double saved_ratio(const ModelProfile& profile, int period) {
  if (period < 1) {
    throw ArgumentError("saved_ratio: period must be >= 1, got " + std::to_string(period));
  }
  const LayerTimes times = LayerTimes::from(profile);
  const double total = times.fp_total() + times.bp_total() + times.comm_total();
  return (1.0 - 1.0 / static_cast<double>(period)) * times.comm_total() / total;
}

void write_cost_report(const PeriodCost& cost, std::ostream& out) {
  for (std::size_t h = 0; h < cost.per_iteration.size(); ++h) {
    const IterationCost& it = cost.per_iteration[h];
    out << "iteration " << (h + 1) << ": bp_before=" << format_real(it.bp_before)
        << " bp_first=" << format_real(it.bp_first)
        << " overlap_window=" << format_real(it.overlap_window)
        << " comm_span=" << format_real(it.comm_span) << " term=" << format_real(it.term) << "\n";
  }
  out << "objective=" << format_real(cost.objective) << "\n";
  out << "total_with_fp=" << format_real(cost.total_with_fp) << "\n";
}

}  // namespace dreamsched
