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

#ifndef DREAMSCHED_COST_MODEL_HPP_
#define DREAMSCHED_COST_MODEL_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "dreamsched/profile.hpp"
#include "dreamsched/schedule.hpp"

namespace dreamsched {

// Flattened per-layer time vectors with the cumulative-BP table the cost
// formulas index into. bp_done(l) is the completion timestamp of layer
// l's backward computation, measured from the start of the iteration's BP
// pass (layer L first).
class LayerTimes {
 public:
  static LayerTimes from(const ModelProfile& profile);

  int layer_count() const { return static_cast<int>(bp_.size()) - 1; }
  double fp_total() const { return fp_total_; }
  double bp_total() const { return bp_total_; }
  double comm_total() const { return comm_total_; }
  double bp(int layer) const { return bp_[static_cast<std::size_t>(layer)]; }
  double comm(int layer) const { return comm_[static_cast<std::size_t>(layer)]; }
  double bp_done(int layer) const { return bp_done_[static_cast<std::size_t>(layer)]; }

 private:
  std::vector<double> bp_;       // 1-based
  std::vector<double> comm_;     // 1-based
  std::vector<double> bp_done_;  // 1-based cumulative from layer L down
  double fp_total_ = 0.0;
  double bp_total_ = 0.0;
  double comm_total_ = 0.0;
};

// Pipelined transfer of one layer set on a single FIFO link. Each layer's
// transfer starts at the later of its own BP completion and the link
// becoming free; span is measured from the first transfer's start.
struct CommSpan {
  double span = 0.0;
  double finish = 0.0;  // timestamp of the last transfer's completion
};

// `set` may be in any order; an empty set yields {0, 0}.
CommSpan effective_comm_span(std::span<const int> set, const ModelProfile& profile);
CommSpan effective_comm_span(std::span<const int> set_descending, const LayerTimes& times);

struct IterationCost {
  double bp_before = 0.0;       // BP time spent before the lead layer starts
  double bp_first = 0.0;        // lead layer's own BP time
  double overlap_window = 0.0;  // BP time remaining once the lead layer is done
  double comm_span = 0.0;       // pipelined span of the iteration's transfers
  double term = 0.0;            // bp_before + bp_first + max(overlap_window, comm_span)
};

// One iteration's cost record for an explicit communication set (sync and
// fill already merged, descending). term is evaluated as
// max(total BP, transfer finish), which the decomposition above equals.
IterationCost iteration_cost(std::span<const int> comm_set, const LayerTimes& times);

struct PeriodCost {
  std::vector<IterationCost> per_iteration;  // one record per iteration h
  double objective = 0.0;                    // sum of terms
  double total_with_fp = 0.0;                // H * total FP + objective
};

// Evaluates one synchronization period of the schedule (sync sets plus
// supplemental fills). An iteration with nothing to communicate costs the
// full BP time.
PeriodCost period_objective(const Schedule& schedule, const ModelProfile& profile);

// Hot-path variant for search loops: sync sets only, no validation.
double period_objective_value(std::span<const std::vector<int>> sets, const LayerTimes& times);

// Serial-communication baseline: R * (FP + BP + COMM).
double t_ssgd_total(const ModelProfile& profile, long long iterations);

// Periodic full synchronization: R * (FP + BP) + ceil(R/H) * COMM.
double t_lsgd_total(const ModelProfile& profile, long long iterations, int period);

// Fraction of the serial-baseline time that periodic synchronization
// saves: (1 - 1/H) * COMM / (FP + BP + COMM).
double saved_ratio(const ModelProfile& profile, int period);

// Key-value report consumed by the CLI's explain output.
void write_cost_report(const PeriodCost& cost, std::ostream& out);

}  // namespace dreamsched

#endif  // DREAMSCHED_COST_MODEL_HPP_
