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

#ifndef DREAMSCHED_SCHEDULER_HPP_
#define DREAMSCHED_SCHEDULER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dreamsched/cost_model.hpp"
#include "dreamsched/profile.hpp"
#include "dreamsched/schedule.hpp"

namespace dreamsched {

// Whether adding one more layer to an iteration's set keeps its transfers
// inside the remaining-BP overlap window (CH) or pushes past it (CO).
enum class Assignment { kCommunicationHide, kCommunicationOverflow };

// Partial assignment mid-search: layers L..next_layer+1 are distributed
// over sets 1..iteration, next_layer is the one being decided.
struct AssignmentState {
  std::vector<std::vector<int>> sets;  // sets 1..iteration, descending layers
  int next_layer = 0;                  // l
  int iteration = 1;                   // h, == sets.size()
};

Assignment classify_assignment(const AssignmentState& state, int layer,
                               const ModelProfile& profile);

enum class AssignRule { kAtLeastOne, kOptimalHiding, kDelayedCo, kDfsBranch };

struct AssignmentDecision {
  int layer = 0;
  int iteration = 0;
  AssignRule rule = AssignRule::kAtLeastOne;
};

struct SearchReport {
  Schedule best;
  double best_cost = 0.0;                        // period objective of `best`
  std::uint64_t solutions_explored = 0;          // |Omega|
  std::optional<double> oracle_cost;             // exact optimum, when known
  std::vector<AssignmentDecision> classification_log;
};

// Pruned depth-first search over layer-to-iteration assignments. Layers
// are decided in descending order; per (layer, iteration) the rule ladder
// is: assign into an empty set, assign when the augmented transfers stay
// hidden, delay past an already-overflowed set, otherwise branch both
// ways. Ties resolve to the first completed schedule in DFS order.
SearchReport schedule_dfs(const ModelProfile& profile, int period);

// Exact argmin over every contiguous descending partition into at most
// `period` ordered sets (trailing empties permitted). Refuses when the
// candidate count exceeds `limit` (default 10^7), before enumerating.
SearchReport schedule_brute_force(const ModelProfile& profile, int period,
                                  std::optional<std::uint64_t> limit = {});

// Exact number of candidates schedule_brute_force would evaluate.
std::uint64_t brute_force_candidate_count(int layer_count, int period);

// For each iteration, grows the longest descending prefix {L, ..., l}
// disjoint from the sync set whose addition leaves the iteration's cost
// term unchanged. Sync sets and the objective are untouched.
Schedule bubble_fill(const Schedule& schedule, const ModelProfile& profile);

}  // namespace dreamsched

#endif  // DREAMSCHED_SCHEDULER_HPP_
