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

#ifndef DREAMSCHED_SCHEDULE_HPP_
#define DREAMSCHED_SCHEDULE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace dreamsched {

// An H-period assignment of layers to synchronization iterations.
//
// sets[h-1] holds the layer indexes synchronized at iteration h of the
// period, each stored in descending order. Concatenating the sets yields
// the full descending layer sequence L, L-1, ..., 1; empty sets may only
// trail. supplemental[h-1] holds the bubble-fill additions for iteration
// h: a descending prefix {L, ..., l} of the layer sequence, disjoint from
// sets[h-1].
struct Schedule {
  int period = 1;                                // H
  std::vector<std::vector<int>> sets;            // H entries
  std::vector<std::vector<int>> supplemental;    // H entries (may be empty lists)

  int layer_count() const;

  // Iteration (1-based) whose set contains `layer`.
  int set_of_layer(int layer) const;

  // Throws ValidationError when the contiguity/disjointness invariants do
  // not hold against a model with `layer_count` layers.
  void validate(int layer_count) const;

  static Schedule single_set(int layer_count);
  static Schedule equal_number_partition(int layer_count, int period);
};

Schedule load_schedule(const std::filesystem::path& path);
void save_schedule(const Schedule& schedule, const std::filesystem::path& path);
Schedule parse_schedule(std::istream& in, std::string_view source_name);
void write_schedule(const Schedule& schedule, std::ostream& out);

}  // namespace dreamsched

#endif  // DREAMSCHED_SCHEDULE_HPP_
