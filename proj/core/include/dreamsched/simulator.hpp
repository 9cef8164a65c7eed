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

#ifndef DREAMSCHED_SIMULATOR_HPP_
#define DREAMSCHED_SIMULATOR_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dreamsched/profile.hpp"
#include "dreamsched/schedule.hpp"

namespace dreamsched {

enum class Mode { kSsgd, kWfbp, kFlsgd, kPlsgd };

enum class Lane { kCompute, kLink };

enum class EventKind { kFp, kBp, kComm, kSyncBarrier };

// Marker for events that cover the whole model rather than one layer.
inline constexpr int kAllLayers = 0;

struct Event {
  EventKind kind = EventKind::kFp;
  int layer = kAllLayers;
  long long iteration = 0;  // 1-based global iteration
  double start = 0.0;
  double end = 0.0;
  Lane lane = Lane::kCompute;
};

struct Timeline {
  std::vector<Event> events;  // time-ordered
  double makespan = 0.0;
  Mode mode = Mode::kSsgd;
  int period = 1;
};

// Event-level replay of R training iterations on one compute lane and one
// FIFO link. A transfer may start only once its layer's backward step of
// the same iteration finished, and the next iteration's forward pass
// waits for all outstanding transfers.
//
// plsgd needs a schedule. flsgd takes its period from `period` or, when
// absent, from the schedule; ssgd/wfbp ignore both. When R is not a
// multiple of H the final partial period is simulated as-is (flsgd still
// synchronizes once at the end of the run).
Timeline simulate_run(const ModelProfile& profile, Mode mode,
                      const std::optional<Schedule>& schedule, long long iterations,
                      std::optional<int> period = {});

// Trace-event JSON (complete events, microsecond timestamps, pid = mode,
// tid = lane); loads in the usual browser trace viewers.
void export_trace(const Timeline& timeline, const std::filesystem::path& path);
void write_trace(const Timeline& timeline, std::ostream& out);

struct ModeReport {
  struct Row {
    Mode mode;
    double makespan = 0.0;
    double avg_iteration = 0.0;
  };
  std::vector<Row> rows;  // ssgd, wfbp, flsgd, plsgd
  double speedup_vs_wfbp = 0.0;   // S1
  double speedup_vs_flsgd = 0.0;  // S2
  Schedule schedule;              // what plsgd ran (search result + fills)
};

// Runs all four modes on one profile; plsgd uses the searched schedule
// with bubble fills.
ModeReport compare_modes(const ModelProfile& profile, int period, long long iterations);

// Tab-separated table plus S1=/S2= footer lines.
void write_mode_report(const ModeReport& report, std::ostream& out);

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

}  // namespace dreamsched

#endif  // DREAMSCHED_SIMULATOR_HPP_
