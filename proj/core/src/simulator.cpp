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

#include "dreamsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dreamsched/errors.hpp"
#include "dreamsched/scheduler.hpp"
#include "dreamsched/text_format.hpp"

namespace dreamsched {

namespace {

struct SimTables {
  std::vector<double> bp;    // 1-based
  std::vector<double> comm;  // 1-based
  double fp_total = 0.0;
  double bp_total = 0.0;
  double comm_total = 0.0;
};

SimTables tables_of(const ModelProfile& profile) {
  SimTables t;
  const int count = profile.layer_count();
  t.bp.assign(static_cast<std::size_t>(count) + 1, 0.0);
  t.comm.assign(static_cast<std::size_t>(count) + 1, 0.0);
  for (int l = 1; l <= count; ++l) {
    t.bp[static_cast<std::size_t>(l)] = profile.layer(l).t_bp;
    t.comm[static_cast<std::size_t>(l)] = profile.comm_time(l);
    t.fp_total += profile.layer(l).t_fp;
    t.bp_total += profile.layer(l).t_bp;
    t.comm_total += t.comm[static_cast<std::size_t>(l)];
  }
  return t;
}

long long quantize_us(double seconds) {
  // round-half-even
  return static_cast<long long>(std::nearbyint(seconds * 1e6));
}

std::string event_name(const Event& e) {
  switch (e.kind) {
    case EventKind::kFp:
      return "FP";
    case EventKind::kBp:
      return "BP L" + std::to_string(e.layer);
    case EventKind::kComm:
      return e.layer == kAllLayers ? std::string("COMM model") : "COMM L" + std::to_string(e.layer);
    case EventKind::kSyncBarrier:
      return "SYNC";
  }
  return "?";
}

}  // namespace

Timeline simulate_run(const ModelProfile& profile, Mode mode,
                      const std::optional<Schedule>& schedule, long long iterations,
                      std::optional<int> period) {
  profile.validate();
  if (iterations < 1) {
    throw ArgumentError("simulate_run: iterations must be >= 1, got " +
                        std::to_string(iterations));
  }
  const int layer_count = profile.layer_count();

  int h_period = 1;
  if (mode == Mode::kPlsgd) {
    if (!schedule) throw ArgumentError("simulate_run: plsgd mode requires a schedule");
    schedule->validate(layer_count);
    h_period = schedule->period;
    if (period && *period != h_period) {
      throw ArgumentError("simulate_run: explicit period disagrees with the schedule's");
    }
  } else if (mode == Mode::kFlsgd) {
    if (period) {
      h_period = *period;
    } else if (schedule) {
      h_period = schedule->period;
    } else {
      throw ArgumentError("simulate_run: flsgd mode needs a period or a schedule to take it from");
    }
    if (h_period < 1) throw ArgumentError("simulate_run: period must be >= 1");
  }

  const SimTables t = tables_of(profile);

  // Per-phase membership of the link work. Phase p covers global
  // iterations r with (r-1) % H == p-1.
  std::vector<std::vector<bool>> phase_member;
  if (mode == Mode::kPlsgd) {
    phase_member.assign(static_cast<std::size_t>(h_period),
                        std::vector<bool>(static_cast<std::size_t>(layer_count) + 1, false));
    for (int h = 1; h <= h_period; ++h) {
      auto& member = phase_member[static_cast<std::size_t>(h - 1)];
      for (int l : schedule->sets[static_cast<std::size_t>(h - 1)]) {
        member[static_cast<std::size_t>(l)] = true;
      }
      if (static_cast<std::size_t>(h) <= schedule->supplemental.size()) {
        for (int l : schedule->supplemental[static_cast<std::size_t>(h - 1)]) {
          member[static_cast<std::size_t>(l)] = true;
        }
      }
    }
  }

  Timeline timeline;
  timeline.mode = mode;
  timeline.period = h_period;
  auto& events = timeline.events;

  double clock = 0.0;
  for (long long r = 1; r <= iterations; ++r) {
    if (t.fp_total > 0.0) {
      events.push_back({EventKind::kFp, kAllLayers, r, clock, clock + t.fp_total, Lane::kCompute});
    }
    double compute = clock + t.fp_total;
    double link_free = compute;  // the barrier drained the link before this iteration
    double last_comm_end = compute;

    const std::vector<bool>* member = nullptr;
    if (mode == Mode::kPlsgd) {
      member = &phase_member[static_cast<std::size_t>((r - 1) % h_period)];
    }

    for (int l = layer_count; l >= 1; --l) {
      const double bp_end = compute + t.bp[static_cast<std::size_t>(l)];
      events.push_back({EventKind::kBp, l, r, compute, bp_end, Lane::kCompute});
      compute = bp_end;
      const bool communicates =
          mode == Mode::kWfbp || (member != nullptr && (*member)[static_cast<std::size_t>(l)]);
      if (communicates) {
        const double start = std::max(bp_end, link_free);
        link_free = start + t.comm[static_cast<std::size_t>(l)];
        last_comm_end = link_free;
        events.push_back({EventKind::kComm, l, r, start, link_free, Lane::kLink});
      }
    }

    if (mode == Mode::kSsgd) {
      double start = compute;
      for (int l = layer_count; l >= 1; --l) {
        const double end = start + t.comm[static_cast<std::size_t>(l)];
        events.push_back({EventKind::kComm, l, r, start, end, Lane::kLink});
        start = end;
      }
      last_comm_end = start;
    } else if (mode == Mode::kFlsgd && (r % h_period == 0 || r == iterations)) {
      last_comm_end = compute + t.comm_total;
      events.push_back({EventKind::kComm, kAllLayers, r, compute, last_comm_end, Lane::kLink});
    }

    const double iteration_end = std::max(compute, last_comm_end);
    if (iteration_end > compute) {
      events.push_back(
          {EventKind::kSyncBarrier, kAllLayers, r, compute, iteration_end, Lane::kCompute});
    }
    clock = iteration_end;
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.start < b.start; });
  timeline.makespan = clock;
  return timeline;
}

void write_trace(const Timeline& timeline, std::ostream& out) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const Event& e : timeline.events) {
    const long long ts = quantize_us(e.start);
    const long long end = quantize_us(e.end);
    nlohmann::ordered_json record;
    record["name"] = event_name(e);
    record["ph"] = "X";
    record["ts"] = ts;
    record["dur"] = end - ts;
    record["pid"] = std::string(mode_name(timeline.mode));
    record["tid"] = e.lane == Lane::kCompute ? "compute" : "link";
    record["args"]["iteration"] = e.iteration;
    if (e.layer != kAllLayers) record["args"]["layer"] = e.layer;
    records.push_back(std::move(record));
  }
  out << records.dump(1) << "\n";
}

void export_trace(const Timeline& timeline, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file: " + path.string());
  write_trace(timeline, out);
  if (!out) throw IoError("write failed: " + path.string());
}

ModeReport compare_modes(const ModelProfile& profile, int period, long long iterations) {
  ModeReport report;
  report.schedule = bubble_fill(schedule_dfs(profile, period).best, profile);
  const auto run = [&](Mode mode) {
    const std::optional<Schedule> sched =
        mode == Mode::kPlsgd ? std::optional<Schedule>(report.schedule) : std::nullopt;
    const Timeline timeline = simulate_run(profile, mode, sched, iterations, period);
    report.rows.push_back(
        {mode, timeline.makespan, timeline.makespan / static_cast<double>(iterations)});
  };
  run(Mode::kSsgd);
  run(Mode::kWfbp);
  run(Mode::kFlsgd);
  run(Mode::kPlsgd);
  report.speedup_vs_wfbp = report.rows[1].makespan / report.rows[3].makespan;
  report.speedup_vs_flsgd = report.rows[2].makespan / report.rows[3].makespan;
  return report;
}

void write_mode_report(const ModeReport& report, std::ostream& out) {
  out << "mode\tmakespan_s\tavg_iter_s\n";
  for (const auto& row : report.rows) {
    out << mode_name(row.mode) << '\t' << format_real(row.makespan) << '\t'
        << format_real(row.avg_iteration) << '\n';
  }
  out << "S1=" << format_real(report.speedup_vs_wfbp) << "\n";
  out << "S2=" << format_real(report.speedup_vs_flsgd) << "\n";
}

Mode parse_mode(std::string_view name) {
  if (name == "ssgd") return Mode::kSsgd;
  if (name == "wfbp") return Mode::kWfbp;
  if (name == "flsgd") return Mode::kFlsgd;
  if (name == "plsgd") return Mode::kPlsgd;
  throw ArgumentError("unknown mode '" + std::string(name) +
                      "' (expected ssgd, wfbp, flsgd or plsgd)");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kSsgd:
      return "ssgd";
    case Mode::kWfbp:
      return "wfbp";
    case Mode::kFlsgd:
      return "flsgd";
    case Mode::kPlsgd:
      return "plsgd";
  }
  return "unknown";
}

}  // namespace dreamsched
