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

#include "dreamsched/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "dreamsched/errors.hpp"
#include "dreamsched/text_format.hpp"

namespace dreamsched {

namespace {

constexpr std::string_view kScheduleHeader = "dreamsched-schedule v1";

std::string set_to_string(const std::vector<int>& set) {
  std::string out = "[";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(set[i]);
  }
  out += ']';
  return out;
}

std::vector<int> parse_index_list(std::string_view text, const std::string& at) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError(at + ": expected bracketed index list, got '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) {
    out.push_back(static_cast<int>(parse_u64_field(part, "layer index")));
  }
  return out;
}

}  // namespace

int Schedule::layer_count() const {
  std::size_t count = 0;
  for (const auto& set : sets) count += set.size();
  return static_cast<int>(count);
}

int Schedule::set_of_layer(int layer) const {
  for (std::size_t h = 0; h < sets.size(); ++h) {
    if (std::find(sets[h].begin(), sets[h].end(), layer) != sets[h].end()) {
      return static_cast<int>(h) + 1;
    }
  }
  throw ArgumentError("layer " + std::to_string(layer) + " not present in schedule");
}

void Schedule::validate(int layer_count) const {
  if (period < 1) throw ValidationError("schedule: period must be >= 1");
  if (static_cast<int>(sets.size()) != period) {
    throw ValidationError("schedule: expected " + std::to_string(period) + " sets, got " +
                          std::to_string(sets.size()));
  }
  if (!supplemental.empty() && static_cast<int>(supplemental.size()) != period) {
    throw ValidationError("schedule: supplemental list must be empty or hold one set per iteration");
  }
  // Contiguity in BP order: the concatenated sets spell L, L-1, ..., 1.
  int expected = layer_count;
  bool seen_empty = false;
  for (std::size_t h = 0; h < sets.size(); ++h) {
    if (sets[h].empty()) {
      seen_empty = true;
      continue;
    }
    if (seen_empty) {
      throw ValidationError("schedule: empty set before non-empty set at iteration " +
                            std::to_string(h + 1));
    }
    for (int layer : sets[h]) {
      if (layer != expected) {
        throw ValidationError("schedule: iteration " + std::to_string(h + 1) + " expected layer " +
                              std::to_string(expected) + ", got " + std::to_string(layer));
      }
      --expected;
    }
  }
  if (expected != 0) {
    throw ValidationError("schedule: covers " + std::to_string(layer_count - expected) +
                          " layers, model has " + std::to_string(layer_count));
  }
  for (std::size_t h = 0; h < supplemental.size(); ++h) {
    const auto& fill = supplemental[h];
    if (fill.empty()) continue;
    int want = layer_count;
    for (int layer : fill) {
      if (layer != want) {
        throw ValidationError("schedule: fill of iteration " + std::to_string(h + 1) +
                              " is not a descending prefix {L,...,l}");
      }
      --want;
      if (std::find(sets[h].begin(), sets[h].end(), layer) != sets[h].end()) {
        throw ValidationError("schedule: fill of iteration " + std::to_string(h + 1) +
                              " overlaps its own sync set at layer " + std::to_string(layer));
      }
    }
  }
}

Schedule Schedule::single_set(int layer_count) {
  Schedule schedule;
  schedule.period = 1;
  schedule.sets.emplace_back();
  for (int l = layer_count; l >= 1; --l) schedule.sets[0].push_back(l);
  schedule.supplemental.emplace_back();
  return schedule;
}

Schedule Schedule::equal_number_partition(int layer_count, int period) {
  if (period < 1 || period > layer_count) {
    throw ArgumentError("equal_number_partition: period must be in [1, layer_count]");
  }
  Schedule schedule;
  schedule.period = period;
  schedule.sets.assign(static_cast<std::size_t>(period), {});
  schedule.supplemental.assign(static_cast<std::size_t>(period), {});
  const int base = layer_count / period;
  const int extra = layer_count % period;
  int next = layer_count;
  for (int h = 0; h < period; ++h) {
    const int size = base + (h < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) schedule.sets[static_cast<std::size_t>(h)].push_back(next--);
  }
  return schedule;
}

Schedule parse_schedule(std::istream& in, std::string_view source_name) {
  const std::string source(source_name);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kScheduleHeader) {
    throw ParseError(source + ": missing '" + std::string(kScheduleHeader) + "' header");
  }
  if (!std::getline(in, line)) throw ParseError(source + ": missing dimension line");
  int period = 0;
  int layer_count = 0;
  {
    std::istringstream dims{line};
    std::string h_part, l_part;
    dims >> h_part >> l_part;
    if (h_part.rfind("H=", 0) != 0 || l_part.rfind("L=", 0) != 0) {
      throw ParseError(source + ": expected 'H=<int> L=<int>', got '" + line + "'");
    }
    period = static_cast<int>(parse_u64_field(h_part.substr(2), "H"));
    layer_count = static_cast<int>(parse_u64_field(l_part.substr(2), "L"));
  }
  Schedule schedule;
  schedule.period = period;
  schedule.sets.assign(static_cast<std::size_t>(period), {});
  schedule.supplemental.assign(static_cast<std::size_t>(period), {});
  int line_no = 2;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string at = source + ":" + std::to_string(line_no);
    std::istringstream row{line};
    std::string h_tok, sync_tok, fill_tok;
    row >> h_tok >> sync_tok >> fill_tok;
    if (h_tok.rfind("h=", 0) != 0 || h_tok.back() != ':' || sync_tok.rfind("sync=", 0) != 0 ||
        fill_tok.rfind("fill=", 0) != 0) {
      throw ParseError(at + ": expected 'h=<int>: sync=[...] fill=[...]'");
    }
    const int h =
        static_cast<int>(parse_u64_field(h_tok.substr(2, h_tok.size() - 3), "iteration"));
    if (h < 1 || h > period) throw ParseError(at + ": iteration " + std::to_string(h) +
                                              " outside [1, " + std::to_string(period) + "]");
    schedule.sets[static_cast<std::size_t>(h - 1)] = parse_index_list(sync_tok.substr(5), at);
    schedule.supplemental[static_cast<std::size_t>(h - 1)] =
        parse_index_list(fill_tok.substr(5), at);
    ++rows;
  }
  if (rows != period) {
    throw ParseError(source + ": expected " + std::to_string(period) + " iteration lines, got " +
                     std::to_string(rows));
  }
  schedule.validate(layer_count);
  return schedule;
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schedule file: " + path.string());
  return parse_schedule(in, path.string());
}

void write_schedule(const Schedule& schedule, std::ostream& out) {
  out << kScheduleHeader << "\n";
  out << "H=" << schedule.period << " L=" << schedule.layer_count() << "\n";
  for (int h = 1; h <= schedule.period; ++h) {
    const auto& sync = schedule.sets[static_cast<std::size_t>(h - 1)];
    out << "h=" << h << ": sync=" << set_to_string(sync) << " fill=";
    if (static_cast<std::size_t>(h) <= schedule.supplemental.size()) {
      out << set_to_string(schedule.supplemental[static_cast<std::size_t>(h - 1)]);
    } else {
      out << "[]";
    }
    out << "\n";
  }
}

void save_schedule(const Schedule& schedule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write schedule file: " + path.string());
  write_schedule(schedule, out);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dreamsched
