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

#include "dreamsched/profile.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "dreamsched/errors.hpp"
#include "dreamsched/text_format.hpp"

namespace dreamsched {

namespace {

constexpr std::string_view kProfileHeader = "dreamsched-profile v1";
constexpr double kMicro = 1e-6;

std::uint64_t round_us(double seconds) {
  return static_cast<std::uint64_t>(std::llround(seconds * 1e6));
}

}  // namespace

double ModelProfile::total_fp() const {
  double sum = 0.0;
  for (const auto& l : layers) sum += l.t_fp;
  return sum;
}

double ModelProfile::total_bp() const {
  double sum = 0.0;
  for (const auto& l : layers) sum += l.t_bp;
  return sum;
}

double ModelProfile::total_comm() const {
  double sum = 0.0;
  for (const auto& l : layers) sum += dreamsched::comm_time(l, link);
  return sum;
}

double ModelProfile::comm_time(int index) const {
  return dreamsched::comm_time(layer(index), link);
}

void ModelProfile::validate() const {
  if (layers.empty()) {
    throw ValidationError("profile '" + label + "': empty layer list");
  }
  const int count = layer_count();
  std::vector<bool> seen(static_cast<std::size_t>(count) + 1, false);
  for (std::size_t pos = 0; pos < layers.size(); ++pos) {
    const LayerProfile& l = layers[pos];
    if (l.index < 1 || l.index > count) {
      throw ValidationError("profile '" + label + "': layer index " + std::to_string(l.index) +
                            " outside [1, " + std::to_string(count) + "]");
    }
    if (seen[static_cast<std::size_t>(l.index)]) {
      throw ValidationError("profile '" + label + "': duplicate layer index " +
                            std::to_string(l.index));
    }
    seen[static_cast<std::size_t>(l.index)] = true;
    if (l.index != static_cast<int>(pos) + 1) {
      throw ValidationError("profile '" + label + "': layer index " + std::to_string(l.index) +
                            " out of order at position " + std::to_string(pos + 1));
    }
    if (!(l.t_fp >= 0.0) || !(l.t_bp >= 0.0)) {
      throw ValidationError("profile '" + label + "': negative time on layer " +
                            std::to_string(l.index));
    }
    if (l.t_comm_override && !(*l.t_comm_override >= 0.0)) {
      throw ValidationError("profile '" + label + "': negative comm override on layer " +
                            std::to_string(l.index));
    }
    if (!l.t_comm_override && !l.param_bytes) {
      throw ValidationError("profile '" + label + "': layer " + std::to_string(l.index) +
                            " has neither param bytes nor a comm override");
    }
  }
  if (!(link.bandwidth > 0.0)) {
    throw ValidationError("profile '" + label + "': link bandwidth must be positive");
  }
  if (!(link.latency >= 0.0)) {
    throw ValidationError("profile '" + label + "': link latency must be non-negative");
  }
}

double comm_time(const LayerProfile& layer, const LinkModel& link) {
  if (layer.t_comm_override) return *layer.t_comm_override;
  if (!layer.param_bytes) {
    throw ValidationError("layer " + std::to_string(layer.index) +
                          " has no comm override and no param bytes; comm time undefined");
  }
  return link.latency + static_cast<double>(*layer.param_bytes) / link.bandwidth;
}

ModelProfile parse_profile(std::istream& in, std::string_view source_name) {
  std::string source(source_name);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kProfileHeader) {
    throw ParseError(source + ": missing '" + std::string(kProfileHeader) + "' header");
  }
  ModelProfile profile;
  profile.label = source;
  bool saw_link = false;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, '\t');
    const std::string at = source + ":" + std::to_string(line_no);
    if (fields[0] == "link") {
      if (fields.size() != 3) throw ParseError(at + ": link line needs 3 fields");
      profile.link.bandwidth = parse_real_field(fields[1], "link bandwidth");
      profile.link.latency =
          static_cast<double>(parse_u64_field(fields[2], "link latency_us")) * kMicro;
      saw_link = true;
      continue;
    }
    if (saw_link) throw ParseError(at + ": layer line after link footer");
    if (fields.size() != 6) throw ParseError(at + ": layer line needs 6 fields");
    LayerProfile layer;
    layer.index = static_cast<int>(parse_u64_field(fields[0], "layer index"));
    layer.name = std::string(trim(fields[1]));
    layer.param_bytes = parse_u64_field(fields[2], "param_bytes");
    layer.t_fp = static_cast<double>(parse_u64_field(fields[3], "t_fp_us")) * kMicro;
    layer.t_bp = static_cast<double>(parse_u64_field(fields[4], "t_bp_us")) * kMicro;
    if (trim(fields[5]) != "-") {
      layer.t_comm_override =
          static_cast<double>(parse_u64_field(fields[5], "t_comm_us")) * kMicro;
    }
    profile.layers.push_back(std::move(layer));
  }
  if (!saw_link) throw ParseError(source + ": missing link footer");
  profile.validate();
  return profile;
}

ModelProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile file: " + path.string());
  return parse_profile(in, path.string());
}

void write_profile(const ModelProfile& profile, std::ostream& out) {
  out << kProfileHeader << "\n";
  for (const auto& l : profile.layers) {
    out << l.index << '\t' << l.name << '\t' << (l.param_bytes ? *l.param_bytes : 0) << '\t'
        << round_us(l.t_fp) << '\t' << round_us(l.t_bp) << '\t';
    if (l.t_comm_override) {
      out << round_us(*l.t_comm_override);
    } else {
      out << '-';
    }
    out << '\n';
  }
  out << "link\t" << format_real(profile.link.bandwidth) << '\t' << round_us(profile.link.latency)
      << '\n';
}

void save_profile(const ModelProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profile file: " + path.string());
  write_profile(profile, out);
  if (!out) throw IoError("write failed: " + path.string());
}

ModelProfile synth_profile(int l_count, std::uint64_t seed, Regime regime) {
  if (l_count < 1) {
    throw ArgumentError("synth_profile: layer count must be >= 1, got " +
                        std::to_string(l_count));
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(l_count),
                    static_cast<std::uint32_t>(regime) + 0x9e37u};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::uint64_t> bp_us(500, 5000);
  std::uniform_real_distribution<double> fp_frac(0.3, 0.7);
  std::uniform_int_distribution<std::uint64_t> bytes(1'000'000, 50'000'000);

  ModelProfile profile;
  std::ostringstream label;
  label << "synth-" << regime_name(regime) << "-L" << l_count << "-seed" << seed;
  profile.label = label.str();

  double bp_total = 0.0;
  std::uint64_t byte_total = 0;
  for (int i = 1; i <= l_count; ++i) {
    LayerProfile layer;
    layer.index = i;
    layer.name = "layer" + std::to_string(i);
    const std::uint64_t bp = bp_us(rng);
    layer.t_bp = static_cast<double>(bp) * kMicro;
    layer.t_fp = static_cast<double>(std::llround(static_cast<double>(bp) * fp_frac(rng))) * kMicro;
    layer.param_bytes = bytes(rng);
    bp_total += layer.t_bp;
    byte_total += *layer.param_bytes;
    profile.layers.push_back(std::move(layer));
  }

  double ratio = 1.0;
  switch (regime) {
    case Regime::kCommHeavy:
      ratio = std::uniform_real_distribution<double>(2.5, 4.0)(rng);
      break;
    case Regime::kComputeHeavy:
      ratio = std::uniform_real_distribution<double>(0.2, 0.45)(rng);
      break;
    case Regime::kBalanced:
      ratio = std::uniform_real_distribution<double>(0.85, 1.15)(rng);
      break;
  }
  profile.link.bandwidth = static_cast<double>(byte_total) / (ratio * bp_total);
  profile.link.latency = 0.0;
  profile.validate();
  return profile;
}

Regime parse_regime(std::string_view name) {
  if (name == "comm-heavy") return Regime::kCommHeavy;
  if (name == "compute-heavy") return Regime::kComputeHeavy;
  if (name == "balanced") return Regime::kBalanced;
  throw ArgumentError("unknown regime '" + std::string(name) +
                      "' (expected comm-heavy, compute-heavy or balanced)");
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::kCommHeavy:
      return "comm-heavy";
    case Regime::kComputeHeavy:
      return "compute-heavy";
    case Regime::kBalanced:
      return "balanced";
  }
  return "unknown";
}

}  // namespace dreamsched
