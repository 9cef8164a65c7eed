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

#ifndef DREAMSCHED_PROFILE_HPP_
#define DREAMSCHED_PROFILE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dreamsched {

// Per-layer timing and size record. Layer index 1 is the input side; the
// backward pass visits layers in descending index order. All times are
// seconds.
struct LayerProfile {
  int index = 0;
  std::string name;
  std::optional<std::uint64_t> param_bytes;
  double t_fp = 0.0;
  double t_bp = 0.0;
  std::optional<double> t_comm_override;
};

// alpha-beta link surrogate used when a layer carries no measured
// communication time.
struct LinkModel {
  double bandwidth = 1.0;  // bytes/second, > 0
  double latency = 0.0;    // seconds/message, >= 0
};

enum class Regime { kCommHeavy, kComputeHeavy, kBalanced };

struct ModelProfile {
  std::vector<LayerProfile> layers;  // ascending index, layers[i] has index i+1
  LinkModel link;
  std::string label;

  int layer_count() const { return static_cast<int>(layers.size()); }
  const LayerProfile& layer(int index) const { return layers[static_cast<std::size_t>(index - 1)]; }

  double total_fp() const;
  double total_bp() const;
  double total_comm() const;
  double comm_time(int index) const;

  // Throws ValidationError naming the offending layer.
  void validate() const;
};

// Override beats the link model; a layer with neither an override nor a
// byte count has no defined communication time.
double comm_time(const LayerProfile& layer, const LinkModel& link);

ModelProfile load_profile(const std::filesystem::path& path);
void save_profile(const ModelProfile& profile, const std::filesystem::path& path);
ModelProfile parse_profile(std::istream& in, std::string_view source_name);
void write_profile(const ModelProfile& profile, std::ostream& out);

// Deterministic synthetic profile. t_bp is drawn uniformly per layer; the
// link bandwidth is then solved so total-comm/total-BP lands in the
// regime's band (> 2 comm-heavy, < 0.5 compute-heavy, [0.8, 1.2] balanced).
ModelProfile synth_profile(int l_count, std::uint64_t seed, Regime regime);

Regime parse_regime(std::string_view name);
std::string_view regime_name(Regime regime);

}  // namespace dreamsched

#endif  // DREAMSCHED_PROFILE_HPP_
