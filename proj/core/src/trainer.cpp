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

#include "dreamsched/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "dreamsched/errors.hpp"
#include "dreamsched/text_format.hpp"

namespace dreamsched {

namespace {

// Sum of workers' coordinate `i` over [lo, hi), pairwise so every worker
// count reduces in the same association order.
double pairwise_coord_sum(const std::vector<WorkerState>& workers, std::size_t i, std::size_t lo,
                          std::size_t hi) {
  const std::size_t n = hi - lo;
  if (n == 1) return workers[lo].w[i];
  if (n == 2) return workers[lo].w[i] + workers[lo + 1].w[i];
  const std::size_t mid = lo + n / 2;
  return pairwise_coord_sum(workers, i, lo, mid) + pairwise_coord_sum(workers, i, mid, hi);
}

std::vector<double> worker_mean(const std::vector<WorkerState>& workers) {
  const std::size_t dim = workers.front().w.size();
  std::vector<double> mean(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mean[i] = pairwise_coord_sum(workers, i, 0, workers.size()) /
              static_cast<double>(workers.size());
  }
  return mean;
}

std::vector<std::size_t> block_offsets(const Problem& problem) {
  std::vector<std::size_t> offsets(problem.block_sizes.size() + 1, 0);
  for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
    offsets[b + 1] = offsets[b] + problem.block_sizes[b];
  }
  return offsets;
}

}  // namespace

double Problem::mu() const { return *std::min_element(curvature.begin(), curvature.end()); }

double Problem::beta() const { return *std::max_element(curvature.begin(), curvature.end()); }

double Problem::objective(std::span<const double> w) const {
  double value = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = w[i] - optimum[i];
    value += 0.5 * curvature[i] * d * d;
  }
  return value;
}

void Problem::gradient(std::span<const double> w, std::span<double> out) const {
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = curvature[i] * (w[i] - optimum[i]);
  }
}

void Problem::validate() const {
  if (dim < 1) throw ValidationError("problem: dim must be >= 1");
  if (block_sizes.empty()) throw ValidationError("problem: needs at least one layer block");
  std::size_t covered = 0;
  for (std::size_t size : block_sizes) {
    if (size == 0) throw ValidationError("problem: zero-sized layer block");
    covered += size;
  }
  if (covered != dim) {
    throw ValidationError("problem: block sizes sum to " + std::to_string(covered) +
                          ", dim is " + std::to_string(dim));
  }
  if (curvature.size() != dim || optimum.size() != dim) {
    throw ValidationError("problem: curvature/optimum must have dim entries");
  }
  for (double lambda : curvature) {
    if (!(lambda > 0.0)) throw ValidationError("problem: eigenvalues must be positive");
  }
  if (!(noise_sigma >= 0.0)) throw ValidationError("problem: sigma must be non-negative");
}

Problem make_quadratic(std::size_t dim, int blocks, double mu, double beta, double sigma,
                       double optimum_value) {
  if (blocks < 1 || static_cast<std::size_t>(blocks) > dim) {
    throw ArgumentError("make_quadratic: blocks must be in [1, dim]");
  }
  if (!(mu > 0.0) || !(beta >= mu)) {
    throw ArgumentError("make_quadratic: need 0 < mu <= beta");
  }
  Problem problem;
  problem.dim = dim;
  problem.noise_sigma = sigma;
  const std::size_t base = dim / static_cast<std::size_t>(blocks);
  const std::size_t extra = dim % static_cast<std::size_t>(blocks);
  for (int b = 0; b < blocks; ++b) {
    problem.block_sizes.push_back(base + (static_cast<std::size_t>(b) < extra ? 1 : 0));
  }
  problem.curvature.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    problem.curvature[i] =
        dim == 1 ? mu : mu + (beta - mu) * static_cast<double>(i) / static_cast<double>(dim - 1);
  }
  problem.optimum.assign(dim, optimum_value);
  problem.validate();
  return problem;
}

double TrainerConfig::shift(const Problem& problem) const {
  if (shift_a > 0.0) return shift_a;
  const double kappa = problem.beta() / problem.mu();
  return std::max(16.0 * kappa, static_cast<double>(period)) + 1.0;
}

double TrainerConfig::learning_rate(long long r, const Problem& problem) const {
  if (lr == LrSchedule::kConstant) return eta;
  return 4.0 / (problem.mu() * (shift(problem) + static_cast<double>(r)));
}

void TrainerConfig::validate(const Problem& problem) const {
  problem.validate();
  if (workers < 1) throw ValidationError("trainer: workers must be >= 1");
  if (period < 1) throw ValidationError("trainer: period must be >= 1");
  if (iterations < 0) throw ValidationError("trainer: iterations must be >= 0");
  if (log_stride < 1) throw ValidationError("trainer: log stride must be >= 1");
  if (lr == LrSchedule::kConstant && !(eta > 0.0)) {
    throw ValidationError("trainer: constant lr needs eta > 0");
  }
  if (lr == LrSchedule::kDecaying) {
    const double kappa = problem.beta() / problem.mu();
    const double floor = std::max(16.0 * kappa, static_cast<double>(period));
    if (!(shift(problem) > floor)) {
      throw ValidationError("trainer: shift parameter must exceed max(16*kappa, H) = " +
                            format_real(floor));
    }
  }
  if (mode == SyncMode::kPartial) {
    if (schedule.period != period) {
      throw ValidationError("trainer: schedule period " + std::to_string(schedule.period) +
                            " does not match config period " + std::to_string(period));
    }
    try {
      schedule.validate(problem.layer_count());
    } catch (const ValidationError& err) {
      throw ValidationError("trainer: schedule does not fit the problem's " +
                            std::to_string(problem.layer_count()) +
                            " blocks: " + err.what());
    }
  }
}

std::mt19937_64 worker_rng(std::uint64_t seed, int worker) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(worker), 0x5eedu};
  return std::mt19937_64(seq);
}

std::vector<double> stochastic_gradient(const Problem& problem, std::span<const double> w,
                                        std::mt19937_64& rng) {
  std::vector<double> g(problem.dim);
  problem.gradient(w, g);
  if (problem.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(
        0.0, problem.noise_sigma / std::sqrt(static_cast<double>(problem.dim)));
    for (std::size_t i = 0; i < problem.dim; ++i) g[i] += noise(rng);
  }
  return g;
}

void plsgd_step(std::vector<WorkerState>& workers, long long r, const TrainerConfig& config,
                const Problem& problem, StepStats* stats) {
  const double eta_r = config.learning_rate(r, problem);
  double max_norm_sq = 0.0;
  for (auto& worker : workers) {
    const std::vector<double> g = stochastic_gradient(problem, worker.w, worker.rng);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < problem.dim; ++i) {
      norm_sq += g[i] * g[i];
      worker.w[i] -= eta_r * g[i];
    }
    max_norm_sq = std::max(max_norm_sq, norm_sq);
  }
  if (stats) stats->max_grad_norm_sq = max_norm_sq;

  const int period = config.period;
  const long long phase = (r + 1) % period;
  std::vector<bool> sync_block(problem.block_sizes.size() + 1, false);
  switch (config.mode) {
    case SyncMode::kSsgdEvery:
      sync_block.assign(sync_block.size(), true);
      break;
    case SyncMode::kFull:
      if (phase == 0) sync_block.assign(sync_block.size(), true);
      break;
    case SyncMode::kPartial: {
      const int h = phase == 0 ? period : static_cast<int>(phase);
      for (int l : config.schedule.sets[static_cast<std::size_t>(h - 1)]) {
        sync_block[static_cast<std::size_t>(l)] = true;
      }
      if (static_cast<std::size_t>(h) <= config.schedule.supplemental.size()) {
        for (int l : config.schedule.supplemental[static_cast<std::size_t>(h - 1)]) {
          sync_block[static_cast<std::size_t>(l)] = true;
        }
      }
      break;
    }
  }

  const auto offsets = block_offsets(problem);
  for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
    if (!sync_block[b + 1]) continue;
    for (std::size_t i = offsets[b]; i < offsets[b + 1]; ++i) {
      const double mean =
          pairwise_coord_sum(workers, i, 0, workers.size()) / static_cast<double>(workers.size());
      for (auto& worker : workers) worker.w[i] = mean;
    }
  }
}

DivergenceTrace run_training(const TrainerConfig& config, const Problem& problem) {
  config.validate(problem);
  const int layer_count = problem.layer_count();
  const auto offsets = block_offsets(problem);

  std::vector<WorkerState> workers(static_cast<std::size_t>(config.workers));
  for (int k = 0; k < config.workers; ++k) {
    workers[static_cast<std::size_t>(k)].w.assign(problem.dim, 0.0);
    workers[static_cast<std::size_t>(k)].rng = worker_rng(config.seed, k);
  }

  DivergenceTrace trace;
  std::vector<double> weighted_sum(problem.dim, 0.0);
  double weight_total = 0.0;
  std::vector<double> w_hat(problem.dim, 0.0);
  const double shift = config.shift(problem);

  const auto log_row = [&](long long n) {
    const std::vector<double> mean = worker_mean(workers);
    std::vector<double> per_layer(static_cast<std::size_t>(layer_count), 0.0);
    for (std::size_t b = 0; b < per_layer.size(); ++b) {
      double acc = 0.0;
      for (const auto& worker : workers) {
        for (std::size_t i = offsets[b]; i < offsets[b + 1]; ++i) {
          const double d = mean[i] - worker.w[i];
          acc += d * d;
        }
      }
      per_layer[b] = acc / static_cast<double>(config.workers);
    }
    double gamma = 0.0;
    for (double g : per_layer) gamma += g;

    const double eta_n = config.learning_rate(n, problem);
    const double h = static_cast<double>(config.period);
    trace.iteration.push_back(n);
    trace.gamma.push_back(gamma);
    trace.gamma_per_layer.push_back(std::move(per_layer));
    trace.lemma_bound.push_back(4.0 * h * h * eta_n * eta_n * trace.g_meas * trace.g_meas);
    if (weight_total > 0.0) {
      for (std::size_t i = 0; i < problem.dim; ++i) w_hat[i] = weighted_sum[i] / weight_total;
      trace.subopt.push_back(problem.objective(w_hat));
    } else {
      trace.subopt.push_back(problem.objective(mean));
    }
    trace.iterate_subopt.push_back(problem.objective(mean));
    trace.eta.push_back(eta_n);
  };

  log_row(0);

  StepStats stats;
  for (long long r = 0; r < config.iterations; ++r) {
    const std::vector<double> mean = worker_mean(workers);
    const double p_r = config.lr == LrSchedule::kDecaying
                           ? (shift + static_cast<double>(r)) * (shift + static_cast<double>(r))
                           : 1.0;
    for (std::size_t i = 0; i < problem.dim; ++i) weighted_sum[i] += p_r * mean[i];
    weight_total += p_r;

    plsgd_step(workers, r, config, problem, &stats);
    trace.g_meas = std::max(trace.g_meas, std::sqrt(stats.max_grad_norm_sq));

    const long long n = r + 1;
    if (n % config.log_stride == 0 || n == config.iterations) log_row(n);
  }

  trace.final_subopt = trace.subopt.back();
  trace.final_iterate_subopt = trace.iterate_subopt.back();
  return trace;
}

double rate_experiment(const Problem& problem, const TrainerConfig& config_template,
                       std::span<const long long> iteration_counts,
                       std::span<const std::uint64_t> seeds) {
  if (iteration_counts.size() < 3) {
    throw ArgumentError("rate_experiment: needs at least 3 iteration counts");
  }
  if (seeds.empty()) throw ArgumentError("rate_experiment: needs at least one seed");
  if (config_template.lr != LrSchedule::kDecaying) {
    throw ArgumentError("rate_experiment: needs the decaying lr schedule");
  }

  std::vector<double> log_r;
  std::vector<double> log_f;
  for (long long r_total : iteration_counts) {
    double mean = 0.0;
    for (std::uint64_t seed : seeds) {
      TrainerConfig config = config_template;
      config.iterations = r_total;
      config.seed = seed;
      config.log_stride = r_total;  // endpoints only
      mean += run_training(config, problem).final_subopt;
    }
    mean /= static_cast<double>(seeds.size());
    log_r.push_back(std::log(static_cast<double>(r_total)));
    log_f.push_back(std::log(mean));
  }

  const double n = static_cast<double>(log_r.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < log_r.size(); ++i) {
    mean_x += log_r[i];
    mean_y += log_f[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_r.size(); ++i) {
    sxx += (log_r[i] - mean_x) * (log_r[i] - mean_x);
    sxy += (log_r[i] - mean_x) * (log_f[i] - mean_y);
  }
  return sxy / sxx;
}

void write_divergence_csv(const DivergenceTrace& trace, std::ostream& out) {
  const std::size_t layer_count =
      trace.gamma_per_layer.empty() ? 0 : trace.gamma_per_layer.front().size();
  out << "r,gamma";
  for (std::size_t l = 1; l <= layer_count; ++l) out << ",gamma_l_" << l;
  out << ",lemma2_bound,subopt,eta\n";
  for (std::size_t row = 0; row < trace.iteration.size(); ++row) {
    out << trace.iteration[row] << ',' << format_real(trace.gamma[row]);
    for (double g : trace.gamma_per_layer[row]) out << ',' << format_real(g);
    out << ',' << format_real(trace.lemma_bound[row]) << ',' << format_real(trace.subopt[row])
        << ',' << format_real(trace.eta[row]) << "\n";
  }
}

void write_run_summary(const DivergenceTrace& trace, std::ostream& out) {
  double gamma_mean = 0.0;
  double gamma_max = 0.0;
  std::size_t counted = 0;
  for (std::size_t row = 0; row < trace.gamma.size(); ++row) {
    if (trace.iteration[row] == 0) continue;
    gamma_mean += trace.gamma[row];
    gamma_max = std::max(gamma_max, trace.gamma[row]);
    ++counted;
  }
  if (counted > 0) gamma_mean /= static_cast<double>(counted);
  out << "iterations=" << (trace.iteration.empty() ? 0 : trace.iteration.back()) << "\n";
  out << "final_subopt=" << format_real(trace.final_subopt) << "\n";
  out << "final_iterate_subopt=" << format_real(trace.final_iterate_subopt) << "\n";
  out << "g_meas=" << format_real(trace.g_meas) << "\n";
  out << "gamma_mean=" << format_real(gamma_mean) << "\n";
  out << "gamma_max=" << format_real(gamma_max) << "\n";
}

}  // namespace dreamsched
