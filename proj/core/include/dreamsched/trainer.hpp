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

#ifndef DREAMSCHED_TRAINER_HPP_
#define DREAMSCHED_TRAINER_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "dreamsched/schedule.hpp"

namespace dreamsched {

// Diagonal quadratic f(w) = 1/2 sum_i lambda_i (w_i - w*_i)^2 split into
// layer blocks of contiguous coordinates. mu and beta are exact by
// construction; f* = 0.
struct Problem {
  std::size_t dim = 0;
  std::vector<std::size_t> block_sizes;  // L entries, sums to dim
  std::vector<double> curvature;         // dim eigenvalues
  std::vector<double> optimum;           // w*
  double noise_sigma = 0.0;              // total gradient-noise variance sigma^2

  int layer_count() const { return static_cast<int>(block_sizes.size()); }
  double mu() const;
  double beta() const;
  double objective(std::span<const double> w) const;
  void gradient(std::span<const double> w, std::span<double> out) const;
  void validate() const;
};

// Evenly spread eigenvalues over [mu, beta], equal-sized blocks (remainder
// to the front blocks), w* = `optimum_value` on every coordinate.
Problem make_quadratic(std::size_t dim, int blocks, double mu, double beta, double sigma,
                       double optimum_value = 1.0);

enum class LrSchedule { kConstant, kDecaying };

enum class SyncMode { kPartial, kFull, kSsgdEvery };

struct TrainerConfig {
  int workers = 1;          // K
  int period = 1;           // H
  Schedule schedule;        // used by kPartial (fills included)
  long long iterations = 0; // R
  LrSchedule lr = LrSchedule::kDecaying;
  double eta = 0.0;         // constant step size
  double shift_a = 0.0;     // 0 picks max(16*kappa, H) + 1
  std::uint64_t seed = 0;
  SyncMode mode = SyncMode::kPartial;
  long long log_stride = 1;

  double shift(const Problem& problem) const;
  double learning_rate(long long r, const Problem& problem) const;
  void validate(const Problem& problem) const;
};

// Deterministic per-worker stream; all randomness in a run derives from
// (config.seed, worker id).
std::mt19937_64 worker_rng(std::uint64_t seed, int worker);

struct WorkerState {
  std::vector<double> w;
  std::mt19937_64 rng;
};

// Exact gradient plus zero-mean Gaussian noise with per-coordinate
// variance sigma^2/d.
std::vector<double> stochastic_gradient(const Problem& problem, std::span<const double> w,
                                        std::mt19937_64& rng);

struct StepStats {
  double max_grad_norm_sq = 0.0;  // largest ||g||^2 drawn during the step
};

// One iteration r: every worker takes a local step with eta_r, then the
// blocks whose phase matches (r+1) mod H are replaced by the cross-worker
// mean (ascending worker order, pairwise summation). kFull averages all
// blocks when (r+1) mod H == 0; kSsgdEvery averages every iteration.
void plsgd_step(std::vector<WorkerState>& workers, long long r, const TrainerConfig& config,
                const Problem& problem, StepStats* stats = nullptr);

// Row n describes the state after n completed iterations (post-sync);
// row 0 is the common start, so gamma.front() == 0.
struct DivergenceTrace {
  std::vector<long long> iteration;
  std::vector<double> gamma;                       // Gamma_r, == sum of the row's per-layer terms
  std::vector<std::vector<double>> gamma_per_layer;
  std::vector<double> lemma_bound;                 // 4 H^2 eta_r^2 G_meas^2
  std::vector<double> subopt;                      // f(w_hat_r) - f*
  std::vector<double> iterate_subopt;              // f(mean iterate) - f*, for descent checks
  std::vector<double> eta;
  double g_meas = 0.0;                             // final running max gradient norm
  double final_subopt = 0.0;                       // f(w_hat_R) - f*
  double final_iterate_subopt = 0.0;
};

DivergenceTrace run_training(const TrainerConfig& config, const Problem& problem);

// Mean final suboptimality per R across seeds, fitted as a log-log slope.
// The 1/R regime needs sigma > 0; noise-free runs come out much steeper.
double rate_experiment(const Problem& problem, const TrainerConfig& config_template,
                       std::span<const long long> iteration_counts,
                       std::span<const std::uint64_t> seeds);

// CSV: r,gamma,gamma_l_1..L,lemma2_bound,subopt,eta
void write_divergence_csv(const DivergenceTrace& trace, std::ostream& out);

// key=value run summary
void write_run_summary(const DivergenceTrace& trace, std::ostream& out);

}  // namespace dreamsched

#endif  // DREAMSCHED_TRAINER_HPP_
