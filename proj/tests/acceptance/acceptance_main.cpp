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
//
// End-to-end acceptance checks. Each criterion prints one pass/fail line
// and enforces its own runtime limit; run `dreamsched_acceptance --only N`
// for a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dreamsched/cost_model.hpp"
#include "dreamsched/profile.hpp"
#include "dreamsched/schedule.hpp"
#include "dreamsched/scheduler.hpp"
#include "dreamsched/simulator.hpp"
#include "dreamsched/trainer.hpp"
#include "instance_gen.hpp"

namespace {

using namespace dreamsched;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---- shared random-instance suites ------------------------------------

struct GapInstance {
  ModelProfile profile;
  int period;
};

// Criterion 3/4/5 suite: 200 instances, L <= 12, H <= 4, all regimes, in
// the L >= 2H-1 regime the paper's scheduling experiments use.
std::vector<GapInstance> gap_suite() {
  std::vector<GapInstance> suite;
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 200; ++i) {
    const int period = 1 + static_cast<int>(rng() % 4);
    const int low = std::max(2 * period - 1, 1);
    const int layers = low + static_cast<int>(rng() % static_cast<std::uint64_t>(13 - low));
    suite.push_back({synth_profile(layers, rng(), testing::random_regime(rng)), period});
  }
  return suite;
}

// ---- criteria ----------------------------------------------------------

Outcome criterion_1_cost_simulator_agreement() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int layers = 1 + static_cast<int>(rng() % 40);
    const int period =
        1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(layers, 8)));
    const auto profile = synth_profile(layers, rng(), testing::random_regime(rng));
    auto schedule = testing::random_partition(layers, period, rng);
    if (rng() % 2 == 0) testing::add_random_fills(schedule, rng);
    const double closed = period_objective(schedule, profile).total_with_fp;
    const double simulated =
        simulate_run(profile, Mode::kPlsgd, schedule, period).makespan;
    worst = std::max(worst, std::abs(closed - simulated) / closed);
  }
  std::ostringstream detail;
  detail << "500 pairs, max relative error " << worst;
  return {worst <= 1e-9, detail.str()};
}

Outcome criterion_2_closed_form_exactness() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  bool ratio_exact = true;
  for (int i = 0; i < 100; ++i) {
    const int layers = 1 + static_cast<int>(rng() % 40);
    const auto profile = synth_profile(layers, rng(), testing::random_regime(rng));
    double fp = 0.0, bp = 0.0, comm = 0.0;
    for (const auto& layer : profile.layers) {
      fp += layer.t_fp;
      bp += layer.t_bp;
      comm += comm_time(layer, profile.link);
    }
    const long long r_total = 1 + static_cast<long long>(rng() % 5000);
    const int period = 1 + static_cast<int>(rng() % 16);
    const double ssgd_expected = static_cast<double>(r_total) * (fp + bp + comm);
    const long long rounds = (r_total + period - 1) / period;
    const double lsgd_expected =
        static_cast<double>(r_total) * (fp + bp) + static_cast<double>(rounds) * comm;
    worst = std::max(worst,
                     std::abs(t_ssgd_total(profile, r_total) - ssgd_expected) / ssgd_expected);
    worst = std::max(worst,
                     std::abs(t_lsgd_total(profile, r_total, period) - lsgd_expected) /
                         lsgd_expected);
    const double ratio_expected =
        (1.0 - 1.0 / static_cast<double>(period)) * comm / (fp + bp + comm);
    ratio_exact = ratio_exact && saved_ratio(profile, period) == ratio_expected;
  }
  std::ostringstream detail;
  detail << "100 profiles, max relative error " << worst
         << (ratio_exact ? ", saved_ratio exact" : ", saved_ratio DIFFERS");
  return {worst <= 1e-12 && ratio_exact, detail.str()};
}

Outcome criterion_3_scheduler_gap(const std::vector<GapInstance>& suite) {
  std::vector<double> gaps;
  bool dominated = true;
  for (const auto& inst : suite) {
    const auto dfs = schedule_dfs(inst.profile, inst.period);
    const auto oracle = schedule_brute_force(inst.profile, inst.period);
    if (dfs.best_cost < oracle.best_cost - 1e-12) dominated = false;
    gaps.push_back(std::max(0.0, (dfs.best_cost - oracle.best_cost) / oracle.best_cost));
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double median =
      (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]) / 2.0;
  const double max_gap = sorted.back();
  std::ostringstream detail;
  detail << "200 instances, median gap " << median << ", max gap " << max_gap * 100.0 << "%";
  return {dominated && median == 0.0 && max_gap <= 0.10, detail.str()};
}

Outcome criterion_4_pruning_bound(const std::vector<GapInstance>& suite) {
  bool bounded = true;
  for (const auto& inst : suite) {
    const auto dfs = schedule_dfs(inst.profile, inst.period);
    const auto bound =
        1ull << std::min(inst.profile.layer_count() - inst.period, inst.period);
    if (dfs.solutions_explored > bound) bounded = false;
  }
  // bench-style scaling at H = 5: the search explores orders of magnitude
  // fewer solutions than brute force has candidates.
  double min_ratio = 1e300;
  std::uint64_t dfs30 = 0, bf30 = 0;
  for (int layers : {20, 25, 30}) {
    const auto profile =
        synth_profile(layers, static_cast<std::uint64_t>(layers), Regime::kBalanced);
    const auto dfs = schedule_dfs(profile, 5);
    const std::uint64_t candidates = brute_force_candidate_count(layers, 5);
    min_ratio = std::min(min_ratio, static_cast<double>(candidates) /
                                        static_cast<double>(dfs.solutions_explored));
    if (layers == 30) {
      dfs30 = dfs.solutions_explored;
      bf30 = candidates;
    }
  }
  std::ostringstream detail;
  detail << "bound held on all 200; at L=30,H=5: dfs " << dfs30 << " vs brute force " << bf30
         << " (min ratio " << min_ratio << "x)";
  return {bounded && min_ratio >= 100.0, detail.str()};
}

Outcome criterion_5_bubble_fill_safety(const std::vector<GapInstance>& suite) {
  std::mt19937_64 rng(105);
  int checked = 0;
  for (const auto& inst : suite) {
    const auto schedule =
        testing::random_partition(inst.profile.layer_count(), inst.period, rng);
    const auto filled = bubble_fill(schedule, inst.profile);
    const double before = period_objective(schedule, inst.profile).objective;
    const double after = period_objective(filled, inst.profile).objective;
    if (after != before) {
      return {false, "objective changed on instance " + std::to_string(checked)};
    }
    try {
      filled.validate(inst.profile.layer_count());
    } catch (const std::exception& err) {
      return {false, std::string("invalid fill: ") + err.what()};
    }
    ++checked;
  }
  return {true, "objective bit-identical and fills valid on all 200 instances"};
}

Outcome criterion_6_ssgd_equivalence() {
  const Problem problem = make_quadratic(64, 4, 1.0, 2.0, 1.0);
  TrainerConfig config;
  config.workers = 4;
  config.period = 1;
  config.schedule = Schedule::single_set(4);
  config.iterations = 100;
  config.seed = 7;

  std::vector<WorkerState> workers(4);
  for (int k = 0; k < 4; ++k) {
    workers[static_cast<std::size_t>(k)].w.assign(64, 0.0);
    workers[static_cast<std::size_t>(k)].rng = worker_rng(config.seed, k);
  }
  // Reference synchronous SGD: average the K stochastic gradients at the
  // shared point, then take one step.
  std::vector<double> reference(64, 0.0);
  std::vector<std::mt19937_64> streams;
  for (int k = 0; k < 4; ++k) streams.push_back(worker_rng(config.seed, k));

  double worst = 0.0;
  for (long long r = 0; r < 100; ++r) {
    plsgd_step(workers, r, config, problem);

    const double eta = config.learning_rate(r, problem);
    std::vector<std::vector<double>> grads;
    for (int k = 0; k < 4; ++k) {
      grads.push_back(stochastic_gradient(problem, reference, streams[static_cast<std::size_t>(k)]));
    }
    for (std::size_t i = 0; i < 64; ++i) {
      const double mean =
          ((grads[0][i] + grads[1][i]) + (grads[2][i] + grads[3][i])) / 4.0;
      reference[i] -= eta * mean;
    }
    for (std::size_t i = 0; i < 64; ++i) {
      worst = std::max(worst, std::abs(workers[0].w[i] - reference[i]));
    }
  }
  std::ostringstream detail;
  detail << "100 iterations, max per-coordinate deviation " << worst;
  return {worst <= 1e-12, detail.str()};
}

Outcome criterion_7_lemma_divergence_bound() {
  double worst_ratio = 0.0;
  for (int run = 0; run < 10; ++run) {
    const int period = run < 5 ? 2 : 5;
    const Problem problem = make_quadratic(40, 10, 1.0, 2.0, 1.0);
    TrainerConfig config;
    config.workers = 8;
    config.period = period;
    config.schedule = Schedule::equal_number_partition(10, period);
    config.iterations = 300;
    config.seed = static_cast<std::uint64_t>(run + 1);
    const auto trace = run_training(config, problem);
    for (std::size_t row = 1; row < trace.gamma.size(); ++row) {
      if (trace.lemma_bound[row] > 0.0) {
        worst_ratio = std::max(worst_ratio, trace.gamma[row] / trace.lemma_bound[row]);
      } else if (trace.gamma[row] > 0.0) {
        return {false, "positive divergence against a zero bound"};
      }
    }
  }
  std::ostringstream detail;
  detail << "10 runs (H=2 and H=5), max Gamma/bound ratio " << worst_ratio << " (limit 2)";
  return {worst_ratio <= 2.0, detail.str()};
}

Outcome criterion_8_rate() {
  const Problem problem = make_quadratic(16, 4, 1.0, 2.0, 2.0);
  TrainerConfig config;
  config.workers = 4;
  config.period = 2;
  config.schedule = Schedule::equal_number_partition(4, 2);
  const std::vector<long long> r_grid{500, 1000, 2000, 4000};
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  const double slope = rate_experiment(problem, config, r_grid, seeds);
  std::ostringstream detail;
  detail << "log-log slope " << slope << " (band [-1.3, -0.7])";
  return {slope >= -1.3 && slope <= -0.7, detail.str()};
}

Outcome criterion_9_partial_vs_full_divergence() {
  const Problem problem = make_quadratic(250, 10, 1.0, 1.25, 1.0);
  int agree = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainerConfig config;
    config.workers = 32;
    config.period = 5;
    config.schedule = Schedule::equal_number_partition(10, 5);
    config.iterations = 600;
    config.seed = seed;

    config.mode = SyncMode::kPartial;
    const auto partial = run_training(config, problem);
    config.mode = SyncMode::kFull;
    const auto full = run_training(config, problem);

    const auto time_avg = [](const DivergenceTrace& trace) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t row = 0; row < trace.gamma.size(); ++row) {
        if (trace.iteration[row] == 0) continue;
        sum += trace.gamma[row];
        ++n;
      }
      return sum / static_cast<double>(n);
    };
    const double p = time_avg(partial);
    const double f = time_avg(full);
    if (p < f) ++agree;
    detail << (seed > 1 ? "; " : "") << "seed " << seed << ": " << p << " vs " << f;
  }
  return {agree == 5, "partial < full on " + std::to_string(agree) + "/5 seeds (" + detail.str() +
                          ")"};
}

Outcome criterion_10_mode_ordering() {
  std::mt19937_64 rng(110);
  int plsgd_vs_flsgd = 0, flsgd_vs_ssgd = 0, plsgd_vs_wfbp = 0;
  std::ostringstream violations;
  for (int i = 0; i < 100; ++i) {
    const int layers = 10 + static_cast<int>(rng() % 31);
    const int period = 2 + static_cast<int>(rng() % 4);
    const auto profile = synth_profile(layers, rng(), Regime::kCommHeavy);
    const auto schedule = bubble_fill(schedule_dfs(profile, period).best, profile);
    const long long iters = 2 * period;
    const double plsgd =
        simulate_run(profile, Mode::kPlsgd, schedule, iters).makespan;
    const double flsgd =
        simulate_run(profile, Mode::kFlsgd, std::nullopt, iters, period).makespan;
    const double ssgd = simulate_run(profile, Mode::kSsgd, std::nullopt, iters).makespan;
    const double wfbp = simulate_run(profile, Mode::kWfbp, std::nullopt, iters).makespan;
    const double tol = 1e-9 * ssgd;
    if (plsgd <= flsgd + tol) {
      ++plsgd_vs_flsgd;
    } else {
      violations << " [plsgd>flsgd L=" << layers << " H=" << period << " " << profile.label
                 << "]";
    }
    if (flsgd <= ssgd + tol) {
      ++flsgd_vs_ssgd;
    } else {
      violations << " [flsgd>ssgd L=" << layers << " H=" << period << " " << profile.label
                 << "]";
    }
    if (plsgd <= wfbp + tol) {
      ++plsgd_vs_wfbp;
    } else {
      violations << " [plsgd>wfbp L=" << layers << " H=" << period << " " << profile.label
                 << "]";
    }
  }
  std::ostringstream detail;
  detail << "plsgd<=flsgd " << plsgd_vs_flsgd << "/100, flsgd<=ssgd " << flsgd_vs_ssgd
         << "/100, plsgd<=wfbp " << plsgd_vs_wfbp << "/100";
  if (violations.str().empty()) {
    detail << ", no violations";
  } else {
    detail << ", violations:" << violations.str();
  }
  return {plsgd_vs_flsgd >= 95 && flsgd_vs_ssgd >= 95 && plsgd_vs_wfbp >= 95, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }

  std::vector<GapInstance> suite;
  const auto lazy_suite = [&]() -> const std::vector<GapInstance>& {
    if (suite.empty()) suite = gap_suite();
    return suite;
  };

  const std::vector<Criterion> criteria{
      {1, "cost/simulator agreement within 1e-9", 10.0, criterion_1_cost_simulator_agreement},
      {2, "closed-form exactness of the serial and periodic totals", 10.0,
       criterion_2_closed_form_exactness},
      {3, "scheduler optimality gap vs brute force", 60.0,
       [&] { return criterion_3_scheduler_gap(lazy_suite()); }},
      {4, "pruned search stays within its solution-set bound", 60.0,
       [&] { return criterion_4_pruning_bound(lazy_suite()); }},
      {5, "bubble filling never changes the objective", 60.0,
       [&] { return criterion_5_bubble_fill_safety(lazy_suite()); }},
      {6, "single-iteration-period training equals synchronous SGD", 1.0,
       criterion_6_ssgd_equivalence},
      {7, "divergence stays under the H^2 eta^2 G^2 bound", 30.0,
       criterion_7_lemma_divergence_bound},
      {8, "suboptimality decays as 1/R", 120.0, criterion_8_rate},
      {9, "staggered partial sync keeps divergence below full sync", 120.0,
       criterion_9_partial_vs_full_divergence},
      {10, "mode ordering on comm-heavy instances", 120.0, criterion_10_mode_ordering},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& err) {
      outcome = {false, std::string("exception: ") + err.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < criterion.time_limit_s;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s — %s [%.2fs/%.0fs]\n", pass ? "PASS" : "FAIL",
                criterion.id, criterion.name, outcome.detail.c_str(), elapsed,
                criterion.time_limit_s);
  }
  return failures == 0 ? 0 : 1;
}
