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

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dreamsched/cost_model.hpp"
#include "dreamsched/errors.hpp"
#include "dreamsched/profile.hpp"
#include "dreamsched/schedule.hpp"
#include "dreamsched/scheduler.hpp"
#include "dreamsched/simulator.hpp"
#include "dreamsched/text_format.hpp"
#include "dreamsched/trainer.hpp"

namespace {

using dreamsched::format_real;

struct TrainFile {
  dreamsched::Problem problem;
  dreamsched::TrainerConfig config;
};

// Flat `key = value` file; '#' starts a comment. Documented keys are
// listed in the README.
TrainFile parse_train_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dreamsched::IoError("cannot open train config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto text = dreamsched::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw dreamsched::ParseError(path + ":" + std::to_string(line_no) +
                                   ": expected 'key = value'");
    }
    kv[std::string(dreamsched::trim(text.substr(0, eq)))] =
        std::string(dreamsched::trim(text.substr(eq + 1)));
  }

  const auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string value = it->second;
    kv.erase(it);
    return value;
  };
  const auto require = [&](const char* key) {
    auto value = take(key);
    if (!value) throw dreamsched::ParseError(path + ": missing required key '" + key + "'");
    return *value;
  };

  TrainFile file;
  const auto dim = dreamsched::parse_u64_field(require("dim"), "dim");
  const auto workers = dreamsched::parse_u64_field(require("workers"), "workers");
  const auto period = dreamsched::parse_u64_field(require("period"), "period");
  const auto iters = dreamsched::parse_u64_field(require("iters"), "iters");

  int blocks = static_cast<int>(period);
  if (auto v = take("blocks")) blocks = static_cast<int>(dreamsched::parse_u64_field(*v, "blocks"));
  double lambda_min = 1.0, lambda_max = 2.0, sigma = 0.0, optimum = 1.0;
  if (auto v = take("lambda_min")) lambda_min = dreamsched::parse_real_field(*v, "lambda_min");
  if (auto v = take("lambda_max")) lambda_max = dreamsched::parse_real_field(*v, "lambda_max");
  if (auto v = take("sigma")) sigma = dreamsched::parse_real_field(*v, "sigma");
  if (auto v = take("optimum")) {
    if (*v == "ones") {
      optimum = 1.0;
    } else if (*v == "zeros") {
      optimum = 0.0;
    } else {
      optimum = dreamsched::parse_real_field(*v, "optimum");
    }
  }
  file.problem =
      dreamsched::make_quadratic(dim, blocks, lambda_min, lambda_max, sigma, optimum);

  auto& config = file.config;
  config.workers = static_cast<int>(workers);
  config.period = static_cast<int>(period);
  config.iterations = static_cast<long long>(iters);
  if (auto v = take("lr")) {
    if (*v == "decaying") {
      config.lr = dreamsched::LrSchedule::kDecaying;
    } else if (*v == "constant") {
      config.lr = dreamsched::LrSchedule::kConstant;
    } else {
      throw dreamsched::ParseError(path + ": lr must be 'decaying' or 'constant'");
    }
  }
  if (auto v = take("eta")) config.eta = dreamsched::parse_real_field(*v, "eta");
  if (auto v = take("shift_a")) config.shift_a = dreamsched::parse_real_field(*v, "shift_a");
  if (auto v = take("seed")) config.seed = dreamsched::parse_u64_field(*v, "seed");
  if (auto v = take("log_stride")) {
    config.log_stride = static_cast<long long>(dreamsched::parse_u64_field(*v, "log_stride"));
  }
  if (auto v = take("mode")) {
    if (*v == "partial") {
      config.mode = dreamsched::SyncMode::kPartial;
    } else if (*v == "full") {
      config.mode = dreamsched::SyncMode::kFull;
    } else if (*v == "ssgd") {
      config.mode = dreamsched::SyncMode::kSsgdEvery;
    } else {
      throw dreamsched::ParseError(path + ": mode must be partial, full or ssgd");
    }
  }
  std::string schedule_kind = "enp";
  if (auto v = take("schedule")) schedule_kind = *v;
  if (schedule_kind == "enp") {
    config.schedule = dreamsched::Schedule::equal_number_partition(blocks, config.period);
  } else if (schedule_kind == "single") {
    config.schedule = dreamsched::Schedule::single_set(blocks);
  } else {
    config.schedule = dreamsched::load_schedule(schedule_kind);
  }

  if (!kv.empty()) {
    throw dreamsched::ParseError(path + ": unknown key '" + kv.begin()->first + "'");
  }
  return file;
}

int run_profile_gen(const std::string& out, int layers, std::uint64_t seed,
                    const std::string& regime) {
  const auto profile = dreamsched::synth_profile(layers, seed, dreamsched::parse_regime(regime));
  dreamsched::save_profile(profile, out);
  std::cout << "label=" << profile.label << "\n";
  std::cout << "layers=" << profile.layer_count() << "\n";
  std::cout << "comm_bp_ratio=" << format_real(profile.total_comm() / profile.total_bp()) << "\n";
  std::cout << "out=" << out << "\n";
  return 0;
}

int run_schedule(const std::string& profile_path, int period, const std::string& out,
                 bool no_fill, bool explain) {
  const auto profile = dreamsched::load_profile(profile_path);
  auto report = dreamsched::schedule_dfs(profile, period);
  dreamsched::Schedule schedule =
      no_fill ? report.best : dreamsched::bubble_fill(report.best, profile);
  const auto cost = dreamsched::period_objective(schedule, profile);
  if (explain) {
    dreamsched::write_cost_report(cost, std::cout);
  } else {
    std::cout << "objective=" << format_real(cost.objective) << "\n";
  }
  std::cout << "solutions_explored=" << report.solutions_explored << "\n";
  if (!out.empty()) {
    dreamsched::save_schedule(schedule, out);
    std::cout << "out=" << out << "\n";
  }
  return 0;
}

int run_oracle(const std::string& profile_path, int period) {
  const auto profile = dreamsched::load_profile(profile_path);
  const auto dfs = dreamsched::schedule_dfs(profile, period);
  const auto oracle = dreamsched::schedule_brute_force(profile, period);
  const double gap = (dfs.best_cost - oracle.best_cost) / oracle.best_cost * 100.0;
  std::cout << "dfs_cost=" << format_real(dfs.best_cost) << "\n";
  std::cout << "brute_force_cost=" << format_real(oracle.best_cost) << "\n";
  std::cout << "gap=" << format_real(gap) << "%\n";
  std::cout << "dfs_solutions=" << dfs.solutions_explored << "\n";
  std::cout << "brute_force_candidates=" << oracle.solutions_explored << "\n";
  return 0;
}

int run_simulate(const std::string& profile_path, const std::string& mode_name,
                 const std::string& schedule_path, long long iterations,
                 const std::string& trace_path) {
  const auto profile = dreamsched::load_profile(profile_path);
  const auto mode = dreamsched::parse_mode(mode_name);
  std::optional<dreamsched::Schedule> schedule;
  if (!schedule_path.empty()) schedule = dreamsched::load_schedule(schedule_path);
  const auto timeline = dreamsched::simulate_run(profile, mode, schedule, iterations);
  std::cout << "mode=" << dreamsched::mode_name(mode) << "\n";
  std::cout << "iters=" << iterations << "\n";
  std::cout << "makespan_s=" << format_real(timeline.makespan) << "\n";
  std::cout << "avg_iter_s=" << format_real(timeline.makespan / static_cast<double>(iterations))
            << "\n";
  if (!trace_path.empty()) {
    dreamsched::export_trace(timeline, trace_path);
    std::cout << "trace=" << trace_path << "\n";
  }
  return 0;
}

int run_train(const std::string& config_path, const std::string& out) {
  const TrainFile file = parse_train_file(config_path);
  const auto trace = dreamsched::run_training(file.config, file.problem);
  if (!out.empty()) {
    std::ofstream csv(out);
    if (!csv) throw dreamsched::IoError("cannot write csv: " + out);
    dreamsched::write_divergence_csv(trace, csv);
  }
  dreamsched::write_run_summary(trace, std::cout);
  return 0;
}

int run_compare(const std::string& profile_path, int period, long long iterations) {
  const auto profile = dreamsched::load_profile(profile_path);
  const auto report = dreamsched::compare_modes(profile, period, iterations);
  dreamsched::write_mode_report(report, std::cout);
  return 0;
}

int run_bench_sched(int max_layers) {
  constexpr int kPeriod = 5;
  constexpr int kBruteForceLayerCap = 30;
  std::cout << "layers,H,dfs_cost,brute_force_cost,gap_pct,dfs_solutions,"
               "brute_force_candidates,dfs_micros,brute_force_micros\n";
  for (int layers = kPeriod; layers <= max_layers; ++layers) {
    const auto profile =
        dreamsched::synth_profile(layers, static_cast<std::uint64_t>(layers),
                                  dreamsched::Regime::kBalanced);
    const auto t0 = std::chrono::steady_clock::now();
    const auto dfs = dreamsched::schedule_dfs(profile, kPeriod);
    const auto t1 = std::chrono::steady_clock::now();
    const auto dfs_us = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();

    std::cout << layers << ',' << kPeriod << ',' << format_real(dfs.best_cost) << ',';
    if (layers <= kBruteForceLayerCap) {
      const auto t2 = std::chrono::steady_clock::now();
      const auto oracle = dreamsched::schedule_brute_force(profile, kPeriod);
      const auto t3 = std::chrono::steady_clock::now();
      const auto bf_us = std::chrono::duration_cast<std::chrono::microseconds>(t3 - t2).count();
      const double gap = (dfs.best_cost - oracle.best_cost) / oracle.best_cost * 100.0;
      std::cout << format_real(oracle.best_cost) << ',' << format_real(gap) << ','
                << dfs.solutions_explored << ',' << oracle.solutions_explored << ',' << dfs_us
                << ',' << bf_us << "\n";
    } else {
      std::cout << ",," << dfs.solutions_explored << ','
                << dreamsched::brute_force_candidate_count(layers, kPeriod) << ',' << dfs_us
                << ",\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling, simulation and convergence toolkit for "
               "partial-synchronization local SGD"};
  app.require_subcommand(1);

  // profile gen
  auto* profile_cmd = app.add_subcommand("profile", "profile utilities");
  profile_cmd->require_subcommand(1);
  auto* gen = profile_cmd->add_subcommand("gen", "synthesize a random profile");
  int gen_layers = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_regime, gen_out;
  gen->add_option("--layers", gen_layers, "layer count")->required();
  gen->add_option("--seed", gen_seed, "rng seed")->required();
  gen->add_option("--regime", gen_regime, "comm-heavy | compute-heavy | balanced")->required();
  gen->add_option("--out", gen_out, "output profile path")->required();

  // schedule
  auto* schedule_cmd = app.add_subcommand("schedule", "search an overlap schedule");
  std::string sched_profile, sched_out;
  int sched_period = 0;
  bool sched_no_fill = false, sched_explain = false;
  schedule_cmd->add_option("--profile", sched_profile, "profile path")->required();
  schedule_cmd->add_option("--H", sched_period, "synchronization period")->required();
  schedule_cmd->add_option("--out", sched_out, "schedule output path");
  schedule_cmd->add_flag("--no-fill", sched_no_fill, "skip bubble filling");
  schedule_cmd->add_flag("--explain", sched_explain, "print the per-iteration cost breakdown");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "compare the search against brute force");
  std::string oracle_profile;
  int oracle_period = 0;
  oracle_cmd->add_option("--profile", oracle_profile, "profile path")->required();
  oracle_cmd->add_option("--H", oracle_period, "synchronization period")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "replay a training timeline");
  std::string sim_profile, sim_mode, sim_schedule, sim_trace;
  long long sim_iters = 0;
  sim_cmd->add_option("--profile", sim_profile, "profile path")->required();
  sim_cmd->add_option("--mode", sim_mode, "ssgd | wfbp | flsgd | plsgd")->required();
  sim_cmd->add_option("--schedule", sim_schedule, "schedule path (plsgd; supplies H for flsgd)");
  sim_cmd->add_option("--iters", sim_iters, "iterations")->required();
  sim_cmd->add_option("--trace", sim_trace, "trace-event JSON output path");

  // train
  auto* train_cmd = app.add_subcommand("train", "run the convergence lab");
  std::string train_config, train_out;
  train_cmd->add_option("--config", train_config, "key=value config path")->required();
  train_cmd->add_option("--out", train_out, "divergence CSV output path");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "four-mode makespan report");
  std::string compare_profile;
  int compare_period = 0;
  long long compare_iters = 0;
  compare_cmd->add_option("--profile", compare_profile, "profile path")->required();
  compare_cmd->add_option("--H", compare_period, "synchronization period")->required();
  compare_cmd->add_option("--iters", compare_iters, "iterations")->required();

  // bench sched
  auto* bench_cmd = app.add_subcommand("bench", "scaling tables");
  bench_cmd->require_subcommand(1);
  auto* bench_sched = bench_cmd->add_subcommand("sched", "search-vs-brute-force scaling CSV");
  int bench_max_layers = 0;
  bench_sched->add_option("--max-layers", bench_max_layers, "largest layer count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e);
    }
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return run_profile_gen(gen_out, gen_layers, gen_seed, gen_regime);
    if (schedule_cmd->parsed()) {
      return run_schedule(sched_profile, sched_period, sched_out, sched_no_fill, sched_explain);
    }
    if (oracle_cmd->parsed()) return run_oracle(oracle_profile, oracle_period);
    if (sim_cmd->parsed()) {
      return run_simulate(sim_profile, sim_mode, sim_schedule, sim_iters, sim_trace);
    }
    if (train_cmd->parsed()) return run_train(train_config, train_out);
    if (compare_cmd->parsed()) return run_compare(compare_profile, compare_period, compare_iters);
    if (bench_sched->parsed()) return run_bench_sched(bench_max_layers);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const dreamsched::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
