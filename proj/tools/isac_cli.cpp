// SPDX-License-Identifier: Apache-2.0
//
// isac-secbf: secure transmit beamforming for integrated sensing and
// communication under communication and sensing eavesdroppers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: load a config, run one experiment, write CSVs.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isac/config_io.hpp"
#include "isac/experiments.hpp"
#include "isac/optimizer.hpp"
#include "isac/oracles.hpp"
#include "isac/units.hpp"

namespace fs = std::filesystem;
using namespace isac;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;

struct Common {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int trials = 50;
  int jobs = 1;
  std::string command_line;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "YAML config (default: built-in profile)");
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "RNG seed (overrides the config)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  sub->add_option("--trials", c.trials, "Monte Carlo draws per point")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

SystemConfig load(const Common& c) {
  SystemConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
  if (c.seed_given) cfg.seed = c.seed;
  validate(cfg);
  return cfg;
}

fs::path prepare_out(const Common& c) {
  const fs::path dir(c.out);
  fs::create_directories(dir);
  const fs::path probe = dir / ".write_test";
  std::ofstream(probe) << "";
  if (!fs::exists(probe)) throw std::runtime_error("output directory not writable: " + c.out);
  fs::remove(probe);
  return dir;
}

template <typename F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  body(os);
}

void finish(const Common& c, const SystemConfig& cfg, const fs::path& dir, std::vector<std::string> files,
            int trials) {
  experiments::Manifest m;
  m.command = c.command_line;
  m.config_hash = config_hash(cfg);
  m.seed = cfg.seed;
  m.trials = trials;
  m.files = std::move(files);
  write_file(dir / "manifest.txt", [&](std::ostream& os) { experiments::write_manifest(os, m); });
  write_file(dir / "config.yaml", [&](std::ostream& os) { os << dump_config(cfg) << '\n'; });
}

void print_rows(const std::vector<experiments::ResultRow>& rows) {
  std::printf("%-12s %4s %3s %9s %8s %9s %9s %6s %8s\n", "scheme", "n_t", "K", "swept", "feasible", "SR", "SR_solved",
              "iters", "time_s");
  for (const auto& r : rows)
    std::printf("%-12s %4d %3d %9.3g %8.2f %9.4f %9.4f %6.2f %8.2f\n", experiments::to_string(r.point.scheme),
                r.point.cfg.n_t, r.point.cfg.k_users, r.point.swept, r.feasibility, r.mean_secrecy,
                r.mean_secrecy_solved, r.mean_iterations, r.wall_time);
}

void write_rows(const Common& c, const SystemConfig& cfg, const std::string& stem,
                const std::vector<experiments::ResultRow>& rows) {
  const fs::path dir = prepare_out(c);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) { experiments::write_rows_csv(os, rows); });
  write_file(dir / (stem + "_trials.csv"), [&](std::ostream& os) { experiments::write_trials_csv(os, rows); });
  finish(c, cfg, dir, {stem + ".csv", stem + "_trials.csv", "config.yaml"}, c.trials);
  print_rows(rows);
}

int cmd_solve(const Common& c, int trial) {
  const SystemConfig cfg = load(c);
  auto rng = experiments::trial_rng(cfg.seed, trial, 0);
  const ChannelRealization ch = draw_channels(cfg, rng);
  RunOptions options;
  options.check_rank = false;
  BeamformingSolution sol;
  try {
    sol = run_algorithm1(ch, cfg, options);
  } catch (const ScenarioInfeasible& e) {
    std::fprintf(stderr, "scenario infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  }

  std::printf("secrecy rate       %.6f bits/s/Hz\n", sol.secrecy_rate);
  std::printf("surrogate / ln 2   %.6f\n", sol.surrogate_objective / std::numbers::ln2);
  std::printf("iterations         %d (%s)\n", sol.iterations_used, sol.converged ? "converged" : "hit max_iters");
  std::printf("residuals (positive = slack)\n");
  for (int k = 0; k < ch.k_users(); ++k)
    std::printf("  SCNR cap CU%d      %+.3e  (%.4f dB of %.4f dB)\n", k + 1,
                1.0 - scnr_sense_eve(k, sol, ch, cfg) / cfg.gamma_se, linear_to_db(scnr_sense_eve(k, sol, ch, cfg)),
                linear_to_db(cfg.gamma_se));
  std::printf("  SCNR floor BS     %+.3e\n", scnr_bs(sol, ch, cfg) / cfg.gamma_s - 1.0);
  std::printf("  power budget      %+.3e\n", 1.0 - total_power(sol) / cfg.p_max);
  std::printf("rank ratios       ");
  for (double r : sol.rank_ratio) std::printf(" %.6f", r);
  std::printf("\n");

  const fs::path dir = prepare_out(c);
  std::vector<experiments::TracePoint> trace;
  for (const auto& rec : sol.trace_log) trace.push_back({watt_to_dbm(cfg.p_max), rec});
  write_file(dir / "solve_trace.csv", [&](std::ostream& os) { experiments::write_trace_csv(os, trace); });
  finish(c, cfg, dir, {"solve_trace.csv", "config.yaml"}, 1);

  bool rank_ok = true;
  for (double r : sol.rank_ratio) rank_ok = rank_ok && r >= 1.0 - cfg.rank_tol;
  if (!rank_ok) std::printf("warning: some Q_k is not rank one within rank_tol\n");
  return 0;
}

int cmd_validate(const Common& c, int tiny_instances) {
  SystemConfig cfg = load(c);
  bool all = true;
  auto line = [&](bool ok, const std::string& text) {
    all = all && ok;
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", text.c_str());
  };

  const auto mc = oracle::compare_metrics(1000, cfg.seed);
  char buf[200];
  std::snprintf(buf, sizeof buf, "metrics vs direct evaluation, %d instances, worst relative error %.2e (%s)",
                mc.instances, mc.worst_rel, mc.worst_metric.c_str());
  line(mc.worst_rel <= 1e-10, buf);

  const auto sc = oracle::check_surrogate(100000, cfg.seed);
  line(sc.below == 0 && sc.false_equal == 0 && sc.equal_at_x0 == sc.x0_pairs,
       "e^x >= e^x0 (1 + x - x0) on " + std::to_string(sc.pairs) + " pairs, violations " + std::to_string(sc.below) +
           ", spurious equalities " + std::to_string(sc.false_equal));

  SystemConfig tiny = cfg;
  tiny.n_t = 2;
  set_user_count(tiny, 1);
  tiny.gamma_s = threshold_from_dbm(20.0);
  for (int t = 0; t < tiny_instances; ++t) {
    auto rng = experiments::trial_rng(cfg.seed, t, 0);
    const ChannelRealization ch = draw_channels(tiny, rng);
    try {
      const double sca = run_algorithm1(ch, tiny).secrecy_rate;
      const auto bf = oracle::brute_force_tiny(ch, tiny);
      const double rel = bf.secrecy_rate > 0 ? std::abs(sca - bf.secrecy_rate) / bf.secrecy_rate : std::abs(sca);
      std::snprintf(buf, sizeof buf, "N_t=2 K=1 draw %d: SCA %.6f vs brute force %.6f (rel %.4f)", t, sca,
                    bf.secrecy_rate, rel);
      line(bf.feasible && rel <= 0.02, buf);
    } catch (const std::exception& e) {
      line(false, "N_t=2 K=1 draw " + std::to_string(t) + ": " + e.what());
    }
  }
  return all ? 0 : kExitFailure;
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) v.push_back(lo + i * step);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure ISAC beamforming: solver and experiment runner"};
  app.require_subcommand(1);
  Common common;
  for (int i = 0; i < argc; ++i) common.command_line += (i ? " " : "") + std::string(argv[i]);

  auto* solve = app.add_subcommand("solve", "Run the SCA iteration once on one channel draw");
  add_common(solve, common);
  int solve_trial = 0;
  solve->add_option("--trial", solve_trial, "Draw index under the seed")->capture_default_str();

  auto* convergence = app.add_subcommand("convergence", "Objective trace per power level on a shared draw");
  add_common(convergence, common);
  std::vector<double> conv_powers{18, 22, 26};
  convergence->add_option("--powers", conv_powers, "P values, dBm")->delimiter(',')->capture_default_str();

  auto* scnr = app.add_subcommand("scnr", "SCNR at the CUs against the BS SCNR floor, with and without the cap");
  add_common(scnr, common);
  std::vector<double> scnr_gs = range(20, 34, 2), scnr_gse{5};
  scnr->add_option("--gamma-s", scnr_gs, "gamma_s values, dBm")->delimiter(',')->capture_default_str();
  scnr->add_option("--gamma-se", scnr_gse, "gamma_se values, dBm")->delimiter(',')->capture_default_str();

  auto* feas = app.add_subcommand("feasibility", "Fraction of draws with a nonempty constraint set");
  add_common(feas, common);
  std::vector<double> feas_gs = range(24, 36, 1), feas_gse{2, 5};
  feas->add_option("--gamma-s", feas_gs, "gamma_s values, dBm")->delimiter(',')->capture_default_str();
  feas->add_option("--gamma-se", feas_gse, "gamma_se values, dBm")->delimiter(',')->capture_default_str();

  auto* power = app.add_subcommand("power-sweep", "Secrecy rate against P, proposed and random-S baseline");
  add_common(power, common);
  std::vector<double> power_p{14, 18, 22, 26};
  std::vector<int> power_nt{8, 10, 12};
  power->add_option("--powers", power_p, "P values, dBm")->delimiter(',')->capture_default_str();
  power->add_option("--nt", power_nt, "Antenna counts")->delimiter(',')->capture_default_str();

  auto* gammas = app.add_subcommand("gammas-sweep", "Secrecy rate against the BS SCNR floor");
  add_common(gammas, common);
  std::vector<double> gammas_gs = range(24, 32, 2);
  std::vector<int> gammas_nt{8, 10, 12};
  gammas->add_option("--gamma-s", gammas_gs, "gamma_s values, dBm")->delimiter(',')->capture_default_str();
  gammas->add_option("--nt", gammas_nt, "Antenna counts")->delimiter(',')->capture_default_str();

  auto* users = app.add_subcommand("users-sweep", "Average secrecy rate per user against K");
  add_common(users, common);
  std::vector<int> users_k{1, 2, 3, 4, 5}, users_nt{8, 12};
  std::vector<double> users_p{18, 22};
  users->add_option("--users", users_k, "K values")->delimiter(',')->capture_default_str();
  users->add_option("--powers", users_p, "P values, dBm")->delimiter(',')->capture_default_str();
  users->add_option("--nt", users_nt, "Antenna counts")->delimiter(',')->capture_default_str();

  auto* beam = app.add_subcommand("beampattern", "Normalized transmit patterns of the optimized covariances");
  add_common(beam, common);
  std::vector<double> beam_theta{0, 10};
  std::vector<int> beam_nt{8, 12};
  beam->add_option("--theta", beam_theta, "Target angles, degrees")->delimiter(',')->capture_default_str();
  beam->add_option("--nt", beam_nt, "Antenna counts")->delimiter(',')->capture_default_str();

  auto* val = app.add_subcommand("validate", "Oracle comparisons, surrogate property, tiny brute force");
  add_common(val, common);
  int tiny_instances = 3;
  val->add_option("--tiny", tiny_instances, "N_t = 2, K = 1 brute-force instances")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const Common& c = common;
    if (*solve) return cmd_solve(c, solve_trial);
    if (*val) return cmd_validate(c, tiny_instances);

    const SystemConfig cfg = load(c);
    if (*convergence) {
      const auto trace = experiments::run_convergence(cfg, conv_powers, cfg.seed);
      const fs::path dir = prepare_out(c);
      write_file(dir / "convergence.csv", [&](std::ostream& os) { experiments::write_trace_csv(os, trace); });
      finish(c, cfg, dir, {"convergence.csv", "config.yaml"}, 1);
      for (const auto& t : trace) std::printf("P=%g dBm  iter %d  f %.6f  delta_f %.3e\n", t.power_dbm, t.record.iter,
                                              t.record.f, t.record.delta_f);
    } else if (*scnr) {
      write_rows(c, cfg, "scnr",
                 experiments::run_scnr_vs_threshold(cfg, scnr_gs, scnr_gse, c.trials, cfg.seed, c.jobs));
    } else if (*feas) {
      write_rows(c, cfg, "feasibility", experiments::run_feasibility(cfg, feas_gs, feas_gse, c.trials, cfg.seed, c.jobs));
    } else if (*power) {
      write_rows(c, cfg, "power_sweep",
                 experiments::run_secrecy_vs_power(cfg, power_p, power_nt, c.trials, cfg.seed, c.jobs));
    } else if (*gammas) {
      write_rows(c, cfg, "gammas_sweep",
                 experiments::run_secrecy_vs_gamma_s(cfg, gammas_gs, gammas_nt, c.trials, cfg.seed, c.jobs));
    } else if (*users) {
      write_rows(c, cfg, "users_sweep",
                 experiments::run_avg_secrecy_vs_k(cfg, users_k, users_p, users_nt, c.trials, cfg.seed, c.jobs));
    } else if (*beam) {
      const auto patterns = experiments::run_beampattern(cfg, beam_theta, beam_nt, cfg.seed);
      const fs::path dir = prepare_out(c);
      std::vector<std::string> files;
      for (const auto& p : patterns) {
        char name[64];
        std::snprintf(name, sizeof name, "pattern_theta%g_nt%d.csv", p.theta_t_deg, p.n_t);
        write_file(dir / name, [&](std::ostream& os) { experiments::write_pattern_csv(os, p); });
        files.emplace_back(name);
        std::printf("theta_t=%g n_t=%d  sensing peak %.2f deg  lobe %.2f deg  comm at target %.1f dB  SR %.4f\n",
                    p.theta_t_deg, p.n_t, p.sensing_peak_deg, p.sensing_lobe_width_deg, p.comm_at_target_db,
                    p.secrecy_rate);
      }
      files.emplace_back("config.yaml");
      finish(c, cfg, dir, files, 1);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error in %s: %s\n", e.field().c_str(), e.what());
    return kExitConfig;
  } catch (const ScenarioInfeasible& e) {
    std::fprintf(stderr, "scenario infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}
