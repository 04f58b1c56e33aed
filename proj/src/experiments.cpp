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

#include "isac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "isac/units.hpp"

#ifndef ISAC_VERSION
#define ISAC_VERSION "unknown"
#endif

namespace isac::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void fill_solved(TrialRecord& r, const BeamformingSolution& sol, const ChannelRealization& ch,
                 const SystemConfig& cfg) {
  r.status = TrialStatus::kSolved;
  r.secrecy_rate = sol.secrecy_rate;
  r.surrogate_bits = sol.surrogate_objective / std::numbers::ln2;
  for (int k = 0; k < ch.k_users(); ++k)
    if (rate_user(k, sol, ch, cfg) < rate_eve(k, sol, ch, cfg)) r.clamped = true;
  r.iterations = sol.iterations_used;
  r.converged = sol.converged;
  for (std::size_t i = 1; i < sol.trace_log.size(); ++i)
    r.max_objective_drop = std::max(r.max_objective_drop, sol.trace_log[i - 1].f - sol.trace_log[i].f);
  r.rank_ratio = sol.rank_ratio;
  for (int k = 0; k < ch.k_users(); ++k) {
    r.scnr_se.push_back(scnr_sense_eve(k, sol, ch, cfg));
    r.scnr_se_over_gamma = std::max(r.scnr_se_over_gamma, r.scnr_se.back() / cfg.gamma_se);
  }
  r.scnr_bs = scnr_bs(sol, ch, cfg);
  r.scnr_bs_over_gamma = r.scnr_bs / cfg.gamma_s;
  r.power_over_pmax = total_power(sol) / cfg.p_max;
}

GridPoint make_point(SystemConfig cfg, Scheme scheme, std::string name, double swept) {
  return GridPoint{std::move(cfg), scheme, std::move(name), swept};
}

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed:
      return "proposed";
    case Scheme::kSRandom:
      return "s_random";
    case Scheme::kNoSecurity:
      return "no_security";
  }
  return "unknown";
}

const char* to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::kSolved:
      return "solved";
    case TrialStatus::kInfeasible:
      return "infeasible";
    case TrialStatus::kSolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

TrialRecord run_trial(const GridPoint& point, std::uint64_t seed, int trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  r.trial = trial;
  const SystemConfig& cfg = point.cfg;
  auto rng = trial_rng(seed, trial, 0);
  const ChannelRealization ch = draw_channels(cfg, rng);

  RunOptions options;
  options.check_rank = false;
  options.sensing_security = point.scheme != Scheme::kNoSecurity;
  try {
    BeamformingSolution sol;
    if (point.scheme == Scheme::kSRandom) {
      auto s_rng = trial_rng(seed, trial, 1);
      sol = baseline_s_random(ch, cfg, s_rng, options);
    } else {
      sol = run_algorithm1(ch, cfg, options);
    }
    fill_solved(r, sol, ch, cfg);
  } catch (const ScenarioInfeasible& e) {
    r.status = TrialStatus::kInfeasible;
    r.message = e.what();
  } catch (const SolverFailure& e) {
    r.status = TrialStatus::kSolverFailure;
    r.message = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ResultRow aggregate(const GridPoint& point, std::vector<TrialRecord> records) {
  ResultRow row;
  row.point = point;
  row.trials = std::move(records);
  std::vector<double> sr_all, sr_solved, scnr_bs, iters;
  std::vector<std::vector<double>> scnr_se(static_cast<std::size_t>(point.cfg.k_users));
  for (const auto& r : row.trials) {
    row.wall_time += r.wall_time;
    switch (r.status) {
      case TrialStatus::kSolved:
        ++row.solved;
        sr_all.push_back(r.secrecy_rate);
        sr_solved.push_back(r.secrecy_rate);
        scnr_bs.push_back(r.scnr_bs);
        iters.push_back(r.iterations);
        for (std::size_t k = 0; k < r.scnr_se.size() && k < scnr_se.size(); ++k) scnr_se[k].push_back(r.scnr_se[k]);
        for (double q : r.rank_ratio) row.min_rank_ratio = std::min(row.min_rank_ratio, q);
        break;
      case TrialStatus::kInfeasible:
        ++row.infeasible;
        sr_all.push_back(0.0);
        break;
      case TrialStatus::kSolverFailure:
        ++row.failed;
        break;
    }
  }
  const auto n = static_cast<double>(row.trials.size());
  row.feasibility = n > 0 ? row.solved / n : kNaN;
  row.mean_secrecy = mean_of(sr_all);
  row.mean_secrecy_solved = mean_of(sr_solved);
  row.mean_avg_secrecy = row.mean_secrecy / point.cfg.k_users;
  row.mean_scnr_bs = mean_of(scnr_bs);
  for (const auto& v : scnr_se) row.mean_scnr_se.push_back(mean_of(v));
  row.mean_iterations = mean_of(iters);
  return row;
}

std::vector<ResultRow> evaluate(const std::vector<GridPoint>& points, int trials, std::uint64_t seed, int jobs) {
  if (trials < 1) throw std::invalid_argument("evaluate: trials must be at least 1");
  for (const auto& p : points) validate(p.cfg);
  const std::size_t per = static_cast<std::size_t>(trials);
  std::vector<TrialRecord> records(points.size() * per);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++)
      records[i] = run_trial(points[i / per], seed, static_cast<int>(i % per));
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(records.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<TrialRecord> mine(records.begin() + static_cast<std::ptrdiff_t>(p * per),
                                  records.begin() + static_cast<std::ptrdiff_t>((p + 1) * per));
    rows.push_back(aggregate(points[p], std::move(mine)));
  }
  return rows;
}

std::vector<TracePoint> run_convergence(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                        std::uint64_t seed) {
  std::vector<TracePoint> out;
  for (double p : powers_dbm) {
    SystemConfig c = cfg;
    c.p_max = dbm_to_watt(p);
    auto rng = trial_rng(seed, 0, 0);
    const auto ch = draw_channels(c, rng);
    RunOptions options;
    options.check_rank = false;
    for (const auto& rec : run_algorithm1(ch, c, options).trace_log) out.push_back({p, rec});
  }
  return out;
}

std::vector<ResultRow> run_scnr_vs_threshold(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                             const std::vector<double>& gamma_se_dbm, int trials,
                                             std::uint64_t seed, int jobs) {
  std::vector<GridPoint> points;
  for (double se : gamma_se_dbm)
    for (Scheme scheme : {Scheme::kProposed, Scheme::kNoSecurity})
      for (double s : gamma_s_dbm) {
        SystemConfig c = cfg;
        c.gamma_se = threshold_from_dbm(se);
        c.gamma_s = threshold_from_dbm(s);
        points.push_back(make_point(c, scheme, "gamma_s_dbm", s));
      }
  return evaluate(points, trials, seed, jobs);
}

std::vector<ResultRow> run_feasibility(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                       const std::vector<double>& gamma_se_dbm, int trials, std::uint64_t seed,
                                       int jobs) {
  std::vector<GridPoint> points;
  for (double se : gamma_se_dbm)
    for (double s : gamma_s_dbm) {
      SystemConfig c = cfg;
      c.gamma_se = threshold_from_dbm(se);
      c.gamma_s = threshold_from_dbm(s);
      points.push_back(make_point(c, Scheme::kProposed, "gamma_s_dbm", s));
    }
  return evaluate(points, trials, seed, jobs);
}

std::vector<ResultRow> run_secrecy_vs_power(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                            const std::vector<int>& nt_list, int trials, std::uint64_t seed,
                                            int jobs) {
  std::vector<GridPoint> points;
  for (Scheme scheme : {Scheme::kProposed, Scheme::kSRandom})
    for (int nt : nt_list)
      for (double p : powers_dbm) {
        SystemConfig c = cfg;
        c.n_t = nt;
        c.p_max = dbm_to_watt(p);
        points.push_back(make_point(c, scheme, "p_dbm", p));
      }
  return evaluate(points, trials, seed, jobs);
}

std::vector<ResultRow> run_secrecy_vs_gamma_s(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                              const std::vector<int>& nt_list, int trials, std::uint64_t seed,
                                              int jobs) {
  std::vector<GridPoint> points;
  for (int nt : nt_list)
    for (double s : gamma_s_dbm) {
      SystemConfig c = cfg;
      c.n_t = nt;
      c.gamma_s = threshold_from_dbm(s);
      points.push_back(make_point(c, Scheme::kProposed, "gamma_s_dbm", s));
    }
  return evaluate(points, trials, seed, jobs);
}

std::vector<ResultRow> run_avg_secrecy_vs_k(const SystemConfig& cfg, const std::vector<int>& k_list,
                                            const std::vector<double>& powers_dbm, const std::vector<int>& nt_list,
                                            int trials, std::uint64_t seed, int jobs) {
  std::vector<GridPoint> points;
  for (int nt : nt_list)
    for (double p : powers_dbm)
      for (int k : k_list) {
        SystemConfig c = cfg;
        c.n_t = nt;
        c.p_max = dbm_to_watt(p);
        set_user_count(c, k);
        points.push_back(make_point(c, Scheme::kProposed, "k_users", k));
      }
  return evaluate(points, trials, seed, jobs);
}

std::vector<PatternResult> run_beampattern(const SystemConfig& cfg, const std::vector<double>& theta_t_deg,
                                           const std::vector<int>& nt_list, std::uint64_t seed) {
  const std::vector<double> grid = default_pattern_grid();
  std::vector<PatternResult> out;
  for (double th : theta_t_deg)
    for (int nt : nt_list) {
      SystemConfig c = cfg;
      c.n_t = nt;
      c.theta_t = deg_to_rad(th);
      auto rng = trial_rng(seed, 0, 0);
      const auto ch = draw_channels(c, rng);
      const BeamformingSolution sol = run_algorithm1(ch, c);

      PatternResult r;
      r.theta_t_deg = th;
      r.n_t = nt;
      r.pattern = beam_pattern(sol, ch, c, grid);
      r.secrecy_rate = sol.secrecy_rate;
      const auto& sens = r.pattern.sens;
      const auto peak = std::max_element(sens.begin(), sens.end()) - sens.begin();
      r.sensing_peak_deg = rad_to_deg(grid[static_cast<std::size_t>(peak)]);
      r.sensing_lobe_width_deg = main_lobe_width_deg(r.pattern.theta, sens);

      // Communication gain exactly at theta_t relative to its grid peak.
      Eigen::MatrixXcd q_sum = Eigen::MatrixXcd::Zero(nt, nt);
      for (const auto& q : sol.Q) q_sum += q;
      double comm_peak = 0.0;
      for (double t : grid) comm_peak = std::max(comm_peak, quad_form(steering_vector(t, nt).adjoint(), q_sum));
      const double at_target = std::max(quad_form(steering_vector(c.theta_t, nt).adjoint(), q_sum), 0.0);
      r.comm_at_target_db = linear_to_db(std::max(at_target / comm_peak, 1e-30));
      out.push_back(std::move(r));
    }
  return out;
}

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  int k_max = 0;
  for (const auto& r : rows) k_max = std::max(k_max, r.point.cfg.k_users);
  os << "scheme,swept_name,swept,n_t,k_users,p_dbm,gamma_s_dbm,gamma_se_dbm,theta_t_deg,trials,solved,infeasible,"
        "failed,feasibility,mean_secrecy,mean_secrecy_solved,mean_avg_secrecy,mean_scnr_bs";
  for (int k = 1; k <= k_max; ++k) os << ",mean_scnr_se_" << k;
  os << ",mean_iterations,min_rank_ratio\n";
  for (const auto& r : rows) {
    const auto& c = r.point.cfg;
    os << to_string(r.point.scheme) << ',' << r.point.swept_name << ',' << num(r.point.swept) << ',' << c.n_t << ','
       << c.k_users << ',' << num(watt_to_dbm(c.p_max)) << ',' << num(watt_to_dbm(c.gamma_s)) << ','
       << num(watt_to_dbm(c.gamma_se)) << ',' << num(rad_to_deg(c.theta_t)) << ',' << r.trials.size() << ','
       << r.solved << ',' << r.infeasible << ',' << r.failed << ',' << num(r.feasibility) << ','
       << num(r.mean_secrecy) << ',' << num(r.mean_secrecy_solved) << ',' << num(r.mean_avg_secrecy) << ','
       << num(r.mean_scnr_bs);
    for (int k = 0; k < k_max; ++k)
      os << ',' << (k < static_cast<int>(r.mean_scnr_se.size()) ? num(r.mean_scnr_se[static_cast<std::size_t>(k)]) : "");
    os << ',' << num(r.mean_iterations) << ',' << num(r.min_rank_ratio) << '\n';
  }
}

void write_trials_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "scheme,swept_name,swept,n_t,k_users,p_dbm,gamma_s_dbm,gamma_se_dbm,trial,status,secrecy_rate,iterations,"
        "converged,min_rank_ratio,scnr_bs,max_scnr_se,power_over_pmax\n";
  for (const auto& r : rows) {
    const auto& c = r.point.cfg;
    for (const auto& t : r.trials) {
      double rank = 1.0;
      for (double q : t.rank_ratio) rank = std::min(rank, q);
      const bool ok = t.status == TrialStatus::kSolved;
      os << to_string(r.point.scheme) << ',' << r.point.swept_name << ',' << num(r.point.swept) << ',' << c.n_t
         << ',' << c.k_users << ',' << num(watt_to_dbm(c.p_max)) << ',' << num(watt_to_dbm(c.gamma_s)) << ','
         << num(watt_to_dbm(c.gamma_se)) << ',' << t.trial << ',' << to_string(t.status) << ','
         << num(t.secrecy_rate) << ',' << t.iterations << ',' << (t.converged ? 1 : 0) << ','
         << (ok ? num(rank) : "") << ',' << (ok ? num(t.scnr_bs) : "") << ','
         << (ok ? num(t.scnr_se_over_gamma * c.gamma_se) : "") << ',' << (ok ? num(t.power_over_pmax) : "")
         << '\n';
    }
  }
}

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
  os << "power_dbm,iter,f,delta_f\n";
  for (const auto& t : trace)
    os << num(t.power_dbm) << ',' << t.record.iter << ',' << num(t.record.f) << ',' << num(t.record.delta_f) << '\n';
}

void write_pattern_csv(std::ostream& os, const PatternResult& result) {
  os << "theta_deg,comm,sens,comm_db,sens_db\n";
  const auto& p = result.pattern;
  for (std::size_t i = 0; i < p.theta.size(); ++i)
    os << num(rad_to_deg(p.theta[i])) << ',' << num(p.comm[i]) << ',' << num(p.sens[i]) << ','
       << num(linear_to_db(std::max(p.comm[i], 1e-30))) << ',' << num(linear_to_db(std::max(p.sens[i], 1e-30)))
       << '\n';
}

void write_manifest(std::ostream& os, const Manifest& m) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.config_hash));
  os << "version: " << version() << '\n'
     << "command: " << m.command << '\n'
     << "config_hash: " << hash << '\n'
     << "seed: " << m.seed << '\n'
     << "trials: " << m.trials << '\n'
     << "files:\n";
  for (const auto& f : m.files) os << "  - " << f << '\n';
}

const char* version() { return ISAC_VERSION; }

}  // namespace isac::experiments
