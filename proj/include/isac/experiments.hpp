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

// Monte Carlo sweeps over the scenario. Every trial t of every grid point
// draws its channels from a generator seeded by (seed, t) only, so all points
// of a sweep see the same draws (common random numbers), and the results do
// not depend on how many worker threads run the trials.

#ifndef ISAC_EXPERIMENTS_HPP_
#define ISAC_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "isac/metrics.hpp"
#include "isac/optimizer.hpp"
#include "isac/scenario.hpp"

namespace isac::experiments {

enum class Scheme { kProposed, kSRandom, kNoSecurity };
const char* to_string(Scheme scheme);

enum class TrialStatus { kSolved, kInfeasible, kSolverFailure };
const char* to_string(TrialStatus status);

/// Generator for trial `trial`, stream `stream` (0: channels, 1: baseline S).
std::mt19937_64 trial_rng(std::uint64_t seed, int trial, int stream = 0);

/// What one optimizer run left behind. Ratios are measured against the
/// configured thresholds so they can be checked without the config.
struct TrialRecord {
  int trial = 0;
  TrialStatus status = TrialStatus::kSolverFailure;
  std::string message;            // exception text for non-solved trials
  double secrecy_rate = 0.0;      // bits/s/Hz, 0 unless solved
  double surrogate_bits = 0.0;    // final surrogate objective / ln 2
  bool clamped = false;           // some user's secrecy difference was negative
  int iterations = 0;
  bool converged = false;
  double max_objective_drop = 0.0;  // max_n f^(n-1) - f^(n) for n >= 2, nats
  std::vector<double> rank_ratio;   // per Q_k, idle users reported as 1
  std::vector<double> scnr_se;      // per CU
  double scnr_bs = 0.0;
  double scnr_se_over_gamma = 0.0;  // max_k scnr_se(k) / gamma_se
  double scnr_bs_over_gamma = 0.0;  // scnr_bs / gamma_s
  double power_over_pmax = 0.0;
  double wall_time = 0.0;           // seconds
};

struct GridPoint {
  SystemConfig cfg;
  Scheme scheme = Scheme::kProposed;
  std::string swept_name;  // column label of the swept quantity
  double swept = 0.0;      // in table units (dBm, dB, count)
};

/// Aggregate over the trials of one grid point.
struct ResultRow {
  GridPoint point;
  std::vector<TrialRecord> trials;
  int solved = 0;
  int infeasible = 0;
  int failed = 0;
  double feasibility = 0.0;        // solved / trials
  double mean_secrecy = 0.0;       // over solved and infeasible trials, infeasible counted as 0
  double mean_secrecy_solved = 0.0;  // over solved trials only (NaN if none)
  double mean_avg_secrecy = 0.0;   // mean_secrecy / K
  double mean_scnr_bs = 0.0;       // over solved trials (NaN if none)
  std::vector<double> mean_scnr_se;  // per CU, over solved trials
  double mean_iterations = 0.0;
  double min_rank_ratio = 1.0;
  double wall_time = 0.0;          // summed over trials
};

/// One trial of one scheme, never throwing for scenario or solver outcomes.
TrialRecord run_trial(const GridPoint& point, std::uint64_t seed, int trial);

/// Runs `trials` trials for every point on `jobs` threads and aggregates.
std::vector<ResultRow> evaluate(const std::vector<GridPoint>& points, int trials, std::uint64_t seed, int jobs = 1);

ResultRow aggregate(const GridPoint& point, std::vector<TrialRecord> records);

// ---- sweeps ------------------------------------------------------------------

struct TracePoint {
  double power_dbm = 0.0;
  TraceRecord record;
};

/// Per-iteration traces at each power on the channel draw of trial 0.
std::vector<TracePoint> run_convergence(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                        std::uint64_t seed);

/// Sensing SCNR at the CUs vs gamma_s, with and without the security rows.
std::vector<ResultRow> run_scnr_vs_threshold(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                             const std::vector<double>& gamma_se_dbm, int trials,
                                             std::uint64_t seed, int jobs = 1);

/// Fraction of draws for which the iteration returns a solution.
std::vector<ResultRow> run_feasibility(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                       const std::vector<double>& gamma_se_dbm, int trials, std::uint64_t seed,
                                       int jobs = 1);

/// Secrecy rate vs P for each N_t, proposed scheme and random-S baseline.
std::vector<ResultRow> run_secrecy_vs_power(const SystemConfig& cfg, const std::vector<double>& powers_dbm,
                                            const std::vector<int>& nt_list, int trials, std::uint64_t seed,
                                            int jobs = 1);

/// Secrecy rate vs gamma_s for each N_t.
std::vector<ResultRow> run_secrecy_vs_gamma_s(const SystemConfig& cfg, const std::vector<double>& gamma_s_dbm,
                                              const std::vector<int>& nt_list, int trials, std::uint64_t seed,
                                              int jobs = 1);

/// Per-user secrecy rate vs K for each (P, N_t).
std::vector<ResultRow> run_avg_secrecy_vs_k(const SystemConfig& cfg, const std::vector<int>& k_list,
                                            const std::vector<double>& powers_dbm, const std::vector<int>& nt_list,
                                            int trials, std::uint64_t seed, int jobs = 1);

struct PatternResult {
  double theta_t_deg = 0.0;
  int n_t = 0;
  BeamPattern pattern;
  double sensing_peak_deg = 0.0;
  double comm_at_target_db = 0.0;  // communication gain at theta_t, dB below its peak
  double sensing_lobe_width_deg = 0.0;
  double secrecy_rate = 0.0;
};

/// Normalized patterns for each (theta_t, N_t) on the channel draw of trial 0.
std::vector<PatternResult> run_beampattern(const SystemConfig& cfg, const std::vector<double>& theta_t_deg,
                                           const std::vector<int>& nt_list, std::uint64_t seed);

// ---- output ------------------------------------------------------------------

/// Summary table, one line per ResultRow. Wall time is left out so that
/// identical invocations produce identical bytes.
void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// One line per trial of every row.
void write_trials_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace);
void write_pattern_csv(std::ostream& os, const PatternResult& result);

struct Manifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<std::string> files;
};
void write_manifest(std::ostream& os, const Manifest& manifest);

/// Library version string.
const char* version();

}  // namespace isac::experiments

#endif  // ISAC_EXPERIMENTS_HPP_
