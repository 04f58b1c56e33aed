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

// Acceptance run: one PASS/FAIL line per criterion with the measured
// magnitudes, then a summary. Exit status is the number of failures.
//
// Heavy sweeps are shared between criteria: the power and gamma_s sweeps
// feed criteria 2 and 3 as well as 5 and 6.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "isac/experiments.hpp"
#include "isac/optimizer.hpp"
#include "isac/oracles.hpp"
#include "isac/units.hpp"

using namespace isac;
using namespace isac::experiments;

namespace {

constexpr std::uint64_t kSeed = 1;

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

// Runs of the proposed scheme that were solved and converged, for 2 and 3.
std::vector<TrialRecord> converged_runs;

void collect(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows) {
    if (r.point.scheme != Scheme::kProposed) continue;
    for (const auto& t : r.trials)
      if (t.status == TrialStatus::kSolved && t.converged) converged_runs.push_back(t);
  }
}

const ResultRow& find(const std::vector<ResultRow>& rows, Scheme s, int n_t, double swept) {
  for (const auto& r : rows)
    if (r.point.scheme == s && r.point.cfg.n_t == n_t && std::abs(r.point.swept - swept) < 1e-9) return r;
  throw std::logic_error("acceptance: missing grid point");
}

void criterion1(const SystemConfig& base) {
  std::vector<GridPoint> pts;
  for (double p : {18.0, 22.0, 26.0}) {
    GridPoint g;
    g.cfg = base;
    g.cfg.p_max = dbm_to_watt(p);
    g.swept_name = "p_dbm";
    g.swept = p;
    pts.push_back(g);
  }
  const auto rows = evaluate(pts, 20, kSeed, jobs());
  collect(rows);
  bool ok = true;
  for (const auto& r : rows) {
    int fast = 0, worst_iter = 0;
    double worst_drop = 0.0;
    for (const auto& t : r.trials) {
      if (t.status == TrialStatus::kSolved && t.converged && t.iterations <= 10) ++fast;
      worst_iter = std::max(worst_iter, t.iterations);
      worst_drop = std::max(worst_drop, t.max_objective_drop);
    }
    const bool row_ok = fast >= 18 && worst_drop <= 1e-6;
    ok = ok && row_ok;
    note(fmt("P = %g dBm: %d/20 converged within 10 iterations (mean %.2f, max %d), largest objective drop %.2e",
             r.point.swept, fast, r.mean_iterations, worst_iter, worst_drop));
  }
  verdict(1, ok, "convergence within 10 iterations on >= 90% of draws, non-decreasing trace (tol 1e-6)");
}

void criterion4(const SystemConfig& base) {
  std::vector<double> gs;
  for (int g = 24; g <= 36; ++g) gs.push_back(g);
  const auto rows = run_feasibility(base, gs, {2.0, 5.0}, 50, kSeed, jobs());
  bool ok = true;
  for (double gse : {2.0, 5.0}) {
    const double expected = gse + 27.2;
    std::string fr;
    double prev = 2.0, first_zero = NAN;
    bool monotone = true;
    for (const auto& r : rows) {
      if (std::abs(linear_to_db(r.point.cfg.gamma_se) - (gse - 30.0)) > 1e-9) continue;
      fr += fmt(" %.2f", r.feasibility);
      monotone = monotone && r.feasibility <= prev;
      prev = r.feasibility;
      if (std::isnan(first_zero) && r.feasibility == 0.0) first_zero = r.point.swept;
    }
    const bool row_ok = monotone && !std::isnan(first_zero) && std::abs(first_zero - expected) <= 2.0;
    ok = ok && row_ok;
    note(fmt("gamma_se = %g: fractions (24..36 dBm):%s", gse, fr.c_str()));
    note(fmt("gamma_se = %g: monotone %s, first zero at %g (expected %.1f +- 2)", gse, monotone ? "yes" : "no",
             first_zero, expected));
  }
  verdict(4, ok, "feasibility knee, monotone fraction, first zero within 2 dB");
}

void criterion5(const SystemConfig& base) {
  const std::vector<double> powers = {14.0, 18.0, 22.0, 26.0};
  const std::vector<int> nts = {8, 10, 12};
  const auto rows = run_secrecy_vs_power(base, powers, nts, 50, kSeed, jobs());
  collect(rows);
  const auto& prop = find(rows, Scheme::kProposed, 8, 18.0);
  const auto& rnd = find(rows, Scheme::kSRandom, 8, 18.0);
  const double gain = rnd.mean_secrecy > 0 ? prop.mean_secrecy / rnd.mean_secrecy - 1.0 : INFINITY;
  note(fmt("N_t = 8, P = 18: proposed %.4f (feasible %.2f), S random %.4f (feasible %.2f), gain %+.1f%%",
           prop.mean_secrecy, prop.feasibility, rnd.mean_secrecy, rnd.feasibility, 100.0 * gain));
  bool mono = true;
  for (Scheme s : {Scheme::kProposed, Scheme::kSRandom}) {
    for (int n : nts) {
      std::string line;
      for (std::size_t i = 0; i < powers.size(); ++i) {
        const double v = find(rows, s, n, powers[i]).mean_secrecy;
        line += fmt(" %.4f", v);
        if (i > 0) mono = mono && v >= find(rows, s, n, powers[i - 1]).mean_secrecy;
      }
      note(fmt("%-10s N_t = %2d, P = 14/18/22/26:%s", to_string(s), n, line.c_str()));
    }
    for (double p : powers)
      for (std::size_t j = 1; j < nts.size(); ++j)
        mono = mono && find(rows, s, nts[j], p).mean_secrecy >= find(rows, s, nts[j - 1], p).mean_secrecy;
  }
  verdict(5, gain >= 0.5 && mono,
          fmt("proposed beats S random by %+.1f%% (need >= 50%%); monotone in P and N_t: %s", 100.0 * gain,
              mono ? "yes" : "no"));

  // The baseline's fixed S rarely meets the sensing cap at this floor. Same
  // comparison where it is feasible, for scale; not part of the verdict.
  SystemConfig low = base;
  low.gamma_s = threshold_from_dbm(24.0);
  const auto info = run_secrecy_vs_power(low, {18.0}, {8}, 50, kSeed, jobs());
  note(fmt("for reference at gamma_s = 24: proposed %.4f, S random %.4f (feasible %.2f)",
           find(info, Scheme::kProposed, 8, 18.0).mean_secrecy, find(info, Scheme::kSRandom, 8, 18.0).mean_secrecy,
           find(info, Scheme::kSRandom, 8, 18.0).feasibility));
}

void criterion6(const SystemConfig& base) {
  const std::vector<double> gs = {24.0, 28.0, 32.0};
  const std::vector<int> nts = {8, 10, 12};
  const auto rows = run_secrecy_vs_gamma_s(base, gs, nts, 50, kSeed, jobs());
  collect(rows);
  std::vector<double> drops;
  for (int n : nts) {
    std::string line;
    for (double g : gs) line += fmt(" %.4f", find(rows, Scheme::kProposed, n, g).mean_secrecy);
    drops.push_back(find(rows, Scheme::kProposed, n, gs.front()).mean_secrecy -
                    find(rows, Scheme::kProposed, n, gs.back()).mean_secrecy);
    note(fmt("N_t = %2d, gamma_s = 24/28/32:%s, drop %.4f", n, line.c_str(), drops.back()));
  }
  // The decrease is measured from 24 to 32; the middle point is shown for
  // the shape only (where the floor is slack the optimum is flat).
  const bool decreasing = std::ranges::all_of(drops, [](double d) { return d > 0.0; });
  const bool ordered = drops[0] > drops[1] && drops[1] > drops[2];
  verdict(6, decreasing && ordered,
          fmt("secrecy at 32 below 24 for every N_t: %s; drops %.3f > %.3f > %.3f: %s", decreasing ? "yes" : "no",
              drops[0], drops[1], drops[2], ordered ? "yes" : "no"));
}

void criterion2() {
  double worst = 1.0;
  for (const auto& t : converged_runs)
    for (double r : t.rank_ratio) worst = std::min(worst, r);
  const bool ok = converged_runs.size() >= 100 && worst >= 0.999;
  verdict(2, ok, fmt("%zu converged runs, smallest lambda_max / trace %.6f (need >= 0.999 on >= 100 runs)",
                     converged_runs.size(), worst));
}

void criterion3() {
  double se = 0.0, bs = INFINITY, pw_hi = 0.0, pw_lo = INFINITY;
  for (const auto& t : converged_runs) {
    se = std::max(se, t.scnr_se_over_gamma);
    bs = std::min(bs, t.scnr_bs_over_gamma);
    pw_hi = std::max(pw_hi, t.power_over_pmax);
    pw_lo = std::min(pw_lo, t.power_over_pmax);
  }
  const bool ok = se <= 1 + 1e-5 && bs >= 1 - 1e-5 && pw_hi <= 1 + 1e-6 && pw_lo >= 1 - 1e-3;
  verdict(3, ok,
          fmt("%zu runs: max scnr_se/gamma_se %.8f, min scnr_bs/gamma_s %.8f, power/P in [%.6f, %.8f]",
              converged_runs.size(), se, bs, pw_lo, pw_hi));
}

void criterion7(const SystemConfig& base) {
  const auto res = run_beampattern(base, {0.0, 10.0}, {8, 12}, kSeed);
  bool ok = true;
  std::map<double, std::map<int, double>> lobe;
  for (const auto& r : res) {
    const bool peak_ok = std::abs(r.sensing_peak_deg - r.theta_t_deg) <= 1.0;
    const bool comm_ok = r.comm_at_target_db <= -10.0;
    ok = ok && peak_ok && comm_ok;
    lobe[r.theta_t_deg][r.n_t] = r.sensing_lobe_width_deg;
    note(fmt("theta_t = %4.1f, N_t = %2d: sensing peak %+.2f deg (%s), comm at target %.1f dB (%s), lobe %.2f deg",
             r.theta_t_deg, r.n_t, r.sensing_peak_deg, peak_ok ? "ok" : "off", r.comm_at_target_db,
             comm_ok ? "ok" : "high", r.sensing_lobe_width_deg));
  }
  for (auto& [theta, w] : lobe) ok = ok && w[12] < w[8];
  verdict(7, ok, "sensing peak within 1 deg of theta_t, comm at theta_t <= -10 dB, N_t = 12 lobe narrower");
}

void criterion8(const SystemConfig& base) {
  SystemConfig tiny = base;
  tiny.n_t = 2;
  set_user_count(tiny, 1);
  tiny.gamma_s = threshold_from_dbm(20.0);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    auto rng = trial_rng(kSeed, t, 0);
    const ChannelRealization ch = draw_channels(tiny, rng);
    const double sca = run_algorithm1(ch, tiny).secrecy_rate;
    const auto bf = oracle::brute_force_tiny(ch, tiny);
    const double rel = std::abs(sca - bf.secrecy_rate) / std::max(bf.secrecy_rate, 1e-12);
    worst = std::max(worst, rel);
    ok = ok && bf.feasible && rel <= 0.02;
    note(fmt("draw %d: SCA %.6f, brute force %.6f over %ld points, rel %.4f", t, sca, bf.secrecy_rate,
             bf.evaluated, rel));
  }
  const auto mc = oracle::compare_metrics(1000, 20240501);
  note(fmt("metrics on %d random instances: worst relative error %.2e (%s)", mc.instances, mc.worst_rel,
           mc.worst_metric.c_str()));
  ok = ok && mc.worst_rel <= 1e-10;
  verdict(8, ok, fmt("brute force within 2%% (worst %.4f), metrics within 1e-10 (worst %.2e)", worst, mc.worst_rel));
}

void criterion9() {
  const auto sc = oracle::check_surrogate(100000, kSeed, 1e-12);
  const bool ok = sc.below == 0 && sc.false_equal == 0 && sc.equal_at_x0 == sc.x0_pairs;
  verdict(9, ok, fmt("%ld pairs: %ld below e^x, %ld equalities away from x0, %ld/%ld equal at x = x0", sc.pairs,
                     sc.below, sc.false_equal, sc.equal_at_x0, sc.x0_pairs));
}

}  // namespace

int main() {
  const SystemConfig base = default_config();
  const auto t0 = std::chrono::steady_clock::now();
  auto stage = [&](const char* name, auto&& fn) {
    std::printf("[%s]\n", name);
    std::fflush(stdout);
    try {
      fn();
    } catch (const std::exception& e) {
      ++failures;
      std::printf("    aborted: %s\n", e.what());
    }
  };
  stage("9 surrogate", [] { criterion9(); });
  stage("8 oracles", [&] { criterion8(base); });
  stage("7 beam patterns", [&] { criterion7(base); });
  stage("1 convergence", [&] { criterion1(base); });
  stage("4 feasibility", [&] { criterion4(base); });
  stage("6 gamma_s sweep", [&] { criterion6(base); });
  stage("5 power sweep", [&] { criterion5(base); });
  stage("2 rank one", [] { criterion2(); });
  stage("3 constraints", [] { criterion3(); });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d failing criteria, %.0f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
