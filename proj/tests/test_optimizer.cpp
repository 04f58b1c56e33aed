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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "isac/experiments.hpp"
#include "isac/optimizer.hpp"
#include "isac/oracles.hpp"
#include "isac/units.hpp"

using namespace isac;
using Catch::Approx;

namespace {

ChannelRealization draw(const SystemConfig& cfg, int trial = 0) {
  auto rng = experiments::trial_rng(cfg.seed, trial, 0);
  return draw_channels(cfg, rng);
}

}  // namespace

TEST_CASE("Taylor surrogate is a global under-estimator of e^x", "[optimizer][property]") {
  const auto check = oracle::check_surrogate(100000, 4242);
  CHECK(check.pairs == 100000);
  CHECK(check.below == 0);
  CHECK(check.false_equal == 0);
  CHECK(check.x0_pairs > 0);
  CHECK(check.equal_at_x0 == check.x0_pairs);
}

TEST_CASE("expansion point at zero covariances", "[optimizer]") {
  const SystemConfig cfg = default_config();
  const auto ch = draw(cfg);
  const std::vector<Eigen::MatrixXcd> Q(3, Eigen::MatrixXcd::Zero(8, 8));
  const auto st = sca_state_at(Q, Eigen::MatrixXcd::Zero(8, 8), ch, cfg);
  for (double e : st.eps) CHECK(e == 0.0);
  CHECK(st.u == 0.0);
  CHECK(st.f == 0.0);
}

TEST_CASE("starting sensing beam orthogonal to the only user adds no interference", "[optimizer]") {
  SystemConfig cfg = default_config();
  cfg.n_t = 2;
  set_user_count(cfg, 1);
  // a(0) = [1, 1]; a user channel along [1, -1] is orthogonal to it.
  Eigen::VectorXcd g(2);
  g << 1e-4, -1e-4;
  const auto ch = assemble_channels({g}, Eigen::VectorXcd::Zero(2), {cdouble(0.0)});
  std::vector<Eigen::MatrixXcd> Q;
  Eigen::MatrixXcd S;
  heuristic_start(ch, cfg, 1.0, Q, S);
  CHECK(S.trace().real() == Approx(cfg.p_max));
  const auto st = sca_state_at(Q, S, ch, cfg);
  CHECK(std::abs(st.eps[0]) < 1e-10);
}

TEST_CASE("heuristic start respects the power split", "[optimizer]") {
  const SystemConfig cfg = default_config();
  const auto ch = draw(cfg);
  std::vector<Eigen::MatrixXcd> Q;
  Eigen::MatrixXcd S;
  heuristic_start(ch, cfg, 0.3, Q, S);
  CHECK(S.trace().real() == Approx(0.3 * cfg.p_max));
  for (const auto& q : Q) {
    CHECK(q.trace().real() == Approx(0.7 * cfg.p_max / 3));
    CHECK(rank_ratio(q) == Approx(1.0).epsilon(1e-12));
  }
  const auto a = init_sca(ch, cfg);
  const auto b = init_sca(ch, cfg);
  CHECK(a.eps == b.eps);
  CHECK(a.u == b.u);
  for (double e : a.eps) CHECK(std::isfinite(e));
}

TEST_CASE("subproblem structure", "[optimizer]") {
  for (int K : {1, 2, 3, 4}) {
    SystemConfig cfg = default_config();
    set_user_count(cfg, K);
    const auto ch = draw(cfg);
    const auto sp = build_subproblem(init_sca(ch, cfg), ch, cfg);
    const auto& prog = sp.program;
    CHECK(static_cast<int>(prog.hermitian_blocks().size()) == K + 1);
    const int matrix_scalars = (K + 1) * 64;
    CHECK(prog.num_variables() - matrix_scalars == 3 * K + 1);
    CHECK(prog.count(conic::ConeKind::kExponential) == 2 * K);
    CHECK(prog.count(conic::ConeKind::kPsdTriangle) == K + 1);

    // Objective: tau - eps - u + v per user, so u carries weight -K.
    std::set<int> scalar_ids;
    for (const auto& v : sp.tau) scalar_ids.insert(v.index);
    for (const auto& v : sp.eps) scalar_ids.insert(v.index);
    for (const auto& v : sp.v) scalar_ids.insert(v.index);
    scalar_ids.insert(sp.u.index);
    double u_weight = 0.0;
    for (const auto& [i, c] : prog.objective().terms()) {
      CHECK(scalar_ids.contains(i));
      if (i == sp.u.index) u_weight += c;
    }
    CHECK(u_weight == Approx(-K));
  }
}

TEST_CASE("subproblem rejects mismatched dimensions", "[optimizer]") {
  SystemConfig cfg = default_config();
  const auto ch = draw(cfg);
  auto st = init_sca(ch, cfg);
  SystemConfig other = cfg;
  other.n_t = 4;
  CHECK_THROWS_AS(build_subproblem(st, ch, other), std::invalid_argument);
  st.eps.pop_back();
  CHECK_THROWS_AS(build_subproblem(st, ch, cfg), std::invalid_argument);
}

TEST_CASE("beamformer extraction", "[optimizer]") {
  SystemConfig cfg = default_config();
  Eigen::VectorXcd v(8);
  for (int i = 0; i < 8; ++i) v(i) = std::polar(0.1 * (i + 1), 0.3 * i);
  BeamformingSolution sol;
  sol.Q = {v * v.adjoint()};
  sol.S = Eigen::MatrixXcd::Zero(8, 8);
  const auto out = extract_beamformers(sol, cfg);
  REQUIRE(out.w.size() == 1);
  const cdouble phase = out.w[0].dot(v) / std::abs(out.w[0].dot(v));
  CHECK((out.w[0] * phase - v).norm() <= 1e-10 * v.norm());
  CHECK(out.rank_ratio[0] == Approx(1.0).epsilon(1e-12));

  sol.Q = {Eigen::MatrixXcd::Identity(8, 8)};
  try {
    extract_beamformers(sol, cfg);
    FAIL("expected RankViolation");
  } catch (const RankViolation& e) {
    CHECK(e.user() == 1);
    CHECK(e.ratio() == Approx(1.0 / 8));
  }

  // A user left with interior-point residue is idle, not a violation.
  sol.Q = {1e-9 * cfg.p_max * Eigen::MatrixXcd::Identity(8, 8)};
  CHECK(extract_beamformers(sol, cfg).rank_ratio[0] == 1.0);
}

TEST_CASE("full run on the default profile", "[optimizer]") {
  const SystemConfig cfg = default_config();
  const auto ch = draw(cfg);
  const auto sol = run_algorithm1(ch, cfg);
  CHECK(sol.converged);
  CHECK(sol.iterations_used <= 10);
  CHECK(sol.secrecy_rate > 0.0);
  for (std::size_t i = 1; i < sol.trace_log.size(); ++i)
    CHECK(sol.trace_log[i].f >= sol.trace_log[i - 1].f - 1e-6);

  for (int k = 0; k < 3; ++k) CHECK(scnr_sense_eve(k, sol, ch, cfg) <= cfg.gamma_se * (1 + 1e-5));
  CHECK(scnr_bs(sol, ch, cfg) >= cfg.gamma_s * (1 - 1e-5));
  CHECK(total_power(sol) <= cfg.p_max * (1 + 1e-6));
  CHECK(total_power(sol) >= cfg.p_max * (1 - 1e-3));
  for (double r : sol.rank_ratio) CHECK(r >= 0.999);
  REQUIRE(sol.w.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const Eigen::MatrixXcd ww = sol.w[k] * sol.w[k].adjoint();
    if (sol.Q[k].norm() > 0) CHECK((ww - sol.Q[k]).norm() / sol.Q[k].norm() <= cfg.rank_tol);
  }

  bool clamped = false;
  for (int k = 0; k < 3; ++k) clamped = clamped || rate_user(k, sol, ch, cfg) < rate_eve(k, sol, ch, cfg);
  if (!clamped) CHECK(std::abs(sol.surrogate_objective / std::numbers::ln2 - sol.secrecy_rate) <= 1e-2);

  // Same inputs, same answer.
  const auto again = run_algorithm1(ch, cfg);
  CHECK(again.secrecy_rate == sol.secrecy_rate);
  CHECK(again.iterations_used == sol.iterations_used);
}

TEST_CASE("infeasible floor is reported before iterating", "[optimizer]") {
  SystemConfig cfg = default_config();
  cfg.gamma_s = db_to_linear(60.0);
  const auto ch = draw(cfg);
  CHECK_FALSE(scenario_feasible(ch, cfg));
  CHECK(feasibility_margin(ch, cfg) < 0.0);
  CHECK_THROWS_AS(run_algorithm1(ch, cfg), ScenarioInfeasible);

  cfg.gamma_s = threshold_from_dbm(10.0);
  CHECK(scenario_feasible(ch, cfg));
  CHECK(feasibility_margin(ch, cfg) > 0.0);
}

TEST_CASE("feasibility knee of the default geometry", "[optimizer]") {
  // The cap and the floor both act on h_ce^H S h_ce. They meet at
  // gamma_s = gamma_se * sigma_k^2 * |h_ce|^2 / (|h_e|^2 sigma_b^2), which
  // for the default geometry is gamma_se + 27.2 dB on the nearest CU.
  const SystemConfig base = default_config();
  const auto ch = draw(base);
  double max_he2 = 0.0;
  for (const auto& h : ch.h_e) max_he2 = std::max(max_he2, std::norm(h));
  const double knee = base.gamma_se * base.sigma2_user * ch.h_ce.squaredNorm() / (max_he2 * base.sigma2_bs);
  CHECK(linear_to_db(knee) - linear_to_db(base.gamma_se) == Approx(27.24).margin(0.05));

  SystemConfig cfg = base;
  cfg.gamma_s = knee * 0.99;
  CHECK(scenario_feasible(ch, cfg));
  cfg.gamma_s = knee * 1.01;
  CHECK_FALSE(scenario_feasible(ch, cfg));
}

TEST_CASE("random sensing covariance", "[optimizer]") {
  SystemConfig cfg = default_config();
  std::mt19937_64 a(3), b(3);
  const auto s1 = random_sensing_covariance(cfg, a);
  const auto s2 = random_sensing_covariance(cfg, b);
  CHECK(s1 == s2);
  CHECK(s1.trace().real() == Approx(cfg.baseline_mu * cfg.p_max));
  CHECK((s1 - s1.adjoint()).norm() == 0.0);
  cfg.baseline_mu = 0.0;
  CHECK(random_sensing_covariance(cfg, a).norm() == 0.0);
}

TEST_CASE("baseline keeps its sensing covariance fixed", "[optimizer]") {
  SystemConfig cfg = default_config();
  cfg.gamma_s = threshold_from_dbm(10.0);
  const auto ch = draw(cfg);
  auto r1 = experiments::trial_rng(cfg.seed, 0, 1);
  auto r2 = experiments::trial_rng(cfg.seed, 0, 1);
  const auto base = baseline_s_random(ch, cfg, r1);
  auto r3 = experiments::trial_rng(cfg.seed, 0, 1);
  const Eigen::MatrixXcd S = random_sensing_covariance(cfg, r3);
  CHECK((base.S - S).norm() == 0.0);
  CHECK(total_power(base) <= cfg.p_max * (1 + 1e-6));
  const auto again = baseline_s_random(ch, cfg, r2);
  CHECK(again.secrecy_rate == base.secrecy_rate);

  const auto proposed = run_algorithm1(ch, cfg);
  CHECK(proposed.secrecy_rate > base.secrecy_rate);

}

TEST_CASE("dropping the cap lets the CU SCNR exceed it", "[optimizer]") {
  SystemConfig cfg = default_config();
  cfg.gamma_s = threshold_from_dbm(34.0);
  const auto ch = draw(cfg);
  RunOptions open;
  open.sensing_security = false;
  open.check_rank = false;
  const auto sol = run_algorithm1(ch, cfg, open);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, scnr_sense_eve(k, sol, ch, cfg) / cfg.gamma_se);
  CHECK(worst > 1.0);
}
