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

// Secrecy-rate maximization by successive convex approximation.
//
// Each user's secrecy term log(A/B) - log(C/D) is rewritten with auxiliary
// variables tau, eps, u, v such that e^tau <= A, e^eps >= B, e^u >= C and
// e^v <= D. The upper bounds are exponential-cone constraints; the two lower
// bounds are replaced by their first-order expansion around the previous
// iterate, which is an inner approximation, so every iterate stays feasible
// and the surrogate objective sum_k (tau_k - eps_k - u + v_k) never
// decreases. The rank-one requirement on Q_k is dropped and checked after
// the fact.

#ifndef ISAC_OPTIMIZER_HPP_
#define ISAC_OPTIMIZER_HPP_

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isac/conic.hpp"
#include "isac/metrics.hpp"
#include "isac/scenario.hpp"

namespace isac {

/// Expansion points carried between iterations.
struct ScaState {
  std::vector<double> eps;  // per-user interference-plus-noise level, log scale
  double u = 0.0;           // eavesdropper total received level, log scale
  std::vector<double> tau;  // log(1 + m1 * received) per user; centers the upper-bound cones
  std::vector<double> v;    // log(1 + m2 * eve_others) per user; same purpose
  double f = 0.0;           // surrogate objective, nats
  int n = 0;
};

struct RunOptions {
  bool sensing_security = true;  // cap SCNR at every CU (drop for the unconstrained variant)
  bool check_rank = true;        // throw RankViolation from extract_beamformers
  std::optional<Eigen::MatrixXcd> fixed_S;  // optimize Q only, with this sensing covariance
};

/// Program plus handles to the named variables. Matrix variables are in units
/// of `power_unit` watts.
struct Subproblem {
  conic::ConeProgram program;
  std::vector<conic::HermitianBlock> Q;
  std::optional<conic::HermitianBlock> S;
  std::vector<conic::Var> tau, eps, v;
  conic::Var u;
  double power_unit = 1.0;
};

class ScenarioInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::vector<TraceRecord> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TraceRecord>& trace() const { return trace_; }

 private:
  std::vector<TraceRecord> trace_;
};

class RankViolation : public std::runtime_error {
 public:
  RankViolation(int user, double ratio)
      : std::runtime_error("Q_" + std::to_string(user) + " is not rank one (lambda_max / trace = " +
                           std::to_string(ratio) + ")"),
        user_(user),
        ratio_(ratio) {}
  int user() const { return user_; }
  double ratio() const { return ratio_; }

 private:
  int user_;
  double ratio_;
};

/// Expansion point and surrogate value evaluated at given covariances.
ScaState sca_state_at(const std::vector<Eigen::MatrixXcd>& Q, const Eigen::MatrixXcd& S,
                      const ChannelRealization& ch, const SystemConfig& cfg);

/// Heuristic covariances: rho * P for S and (1 - rho) * P / K for each Q_k,
/// all rank one. The directions are regularized zero-forcing against the
/// users' effective channels, applied to a(theta_t) for S and to h_k^H for
/// Q_k, so the starting interference (and hence eps^(0)) is small.
void heuristic_start(const ChannelRealization& ch, const SystemConfig& cfg, double rho,
                     std::vector<Eigen::MatrixXcd>& Q, Eigen::MatrixXcd& S);

/// Starting state from `heuristic_start` with cfg.init_rho.
ScaState init_sca(const ChannelRealization& ch, const SystemConfig& cfg);

Subproblem build_subproblem(const ScaState& state, const ChannelRealization& ch, const SystemConfig& cfg,
                            const RunOptions& options = {});

/// The full iteration. Throws ScenarioInfeasible if `scenario_feasible` is
/// false, SolverFailure (with the trace so far) if the backend
/// fails, and RankViolation when options.check_rank is set and some Q_k is
/// not rank one.
BeamformingSolution run_algorithm1(const ChannelRealization& ch, const SystemConfig& cfg,
                                   const RunOptions& options = {});

/// w_k = sqrt(lambda_max) * e_max for each Q_k; records rank ratios and
/// throws RankViolation if any ratio is below 1 - cfg.rank_tol. A Q_k with
/// trace below 1e-5 P is an idle user and counts as rank one.
BeamformingSolution extract_beamformers(BeamformingSolution sol, const SystemConfig& cfg);

/// Random sensing covariance eta * G G^H with trace cfg.baseline_mu * P.
Eigen::MatrixXcd random_sensing_covariance(const SystemConfig& cfg, std::mt19937_64& rng);

/// Same iteration with S drawn by `random_sensing_covariance` and held fixed.
BeamformingSolution baseline_s_random(const ChannelRealization& ch, const SystemConfig& cfg, std::mt19937_64& rng,
                                      RunOptions options = {});

/// Largest t such that every sensing-security row holds with slack t and the
/// sensing SCNR row with surplus t (both rows normalized to 1), within the
/// power budget, capped at 1. Negative (or -inf) means the constraint set is
/// empty. Throws SolverFailure if the backend fails.
double feasibility_margin(const ChannelRealization& ch, const SystemConfig& cfg, const RunOptions& options = {});

/// True if the constraint set (sensing security, sensing SCNR, power) admits
/// a point with relative slack above 1e-6. Because the SCA expansion only
/// touches the objective-side constraints, this is also whether the first
/// subproblem is feasible.
bool scenario_feasible(const ChannelRealization& ch, const SystemConfig& cfg, const RunOptions& options = {});

}  // namespace isac

#endif  // ISAC_OPTIMIZER_HPP_
