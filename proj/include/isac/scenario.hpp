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

#ifndef ISAC_SCENARIO_HPP_
#define ISAC_SCENARIO_HPP_

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isac {

using cdouble = std::complex<double>;

/// Raised by `validate` when a configuration field violates its invariant.
/// `field()` names the offending key so front ends can report it verbatim.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Scenario and algorithm parameters, all in linear SI units (watts, meters,
/// radians, dimensionless ratios). Conversion from dBm/dB/degrees happens once,
/// when a configuration file is read.
struct SystemConfig {
  int n_t = 8;
  int k_users = 3;
  double p_max = 0.0;          // W
  double gamma_se = 0.0;       // sensing-eavesdropper SCNR upper limit
  double gamma_s = 0.0;        // BS SCNR lower limit
  double sigma2_user = 0.0;    // W, shared by all CUs
  double sigma2_target = 0.0;  // W
  double sigma2_bs = 0.0;      // W
  double theta_t = 0.0;        // rad
  double rcs = 1.0;            // m^2
  std::vector<double> d_bu;    // m, one per CU
  std::vector<double> d_ut;    // m, one per CU
  double d_bt = 50.0;          // m
  double ple_bu = 3.3;
  double ple_bt = 2.0;
  double ple_ut = 2.3;
  double c0 = 1e-3;  // reference path loss at 1 m
  double delta = 1e-3;
  int max_iters = 30;
  double rank_tol = 1e-3;
  std::uint64_t seed = 1;

  // Solver and heuristic knobs.
  double solver_tol = 1e-8;
  double init_rho = 0.5;      // share of power given to S in the starting point
  double baseline_mu = 0.3;   // Tr(S)/P for the random-S baseline
};

/// Throws ConfigError on the first violated invariant.
void validate(const SystemConfig& cfg);

/// Default profile: the simulation table (K = 3, theta_t = 0, noise
/// -80/-80/-100 dBm, distances 30/30/30 m and 25/25/30 m, 50 m to the target)
/// with N_t = 8, P = 18 dBm, gamma_s = 32 and gamma_se = 5 in the threshold
/// convention of `threshold_from_dbm`.
SystemConfig default_config();

/// SCNR thresholds are quoted in "dBm"; they are mapped with the dBm rule
/// 10^((x - 30) / 10). This is the reading under which the feasibility knees
/// land at gamma_se + 27.2 dB for the default geometry.
double threshold_from_dbm(double value);

/// Extend d_bu / d_ut for K users by cycling the three-user default pattern.
void set_user_count(SystemConfig& cfg, int k_users);

struct ChannelRealization {
  std::vector<Eigen::VectorXcd> g;         // BS -> CU k, column (N_t)
  Eigen::VectorXcd h_ce;                   // BS -> target, column (N_t)
  std::vector<cdouble> h_e;                // target -> CU k
  std::vector<Eigen::RowVectorXcd> h_se;   // h_e,k * h_ce^H
  std::vector<Eigen::RowVectorXcd> h_eff;  // g_k^H + h_se,k
  Eigen::MatrixXcd H_ce;                   // h_ce * h_ce^H

  int n_t() const { return static_cast<int>(h_ce.size()); }
  int k_users() const { return static_cast<int>(g.size()); }
};

/// Half-wavelength ULA response, element m = exp(j*pi*m*sin(theta)).
Eigen::VectorXcd steering_vector(double theta, int n_t);

/// C0 * (1 / d)^exponent with d0 = 1 m. Throws std::domain_error for d <= 0.
double path_loss(double distance, double exponent, double c0 = 1e-3);

/// Amplitude of the BS -> target link: sqrt(rcs * PL(d_bt, ple_bt)).
double target_gain(const SystemConfig& cfg);

/// Assemble the derived fields (h_se, h_eff, H_ce) from g, h_ce, h_e.
ChannelRealization assemble_channels(std::vector<Eigen::VectorXcd> g,
                                     Eigen::VectorXcd h_ce,
                                     std::vector<cdouble> h_e);

/// One realization: Rayleigh g_k ~ CN(0, PL_bu I), deterministic LoS h_ce,
/// and h_e,k with fixed magnitude and uniform phase.
ChannelRealization draw_channels(const SystemConfig& cfg, std::mt19937_64& rng);

}  // namespace isac

#endif  // ISAC_SCENARIO_HPP_
