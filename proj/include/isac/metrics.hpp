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

#ifndef ISAC_METRICS_HPP_
#define ISAC_METRICS_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "isac/scenario.hpp"

namespace isac {

/// One row of the optimizer's iteration log.
struct TraceRecord {
  int iter = 0;
  double f = 0.0;        // surrogate objective after this iteration, nats
  double delta_f = 0.0;  // relative change against the previous value
  double max_rel_violation = 0.0;
  double min_rank_ratio = 1.0;
  int solver_iterations = 0;
};

/// Transmit covariances plus what the optimizer learned producing them.
struct BeamformingSolution {
  std::vector<Eigen::MatrixXcd> Q;  // per-CU communication covariance
  Eigen::MatrixXcd S;               // sensing covariance
  std::vector<Eigen::VectorXcd> w;  // filled by extract_beamformers
  std::vector<double> rank_ratio;   // lambda_max / trace per Q_k
  double secrecy_rate = 0.0;         // bits/s/Hz
  double surrogate_objective = 0.0;  // nats
  int iterations_used = 0;
  bool converged = false;
  std::vector<TraceRecord> trace_log;
};

class DegeneratePattern : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Real part of x A x^H for a row vector x and Hermitian A. Throws
/// std::logic_error if the discarded imaginary part exceeds 1e-8 relative.
double quad_form(const Eigen::RowVectorXcd& x, const Eigen::MatrixXcd& a);

double sinr_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double rate_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double scnr_bs(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double sinr_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double rate_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double secrecy_rate(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double scnr_sense_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch,
                      const SystemConfig& cfg);
double total_power(const BeamformingSolution& sol);

/// Largest eigenvalue over trace. A matrix whose trace is at most
/// `zero_trace` counts as zero, and a zero matrix as rank one (ratio 1).
double rank_ratio(const Eigen::MatrixXcd& q, double zero_trace = 0.0);

struct BeamPattern {
  std::vector<double> theta;  // rad
  std::vector<double> comm;   // normalized to the grid maximum
  std::vector<double> sens;
};

/// a^H(theta) (sum Q) a(theta) and a^H(theta) S a(theta), each divided by its
/// own maximum over the grid. Throws DegeneratePattern for an all-zero curve.
BeamPattern beam_pattern(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg,
                         std::span<const double> thetas);

/// -90 deg .. 90 deg inclusive in 0.25 deg steps.
std::vector<double> default_pattern_grid();

/// Width in degrees of the -3 dB region around the global maximum.
double main_lobe_width_deg(std::span<const double> theta, std::span<const double> gain);

}  // namespace isac

#endif  // ISAC_METRICS_HPP_
