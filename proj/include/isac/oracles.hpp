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

// Independent reference computations. Nothing here calls into metrics or the
// optimizer: quadratic forms are expanded element by element, and the tiny
// instance optimum comes from exhaustive search, so agreement with the main
// code path is evidence rather than tautology.

#ifndef ISAC_ORACLES_HPP_
#define ISAC_ORACLES_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isac/metrics.hpp"
#include "isac/scenario.hpp"

namespace isac::oracle {

/// sum_ij x_i A_ij conj(x_j), real part.
double direct_quad(const Eigen::RowVectorXcd& x, const Eigen::MatrixXcd& a);

double direct_sinr_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double direct_sinr_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
/// Tr(H S H^H) / (sigma_b^2 + sum_k Tr(H Q_k H^H)) by explicit triple loops.
double direct_scnr_bs(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
double direct_scnr_sense_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch,
                             const SystemConfig& cfg);
double direct_secrecy_rate(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg);
/// Sum of eigenvalues of every covariance.
double eigen_total_power(const BeamformingSolution& sol);

/// Random config, channels and PSD covariances of mixed rank.
struct MetricInstance {
  SystemConfig cfg;
  ChannelRealization ch;
  BeamformingSolution sol;
};
MetricInstance random_metric_instance(std::mt19937_64& rng);

struct MetricCheck {
  int instances = 0;
  double worst_rel = 0.0;
  std::string worst_metric;
};
/// Compares every metric function against its direct counterpart.
MetricCheck compare_metrics(int instances, std::uint64_t seed);

struct SurrogateCheck {
  long pairs = 0;
  long below = 0;          // e^x < e^x0 (1 + x - x0) beyond tolerance
  long false_equal = 0;    // equality with |x - x0| > 1e-6
  long equal_at_x0 = 0;    // x = x0 pairs that hold with equality
  long x0_pairs = 0;
};
/// e^x >= e^x0 (1 + x - x0) on random pairs, a tenth of them with x = x0.
/// Gaps are compared relative to e^max(x, x0) with tolerance `tol`.
SurrogateCheck check_surrogate(long pairs, std::uint64_t seed, double tol = 1e-12);

/// Best rank-one w and 2 x 2 PSD S for N_t = 2, K = 1, found by a grid over
///   power shares (a, b), a + b <= 1,
///   w = sqrt(aP) [cos al, sin al e^(j ph)],
///   S = bP (rho u u^H + (1 - rho) v v^H), u = [cos be, sin be e^(j ps)], v _|_ u,
/// followed by a pattern search around the best grid points.
struct BruteForceResult {
  bool feasible = false;
  double secrecy_rate = 0.0;
  Eigen::Vector2cd w = Eigen::Vector2cd::Zero();
  Eigen::Matrix2cd S = Eigen::Matrix2cd::Zero();
  long evaluated = 0;
};
struct BruteForceGrid {
  int share = 16;  // steps per unit on the (a, b) simplex
  int alpha = 12;
  int phase = 16;
  int rho = 5;
  int beta = 12;
  int psi = 12;
  int refine_starts = 24;
};
BruteForceResult brute_force_tiny(const ChannelRealization& ch, const SystemConfig& cfg,
                                  const BruteForceGrid& grid = {});

}  // namespace isac::oracle

#endif  // ISAC_ORACLES_HPP_
