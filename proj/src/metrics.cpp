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

#include "isac/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "isac/units.hpp"

namespace isac {

namespace {

constexpr double kImagTolerance = 1e-8;

Eigen::MatrixXcd sum_q(const BeamformingSolution& sol) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(sol.S.rows(), sol.S.cols());
  for (const auto& q : sol.Q) sum += q;
  return sum;
}

// x * (sum_{i != k} Q_i) * x^H
double others_form(const Eigen::RowVectorXcd& x, const BeamformingSolution& sol, int k) {
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(sol.Q.size()); ++i)
    if (i != k) acc += quad_form(x, sol.Q[i]);
  return acc;
}

}  // namespace

double quad_form(const Eigen::RowVectorXcd& x, const Eigen::MatrixXcd& a) {
  const cdouble value = (x * a * x.adjoint())(0, 0);
  const double scale = x.squaredNorm() * a.norm();
  if (std::abs(value.imag()) > kImagTolerance * std::max(scale, std::abs(value.real())) && scale > 0.0)
    throw std::logic_error("quad_form: argument is not Hermitian (imaginary residue too large)");
  return value.real();
}

double sinr_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const auto& h = ch.h_eff.at(static_cast<std::size_t>(k));
  const double signal = quad_form(h, sol.Q.at(static_cast<std::size_t>(k)));
  const double interference = others_form(h, sol, k) + quad_form(h, sol.S);
  return signal / (cfg.sigma2_user + interference);
}

double rate_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  return std::log1p(sinr_user(k, sol, ch, cfg)) / std::numbers::ln2;
}

double scnr_bs(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const auto& H = ch.H_ce;
  const double echo = (H * sol.S * H.adjoint()).trace().real();
  double clutter = 0.0;
  for (const auto& q : sol.Q) clutter += (H * q * H.adjoint()).trace().real();
  return echo / (cfg.sigma2_bs + clutter);
}

double sinr_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const Eigen::RowVectorXcd x = ch.h_ce.adjoint();
  const double signal = quad_form(x, sol.Q.at(static_cast<std::size_t>(k)));
  const double interference = quad_form(x, sol.S) + others_form(x, sol, k);
  return signal / (cfg.sigma2_target + interference);
}

double rate_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  return std::log1p(sinr_eve(k, sol, ch, cfg)) / std::numbers::ln2;
}

double secrecy_rate(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  double sr = 0.0;
  for (int k = 0; k < static_cast<int>(sol.Q.size()); ++k)
    sr += std::max(rate_user(k, sol, ch, cfg) - rate_eve(k, sol, ch, cfg), 0.0);
  return sr;
}

double scnr_sense_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch,
                      const SystemConfig& cfg) {
  const auto& x = ch.h_se.at(static_cast<std::size_t>(k));
  const double echo = quad_form(x, sol.S) + quad_form(x, sol.Q.at(static_cast<std::size_t>(k)));
  return echo / (cfg.sigma2_user + others_form(x, sol, k));
}

double total_power(const BeamformingSolution& sol) { return (sum_q(sol) + sol.S).trace().real(); }

double rank_ratio(const Eigen::MatrixXcd& q, double zero_trace) {
  const double tr = q.trace().real();
  if (!(tr > zero_trace) || !(tr > 0.0)) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff() / tr;
}

BeamPattern beam_pattern(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg,
                         std::span<const double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("beam_pattern: empty angle grid");
  const int n = ch.n_t() > 0 ? ch.n_t() : cfg.n_t;
  const Eigen::MatrixXcd q_sum = sum_q(sol);
  BeamPattern bp;
  bp.theta.assign(thetas.begin(), thetas.end());
  bp.comm.reserve(thetas.size());
  bp.sens.reserve(thetas.size());
  for (double theta : thetas) {
    const Eigen::RowVectorXcd a_h = steering_vector(theta, n).adjoint();
    bp.comm.push_back(std::max(quad_form(a_h, q_sum), 0.0));
    bp.sens.push_back(std::max(quad_form(a_h, sol.S), 0.0));
  }
  auto normalize = [](std::vector<double>& v, const char* which) {
    const double peak = *std::max_element(v.begin(), v.end());
    if (!(peak > 0.0)) throw DegeneratePattern(std::string("degenerate pattern: ") + which + " covariance is zero");
    for (double& x : v) x /= peak;
  };
  normalize(bp.comm, "communication");
  normalize(bp.sens, "sensing");
  return bp;
}

std::vector<double> default_pattern_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 720; ++i) grid.push_back(deg_to_rad(-90.0 + 0.25 * i));
  return grid;
}

double main_lobe_width_deg(std::span<const double> theta, std::span<const double> gain) {
  if (theta.size() != gain.size() || theta.empty()) throw std::invalid_argument("main_lobe_width_deg: bad grid");
  const auto peak_it = std::max_element(gain.begin(), gain.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - gain.begin());
  const double half = *peak_it * 0.5;
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (gain[inside] - half) / (gain[inside] - gain[outside]);
    return rad_to_deg(theta[inside] + t * (theta[outside] - theta[inside]));
  };
  std::size_t lo = peak;
  while (lo > 0 && gain[lo - 1] >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < gain.size() && gain[hi + 1] >= half) ++hi;
  const double left = lo > 0 ? crossing(lo, lo - 1) : rad_to_deg(theta.front());
  const double right = hi + 1 < gain.size() ? crossing(hi, hi + 1) : rad_to_deg(theta.back());
  return right - left;
}

}  // namespace isac
