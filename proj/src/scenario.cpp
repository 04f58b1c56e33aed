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

#include "isac/scenario.hpp"

#include <cmath>
#include <numbers>

#include "isac/units.hpp"

namespace isac {

namespace {

constexpr double kDefaultBu[3] = {30.0, 30.0, 30.0};
constexpr double kDefaultUt[3] = {25.0, 25.0, 30.0};

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be a finite positive number");
}

}  // namespace

void validate(const SystemConfig& cfg) {
  if (cfg.n_t < 1) throw ConfigError("n_t", "must be a positive integer");
  if (cfg.k_users < 1) throw ConfigError("k_users", "must be a positive integer");
  require_positive(cfg.p_max, "p_max");
  require_positive(cfg.gamma_se, "gamma_se");
  require_positive(cfg.gamma_s, "gamma_s");
  require_positive(cfg.sigma2_user, "sigma2_user");
  require_positive(cfg.sigma2_target, "sigma2_target");
  require_positive(cfg.sigma2_bs, "sigma2_bs");
  require_positive(cfg.rcs, "rcs");
  require_positive(cfg.d_bt, "d_bt");
  require_positive(cfg.c0, "c0");
  if (!std::isfinite(cfg.theta_t)) throw ConfigError("theta_t", "must be finite");
  if (cfg.d_bu.size() != static_cast<std::size_t>(cfg.k_users))
    throw ConfigError("d_bu", "length must equal k_users");
  if (cfg.d_ut.size() != static_cast<std::size_t>(cfg.k_users))
    throw ConfigError("d_ut", "length must equal k_users");
  for (double d : cfg.d_bu) require_positive(d, "d_bu");
  for (double d : cfg.d_ut) require_positive(d, "d_ut");
  require_positive(cfg.ple_bu, "ple_bu");
  require_positive(cfg.ple_bt, "ple_bt");
  require_positive(cfg.ple_ut, "ple_ut");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
  if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0)) throw ConfigError("rank_tol", "must lie in (0, 1)");
  if (cfg.max_iters < 1) throw ConfigError("max_iters", "must be a positive integer");
  if (!(cfg.solver_tol > 0.0 && cfg.solver_tol < 1e-3)) throw ConfigError("solver_tol", "must lie in (0, 1e-3)");
  if (!(cfg.init_rho >= 0.0 && cfg.init_rho <= 1.0)) throw ConfigError("init_rho", "must lie in [0, 1]");
  if (!(cfg.baseline_mu >= 0.0 && cfg.baseline_mu < 1.0)) throw ConfigError("baseline_mu", "must lie in [0, 1)");
}

double threshold_from_dbm(double value) { return dbm_to_watt(value); }

void set_user_count(SystemConfig& cfg, int k_users) {
  cfg.k_users = k_users;
  cfg.d_bu.resize(static_cast<std::size_t>(std::max(k_users, 0)));
  cfg.d_ut.resize(cfg.d_bu.size());
  for (std::size_t k = 0; k < cfg.d_bu.size(); ++k) {
    cfg.d_bu[k] = kDefaultBu[k % 3];
    cfg.d_ut[k] = kDefaultUt[k % 3];
  }
}

SystemConfig default_config() {
  SystemConfig cfg;
  cfg.n_t = 8;
  cfg.p_max = dbm_to_watt(18.0);
  cfg.gamma_s = threshold_from_dbm(32.0);
  cfg.gamma_se = threshold_from_dbm(5.0);
  cfg.sigma2_user = dbm_to_watt(-80.0);
  cfg.sigma2_target = dbm_to_watt(-80.0);
  cfg.sigma2_bs = dbm_to_watt(-100.0);
  cfg.theta_t = 0.0;
  cfg.rcs = 1.0;
  cfg.d_bt = 50.0;
  set_user_count(cfg, 3);
  return cfg;
}

Eigen::VectorXcd steering_vector(double theta, int n_t) {
  constexpr double kSpacing = 0.5;  // d / lambda
  Eigen::VectorXcd a(n_t);
  const double phase = 2.0 * std::numbers::pi * kSpacing * std::sin(theta);
  a(0) = 1.0;
  for (int m = 1; m < n_t; ++m) a(m) = std::polar(1.0, phase * m);
  return a;
}

double path_loss(double distance, double exponent, double c0) {
  if (!(distance > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  return c0 * std::pow(1.0 / distance, exponent);
}

double target_gain(const SystemConfig& cfg) {
  return std::sqrt(cfg.rcs * path_loss(cfg.d_bt, cfg.ple_bt, cfg.c0));
}

ChannelRealization assemble_channels(std::vector<Eigen::VectorXcd> g, Eigen::VectorXcd h_ce,
                                     std::vector<cdouble> h_e) {
  ChannelRealization ch;
  ch.g = std::move(g);
  ch.h_ce = std::move(h_ce);
  ch.h_e = std::move(h_e);
  ch.H_ce = ch.h_ce * ch.h_ce.adjoint();
  ch.h_se.reserve(ch.g.size());
  ch.h_eff.reserve(ch.g.size());
  for (std::size_t k = 0; k < ch.g.size(); ++k) {
    Eigen::RowVectorXcd hse = ch.h_e[k] * ch.h_ce.adjoint();
    ch.h_eff.push_back(ch.g[k].adjoint() + hse);
    ch.h_se.push_back(std::move(hse));
  }
  return ch;
}

ChannelRealization draw_channels(const SystemConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  std::vector<Eigen::VectorXcd> g;
  std::vector<cdouble> h_e;
  g.reserve(static_cast<std::size_t>(cfg.k_users));
  h_e.reserve(g.capacity());
  for (int k = 0; k < cfg.k_users; ++k) {
    // CN(0, PL): real and imaginary parts each carry half the variance.
    const double sd = std::sqrt(path_loss(cfg.d_bu[k], cfg.ple_bu, cfg.c0) / 2.0);
    Eigen::VectorXcd gk(cfg.n_t);
    for (int m = 0; m < cfg.n_t; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      gk(m) = cdouble(sd * re, sd * im);
    }
    g.push_back(std::move(gk));
  }
  for (int k = 0; k < cfg.k_users; ++k) {
    const double beta = std::sqrt(path_loss(cfg.d_ut[k], cfg.ple_ut, cfg.c0));
    h_e.push_back(std::polar(beta, phase(rng)));
  }
  Eigen::VectorXcd h_ce = target_gain(cfg) * steering_vector(cfg.theta_t, cfg.n_t);
  return assemble_channels(std::move(g), std::move(h_ce), std::move(h_e));
}

}  // namespace isac
