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

#include "isac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace isac {

using conic::HermitianBlock;
using conic::LinExpr;

namespace {

constexpr double kDeltaFloor = 1e-9;
// Relative slack below which a constraint set is treated as empty. Sets this
// thin cannot be solved to tolerance anyway.
constexpr double kFeasibilityMargin = 1e-6;
// A user whose covariance carries less than this share of P is switched off;
// what remains is interior-point residue, not a beam, and is not rank-tested.
constexpr double kIdlePower = 1e-5;
// Offsets (nats) tried on the exponential-cone centers when a solve stalls.
constexpr double kCenterShifts[] = {0.0, 0.5, -0.5};

// Sum over users of a per-user expression, optionally skipping one index.
template <typename F>
LinExpr sum_over(int k_users, int skip, F&& term) {
  LinExpr acc;
  for (int i = 0; i < k_users; ++i)
    if (i != skip) acc += term(i);
  return acc;
}

double surrogate_value(const std::vector<double>& tau, const std::vector<double>& eps, double u,
                       const std::vector<double>& v) {
  double f = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) f += tau[k] - eps[k] - u + v[k];
  return f;
}

double worst_relative_violation(const BeamformingSolution& sol, const ChannelRealization& ch,
                                const SystemConfig& cfg, bool sensing_security) {
  double worst = 0.0;
  if (sensing_security)
    for (int k = 0; k < ch.k_users(); ++k)
      worst = std::max(worst, scnr_sense_eve(k, sol, ch, cfg) / cfg.gamma_se - 1.0);
  worst = std::max(worst, 1.0 - scnr_bs(sol, ch, cfg) / cfg.gamma_s);
  worst = std::max(worst, total_power(sol) / cfg.p_max - 1.0);
  return worst;
}


// Sensing security, sensing performance and power rows shared by the SCA
// subproblem and the feasibility probe. The two SCNR rows are tightened by
// `margin`, which the probe maximizes.
void add_service_constraints(conic::ConeProgram& prog, const std::vector<HermitianBlock>& Q,
                             const std::optional<HermitianBlock>& S, const ChannelRealization& ch,
                             const SystemConfig& cfg, const RunOptions& options, double unit, const LinExpr& margin) {
  const int K = ch.k_users();
  const double m1 = 1.0 / cfg.sigma2_user;
  const double m3 = 1.0 / cfg.sigma2_bs;
  const Eigen::RowVectorXcd hce = ch.h_ce.adjoint();
  const double hce_norm2 = ch.h_ce.squaredNorm();

  auto q_form = [&](int i, const Eigen::RowVectorXcd& x) { return Q[static_cast<std::size_t>(i)].quad_form(x) * unit; };
  auto s_form = [&](const Eigen::RowVectorXcd& x) -> LinExpr {
    if (options.fixed_S) return LinExpr(quad_form(x, *options.fixed_S));
    return S->quad_form(x) * unit;
  };

  // Sensing security: the echo SCNR at every CU stays below gamma_se.
  // Divided through by gamma_se.
  if (options.sensing_security) {
    for (int k = 0; k < K; ++k) {
      const auto& x = ch.h_se[static_cast<std::size_t>(k)];
      const LinExpr echo = s_form(x) + q_form(k, x);
      const LinExpr clutter = sum_over(K, k, [&](int i) { return q_form(i, x); });
      prog.add_less_equal(echo * (m1 / cfg.gamma_se) - clutter * m1 + margin, LinExpr(1.0));
    }
  }

  // Sensing performance: Tr(H S H^H) = |h_ce|^2 h_ce^H S h_ce for rank-one H.
  {
    const LinExpr echo = s_form(hce) * hce_norm2;
    const LinExpr clutter = sum_over(K, -1, [&](int i) { return q_form(i, hce) * hce_norm2; });
    prog.add_greater_equal(echo * (m3 / cfg.gamma_s) - clutter * m3, LinExpr(1.0) + margin);
  }

  // Power budget, normalized by P.
  {
    LinExpr used = sum_over(K, -1, [&](int i) { return Q[static_cast<std::size_t>(i)].trace(); });
    double budget = 1.0;
    if (options.fixed_S)
      budget -= options.fixed_S->trace().real() / unit;
    else
      used += S->trace();
    prog.add_less_equal(used, LinExpr(budget));
  }
}
}  // namespace

ScaState sca_state_at(const std::vector<Eigen::MatrixXcd>& Q, const Eigen::MatrixXcd& S,
                      const ChannelRealization& ch, const SystemConfig& cfg) {
  const int K = ch.k_users();
  const double m1 = 1.0 / cfg.sigma2_user;
  const double m2 = 1.0 / cfg.sigma2_target;
  const Eigen::RowVectorXcd hce = ch.h_ce.adjoint();

  double eve_all = quad_form(hce, S);
  for (const auto& q : Q) eve_all += quad_form(hce, q);

  ScaState st;
  st.eps.resize(static_cast<std::size_t>(K));
  std::vector<double> tau(st.eps.size()), v(st.eps.size());
  for (int k = 0; k < K; ++k) {
    const auto& h = ch.h_eff[static_cast<std::size_t>(k)];
    double interference = quad_form(h, S);
    double eve_others = quad_form(hce, S);
    for (int i = 0; i < K; ++i) {
      if (i == k) continue;
      interference += quad_form(h, Q[static_cast<std::size_t>(i)]);
      eve_others += quad_form(hce, Q[static_cast<std::size_t>(i)]);
    }
    const double signal = quad_form(h, Q[static_cast<std::size_t>(k)]);
    tau[static_cast<std::size_t>(k)] = std::log1p(m1 * (interference + signal));
    st.eps[static_cast<std::size_t>(k)] = std::log1p(m1 * interference);
    v[static_cast<std::size_t>(k)] = std::log1p(m2 * eve_others);
  }
  st.u = std::log1p(m2 * eve_all);
  st.f = surrogate_value(tau, st.eps, st.u, v);
  st.tau = std::move(tau);
  st.v = std::move(v);
  return st;
}

void heuristic_start(const ChannelRealization& ch, const SystemConfig& cfg, double rho,
                     std::vector<Eigen::MatrixXcd>& Q, Eigen::MatrixXcd& S) {
  const int n = ch.n_t();
  const int K = ch.k_users();
  Eigen::MatrixXcd H(K, n);
  for (int k = 0; k < K; ++k) H.row(k) = ch.h_eff[static_cast<std::size_t>(k)];
  // Regularized zero-forcing with the MMSE loading K sigma^2 / P.
  const double alpha = K * cfg.sigma2_user / cfg.p_max;
  const Eigen::MatrixXcd gram = H.adjoint() * H + alpha * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::LDLT<Eigen::MatrixXcd> solver(gram);

  auto rank_one = [](const Eigen::VectorXcd& d, double power) -> Eigen::MatrixXcd {
    const double norm2 = d.squaredNorm();
    if (!(norm2 > 0.0)) return Eigen::MatrixXcd::Zero(d.size(), d.size());
    return (power / norm2) * (d * d.adjoint());
  };
  S = rank_one(solver.solve(steering_vector(cfg.theta_t, n)), rho * cfg.p_max);
  Q.clear();
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXcd d = solver.solve(Eigen::VectorXcd(H.row(k).adjoint()));
    Q.push_back(rank_one(d, (1.0 - rho) * cfg.p_max / K));
  }
}

ScaState init_sca(const ChannelRealization& ch, const SystemConfig& cfg) {
  std::vector<Eigen::MatrixXcd> Q;
  Eigen::MatrixXcd S;
  heuristic_start(ch, cfg, cfg.init_rho, Q, S);
  return sca_state_at(Q, S, ch, cfg);
}

Subproblem build_subproblem(const ScaState& state, const ChannelRealization& ch, const SystemConfig& cfg,
                            const RunOptions& options) {
  const int n = ch.n_t();
  const int K = ch.k_users();
  if (n != cfg.n_t || K != cfg.k_users || static_cast<int>(state.eps.size()) != K)
    throw std::invalid_argument("build_subproblem: dimension mismatch between state, channels and config");
  if (options.fixed_S && (options.fixed_S->rows() != n || options.fixed_S->cols() != n))
    throw std::invalid_argument("build_subproblem: fixed sensing covariance has the wrong size");

  const double m1 = 1.0 / cfg.sigma2_user;
  const double m2 = 1.0 / cfg.sigma2_target;
  const double unit = cfg.p_max;
  const Eigen::RowVectorXcd hce = ch.h_ce.adjoint();

  Subproblem sp;
  sp.power_unit = unit;
  auto& prog = sp.program;
  for (int k = 0; k < K; ++k) sp.Q.push_back(prog.add_hermitian("Q" + std::to_string(k + 1), n));
  if (!options.fixed_S) sp.S = prog.add_hermitian("S", n);
  for (int k = 0; k < K; ++k) {
    const std::string idx = std::to_string(k + 1);
    sp.tau.push_back(prog.add_scalar("tau" + idx));
    sp.eps.push_back(prog.add_scalar("eps" + idx));
    sp.v.push_back(prog.add_scalar("v" + idx));
  }
  sp.u = prog.add_scalar("u");

  // x A x^H in watts for A = Q_i or S.
  auto q_form = [&](int i, const Eigen::RowVectorXcd& x) { return sp.Q[static_cast<std::size_t>(i)].quad_form(x) * unit; };
  auto s_form = [&](const Eigen::RowVectorXcd& x) -> LinExpr {
    if (options.fixed_S) return LinExpr(quad_form(x, *options.fixed_S));
    return sp.S->quad_form(x) * unit;
  };

  LinExpr objective;
  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    objective += LinExpr(sp.tau[ku]) - LinExpr(sp.eps[ku]) - LinExpr(sp.u) + LinExpr(sp.v[ku]);
  }
  prog.maximize(objective);

  add_service_constraints(prog, sp.Q, sp.S, ch, cfg, options, unit, LinExpr());

  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const auto& h = ch.h_eff[ku];
    const LinExpr interference = s_form(h) + sum_over(K, k, [&](int i) { return q_form(i, h); });
    const LinExpr eve_others = s_form(hce) + sum_over(K, k, [&](int i) { return q_form(i, hce); });

    // e^tau_k <= 1 + m1 (signal + interference)
    // e^v_k <= 1 + m2 (everything but user k, at the target)
    // Both are shifted by the previous iterate's level so the cone sees O(1)
    // numbers instead of e^10.
    const double c_tau = state.tau.empty() ? 0.0 : state.tau[ku];
    const double c_v = state.v.empty() ? 0.0 : state.v[ku];
    prog.exp_upper(LinExpr(sp.tau[ku]) - LinExpr(c_tau),
                   (LinExpr(1.0) + (interference + q_form(k, h)) * m1) * std::exp(-c_tau));
    prog.exp_upper(LinExpr(sp.v[ku]) - LinExpr(c_v), (LinExpr(1.0) + eve_others * m2) * std::exp(-c_v));

    // e^eps0 (1 + eps - eps0) >= 1 + m1 * interference, scaled by e^-eps0
    const double eps0 = state.eps[ku];
    prog.add_greater_equal(LinExpr(sp.eps[ku]) + LinExpr(1.0 - eps0),
                           (LinExpr(1.0) + interference * m1) * std::exp(-eps0));
  }
  {
    const LinExpr eve_all = s_form(hce) + sum_over(K, -1, [&](int i) { return q_form(i, hce); });
    prog.add_greater_equal(LinExpr(sp.u) + LinExpr(1.0 - state.u), (LinExpr(1.0) + eve_all * m2) * std::exp(-state.u));
  }
  return sp;
}

static void fill_beamformers(BeamformingSolution& sol, const SystemConfig& cfg) {
  sol.w.clear();
  sol.rank_ratio.clear();
  for (const auto& q : sol.Q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q);
    const Eigen::Index top = q.rows() - 1;  // eigenvalues ascending
    const double lambda = std::max(eig.eigenvalues()(top), 0.0);
    sol.w.push_back(std::sqrt(lambda) * eig.eigenvectors().col(top));
    sol.rank_ratio.push_back(rank_ratio(q, kIdlePower * cfg.p_max));
  }
}

BeamformingSolution extract_beamformers(BeamformingSolution sol, const SystemConfig& cfg) {
  fill_beamformers(sol, cfg);
  for (std::size_t k = 0; k < sol.rank_ratio.size(); ++k)
    if (sol.rank_ratio[k] < 1.0 - cfg.rank_tol) throw RankViolation(static_cast<int>(k) + 1, sol.rank_ratio[k]);
  return sol;
}

BeamformingSolution run_algorithm1(const ChannelRealization& ch, const SystemConfig& cfg, const RunOptions& options) {
  if (!scenario_feasible(ch, cfg, options))
    throw ScenarioInfeasible("constraint set is empty for this channel realization");
  ScaState state;
  if (options.fixed_S) {
    std::vector<Eigen::MatrixXcd> Q;
    Eigen::MatrixXcd unused;
    heuristic_start(ch, cfg, 0.0, Q, unused);
    const double share = std::max(cfg.p_max - options.fixed_S->trace().real(), 0.0) / cfg.p_max;
    for (auto& q : Q) q *= share;
    state = sca_state_at(Q, *options.fixed_S, ch, cfg);
  } else {
    state = init_sca(ch, cfg);
  }

  BeamformingSolution sol;
  conic::SolverOptions solver_opts;
  solver_opts.tolerance = cfg.solver_tol;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    // The cone centers only rescale rows, so a stalled solve is retried with
    // them moved; the feasible set and optimum are unchanged.
    Subproblem sp;
    conic::ConeSolution res;
    for (double shift : kCenterShifts) {
      ScaState centered = state;
      for (double& t : centered.tau) t += shift;
      for (double& x : centered.v) x += shift;
      sp = build_subproblem(centered, ch, cfg, options);
      res = conic::solve(sp.program, solver_opts);
      if (res.status != conic::SolveStatus::kNumericalFailure) break;
    }
    if (res.status != conic::SolveStatus::kOptimal)
      throw SolverFailure(std::string("subproblem ") + std::to_string(iter) + " ended with status " +
                              conic::to_string(res.status) + " (" + res.diagnostics.backend_status + ")",
                          sol.trace_log);

    const int K = ch.k_users();
    std::vector<double> tau(static_cast<std::size_t>(K)), eps(tau.size()), v(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k) {
      tau[k] = res.value(sp.tau[k]);
      eps[k] = res.value(sp.eps[k]);
      v[k] = res.value(sp.v[k]);
    }
    const double f = surrogate_value(tau, eps, res.value(sp.u), v);
    const double delta_f = std::abs((f - state.f) / std::max(std::abs(state.f), kDeltaFloor));

    sol.Q.clear();
    for (const auto& b : sp.Q) sol.Q.push_back(res.matrix(b) * sp.power_unit);
    sol.S = sp.S ? Eigen::MatrixXcd(res.matrix(*sp.S) * sp.power_unit) : *options.fixed_S;

    TraceRecord rec;
    rec.iter = iter;
    rec.f = f;
    rec.delta_f = delta_f;
    rec.max_rel_violation = worst_relative_violation(sol, ch, cfg, options.sensing_security);
    rec.min_rank_ratio = 1.0;
    for (const auto& q : sol.Q) rec.min_rank_ratio = std::min(rec.min_rank_ratio, rank_ratio(q, kIdlePower * cfg.p_max));
    rec.solver_iterations = res.diagnostics.iterations;
    sol.trace_log.push_back(rec);

    // Next expansion point: the exact levels at the new covariances. The
    // subproblem's own eps and u sit on the tangent line, which can be far
    // above the curve when the previous point was far away; expanding there
    // would let eps and u fall by at most one nat per iteration.
    const ScaState exact = sca_state_at(sol.Q, sol.S, ch, cfg);
    state.eps = exact.eps;
    state.tau = exact.tau;
    state.v = exact.v;
    state.u = exact.u;
    state.f = f;
    state.n = iter;
    sol.iterations_used = iter;
    sol.surrogate_objective = f;
    if (delta_f <= cfg.delta) {
      sol.converged = true;
      break;
    }
  }

  sol.secrecy_rate = secrecy_rate(sol, ch, cfg);
  if (options.check_rank) return extract_beamformers(std::move(sol), cfg);
  fill_beamformers(sol, cfg);
  return sol;
}

Eigen::MatrixXcd random_sensing_covariance(const SystemConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd G(cfg.n_t, cfg.n_t);
  for (int j = 0; j < cfg.n_t; ++j)
    for (int i = 0; i < cfg.n_t; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      G(i, j) = cdouble(re, im);
    }
  Eigen::MatrixXcd S = G * G.adjoint();
  S = 0.5 * (S + S.adjoint()).eval();
  const double tr = S.trace().real();
  if (tr > 0.0) S *= cfg.baseline_mu * cfg.p_max / tr;
  return S;
}

BeamformingSolution baseline_s_random(const ChannelRealization& ch, const SystemConfig& cfg, std::mt19937_64& rng,
                                      RunOptions options) {
  options.fixed_S = random_sensing_covariance(cfg, rng);
  return run_algorithm1(ch, cfg, options);
}

double feasibility_margin(const ChannelRealization& ch, const SystemConfig& cfg, const RunOptions& options) {
  validate(cfg);
  const int n = ch.n_t();
  if (n != cfg.n_t || ch.k_users() != cfg.k_users)
    throw std::invalid_argument("feasibility_margin: dimension mismatch between channels and config");
  conic::ConeProgram prog;
  std::vector<HermitianBlock> Q;
  std::optional<HermitianBlock> S;
  for (int k = 0; k < ch.k_users(); ++k) Q.push_back(prog.add_hermitian("Q" + std::to_string(k + 1), n));
  if (!options.fixed_S) S = prog.add_hermitian("S", n);
  const conic::Var t = prog.add_scalar("t");
  add_service_constraints(prog, Q, S, ch, cfg, options, cfg.p_max, LinExpr(t));
  prog.add_less_equal(LinExpr(t), LinExpr(1.0));
  prog.maximize(LinExpr(t));

  conic::SolverOptions solver_opts;
  solver_opts.tolerance = cfg.solver_tol;
  const auto res = conic::solve(prog, solver_opts);
  if (res.status == conic::SolveStatus::kInfeasible) return -std::numeric_limits<double>::infinity();
  if (res.status != conic::SolveStatus::kOptimal)
    throw SolverFailure("feasibility probe failed (" + res.diagnostics.backend_status + ")", {});
  return res.value(t);
}

bool scenario_feasible(const ChannelRealization& ch, const SystemConfig& cfg, const RunOptions& options) {
  return feasibility_margin(ch, cfg, options) > kFeasibilityMargin;
}

}  // namespace isac
