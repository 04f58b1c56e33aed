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

#include "isac/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace isac::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double others(const Eigen::RowVectorXcd& x, const BeamformingSolution& sol, int k) {
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(sol.Q.size()); ++i)
    if (i != k) acc += direct_quad(x, sol.Q[static_cast<std::size_t>(i)]);
  return acc;
}

// Re Tr(H A H^H), every product spelled out.
double direct_trace_sandwich(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& a) {
  const Eigen::Index n = h.rows();
  cdouble acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) acc += h(i, p) * a(p, q) * std::conj(h(i, q));
  return acc.real();
}

// log2(1 + x) without the cancellation of forming 1 + x for tiny x.
double bits(double x) { return std::log1p(x) / std::numbers::ln2; }

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

Eigen::MatrixXcd random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> rank_dist(1, n);
  const int r = rank_dist(rng);
  Eigen::MatrixXcd g(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = cdouble(normal(rng), normal(rng));
  Eigen::MatrixXcd a = g * g.adjoint();
  return 0.5 * (a + a.adjoint());
}

// Objective for the tiny search. Parameters:
//   t (total power share), s (split toward w), al, ph, rho, be, ps.
// S = (1 - s) t P (rho u u^H + (1 - rho) v v^H) with u = [cos be, sin be e^(j ps)]
// and v orthogonal to u, so rank one is the face rho = 1.
struct Tiny {
  const ChannelRealization& ch;
  const SystemConfig& cfg;
  Eigen::Matrix2cd H;
  Eigen::RowVector2cd h, hse, hce_h;
  long evaluated = 0;

  Tiny(const ChannelRealization& c, const SystemConfig& g) : ch(c), cfg(g) {
    H = ch.h_ce * ch.h_ce.adjoint();
    h = ch.h_eff[0];
    hse = ch.h_se[0];
    hce_h = ch.h_ce.adjoint();
  }

  void build(const std::array<double, 7>& p, Eigen::Vector2cd& w, Eigen::Matrix2cd& S) const {
    const double pw = p[0] * p[1] * cfg.p_max;
    const double ps = p[0] * (1.0 - p[1]) * cfg.p_max;
    w << std::cos(p[2]), std::sin(p[2]) * std::polar(1.0, p[3]);
    w *= std::sqrt(pw);
    Eigen::Vector2cd u, v;
    u << std::cos(p[5]), std::sin(p[5]) * std::polar(1.0, p[6]);
    v << -std::conj(u(1)), std::conj(u(0));
    S = ps * (p[4] * u * u.adjoint() + (1.0 - p[4]) * v * v.adjoint());
  }

  static double form(const Eigen::RowVector2cd& x, const Eigen::Matrix2cd& a) {
    cdouble acc = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) acc += x(i) * a(i, j) * std::conj(x(j));
    return acc.real();
  }
  static double gain(const Eigen::RowVector2cd& x, const Eigen::Vector2cd& w) { return std::norm(x(0) * w(0) + x(1) * w(1)); }

  // Secrecy rate in bits, or -inf outside the constraint set.
  double operator()(const std::array<double, 7>& p) {
    ++evaluated;
    Eigen::Vector2cd w;
    Eigen::Matrix2cd S;
    build(p, w, S);
    const Eigen::Matrix2cd Q = w * w.adjoint();
    const double scnr_se = (form(hse, S) + gain(hse, w)) / cfg.sigma2_user;
    if (scnr_se > cfg.gamma_se) return -std::numeric_limits<double>::infinity();
    const double scnr = direct_trace_sandwich(H, S) / (cfg.sigma2_bs + direct_trace_sandwich(H, Q));
    if (scnr < cfg.gamma_s) return -std::numeric_limits<double>::infinity();
    const double sinr_u = gain(h, w) / (cfg.sigma2_user + form(h, S));
    const double sinr_e = gain(hce_h, w) / (cfg.sigma2_target + form(hce_h, S));
    return std::max(std::log2(1.0 + sinr_u) - std::log2(1.0 + sinr_e), 0.0);
  }
};

void clamp_params(std::array<double, 7>& p) {
  for (int i : {0, 1, 4}) p[static_cast<std::size_t>(i)] = std::clamp(p[static_cast<std::size_t>(i)], 0.0, 1.0);
  p[2] = std::clamp(p[2], 0.0, std::numbers::pi / 2);
  p[5] = std::clamp(p[5], 0.0, std::numbers::pi / 2);
}

}  // namespace

double direct_quad(const Eigen::RowVectorXcd& x, const Eigen::MatrixXcd& a) {
  cdouble acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = 0; j < x.size(); ++j) acc += x(i) * a(i, j) * std::conj(x(j));
  return acc.real();
}

double direct_sinr_user(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const auto& h = ch.h_eff[static_cast<std::size_t>(k)];
  return direct_quad(h, sol.Q[static_cast<std::size_t>(k)]) /
         (cfg.sigma2_user + others(h, sol, k) + direct_quad(h, sol.S));
}

double direct_sinr_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const Eigen::RowVectorXcd x = ch.h_ce.adjoint();
  return direct_quad(x, sol.Q[static_cast<std::size_t>(k)]) /
         (cfg.sigma2_target + direct_quad(x, sol.S) + others(x, sol, k));
}

double direct_scnr_bs(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  const Eigen::Index n = ch.h_ce.size();
  Eigen::MatrixXcd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) H(i, j) = ch.h_ce(i) * std::conj(ch.h_ce(j));
  double clutter = 0.0;
  for (const auto& q : sol.Q) clutter += direct_trace_sandwich(H, q);
  return direct_trace_sandwich(H, sol.S) / (cfg.sigma2_bs + clutter);
}

double direct_scnr_sense_eve(int k, const BeamformingSolution& sol, const ChannelRealization& ch,
                             const SystemConfig& cfg) {
  const auto ku = static_cast<std::size_t>(k);
  // Rebuild h_se,k from its factors instead of trusting the stored product.
  Eigen::RowVectorXcd x(ch.h_ce.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = ch.h_e[ku] * std::conj(ch.h_ce(i));
  return (direct_quad(x, sol.S) + direct_quad(x, sol.Q[ku])) / (cfg.sigma2_user + others(x, sol, k));
}

double direct_secrecy_rate(const BeamformingSolution& sol, const ChannelRealization& ch, const SystemConfig& cfg) {
  double sr = 0.0;
  for (int k = 0; k < static_cast<int>(sol.Q.size()); ++k) {
    const double ru = bits(direct_sinr_user(k, sol, ch, cfg));
    const double re = bits(direct_sinr_eve(k, sol, ch, cfg));
    if (ru > re) sr += ru - re;
  }
  return sr;
}

double eigen_total_power(const BeamformingSolution& sol) {
  double p = 0.0;
  auto add = [&](const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a, Eigen::EigenvaluesOnly);
    p += eig.eigenvalues().sum();
  };
  for (const auto& q : sol.Q) add(q);
  add(sol.S);
  return p;
}

MetricInstance random_metric_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(1, 6), k_dist(1, 4);
  std::uniform_real_distribution<double> noise(0.1, 2.0), unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  MetricInstance inst;
  auto& cfg = inst.cfg;
  cfg.n_t = n_dist(rng);
  cfg.k_users = k_dist(rng);
  cfg.sigma2_user = noise(rng);
  cfg.sigma2_target = noise(rng);
  cfg.sigma2_bs = noise(rng);

  auto cvec = [&](int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = cdouble(normal(rng), normal(rng));
    return v;
  };
  std::vector<Eigen::VectorXcd> g;
  std::vector<cdouble> h_e;
  for (int k = 0; k < cfg.k_users; ++k) {
    g.push_back(cvec(cfg.n_t));
    h_e.push_back(cdouble(normal(rng), normal(rng)));
  }
  inst.ch = assemble_channels(std::move(g), cvec(cfg.n_t), std::move(h_e));
  for (int k = 0; k < cfg.k_users; ++k) inst.sol.Q.push_back(random_psd(cfg.n_t, rng));
  inst.sol.S = unit(rng) < 0.1 ? Eigen::MatrixXcd::Zero(cfg.n_t, cfg.n_t) : random_psd(cfg.n_t, rng);
  return inst;
}

MetricCheck compare_metrics(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MetricCheck out;
  auto note = [&](double err, const char* name) {
    if (err > out.worst_rel) {
      out.worst_rel = err;
      out.worst_metric = name;
    }
  };
  for (int n = 0; n < instances; ++n) {
    const auto inst = random_metric_instance(rng);
    const auto& [cfg, ch, sol] = inst;
    for (int k = 0; k < cfg.k_users; ++k) {
      const double su = direct_sinr_user(k, sol, ch, cfg);
      const double se = direct_sinr_eve(k, sol, ch, cfg);
      note(rel_err(sinr_user(k, sol, ch, cfg), su), "sinr_user");
      note(rel_err(sinr_eve(k, sol, ch, cfg), se), "sinr_eve");
      note(rel_err(rate_user(k, sol, ch, cfg), bits(su)), "rate_user");
      note(rel_err(rate_eve(k, sol, ch, cfg), bits(se)), "rate_eve");
      note(rel_err(scnr_sense_eve(k, sol, ch, cfg), direct_scnr_sense_eve(k, sol, ch, cfg)), "scnr_sense_eve");
    }
    note(rel_err(scnr_bs(sol, ch, cfg), direct_scnr_bs(sol, ch, cfg)), "scnr_bs");
    note(rel_err(secrecy_rate(sol, ch, cfg), direct_secrecy_rate(sol, ch, cfg)), "secrecy_rate");
    note(rel_err(total_power(sol), eigen_total_power(sol)), "total_power");
    ++out.instances;
  }
  return out;
}

SurrogateCheck check_surrogate(long pairs, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> point(-20.0, 20.0), gap(-5.0, 5.0), unit(0.0, 1.0);
  SurrogateCheck out;
  for (long i = 0; i < pairs; ++i) {
    const double x0 = point(rng);
    const bool same = unit(rng) < 0.1;
    const double x = same ? x0 : x0 + gap(rng);
    const double lhs = std::exp(x);
    const double rhs = std::exp(x0) * (1.0 + x - x0);
    const double scale = std::exp(std::max(x, x0));
    const double slack = (lhs - rhs) / scale;
    ++out.pairs;
    if (slack < -tol) ++out.below;
    if (same) {
      ++out.x0_pairs;
      if (std::abs(slack) <= tol) ++out.equal_at_x0;
    } else if (std::abs(x - x0) > 1e-6 && std::abs(slack) <= tol) {
      ++out.false_equal;
    }
  }
  return out;
}

BruteForceResult brute_force_tiny(const ChannelRealization& ch, const SystemConfig& cfg, const BruteForceGrid& grid) {
  if (ch.n_t() != 2 || ch.k_users() != 1)
    throw std::invalid_argument("brute_force_tiny: needs N_t = 2 and K = 1");
  Tiny f(ch, cfg);
  using Params = std::array<double, 7>;
  struct Entry {
    double value;
    Params p;
  };
  std::vector<Entry> best;  // kept sorted, descending
  auto offer = [&](double value, const Params& p) {
    if (!std::isfinite(value)) return;
    if (static_cast<int>(best.size()) == grid.refine_starts && value <= best.back().value) return;
    auto it = std::upper_bound(best.begin(), best.end(), value, [](double v, const Entry& e) { return v > e.value; });
    best.insert(it, {value, p});
    if (static_cast<int>(best.size()) > grid.refine_starts) best.pop_back();
  };

  auto lin = [](int i, int n, double hi) { return n <= 1 ? 0.0 : hi * i / (n - 1); };
  for (int it = 1; it <= grid.share; ++it) {
    const double t = static_cast<double>(it) / grid.share;
    for (int is = 1; is <= grid.share; ++is) {
      const double s = static_cast<double>(is) / grid.share;
      for (int ia = 0; ia < grid.alpha; ++ia)
        for (int ip = 0; ip < grid.phase; ++ip)
          for (int ic = 0; ic < grid.beta; ++ic)
            for (int ir = 0; ir < grid.rho; ++ir)
              for (int iq = 0; iq < grid.psi; ++iq) {
                const Params p{t, s, lin(ia, grid.alpha, std::numbers::pi / 2), kTwoPi * ip / grid.phase,
                               lin(ir, grid.rho, 1.0), lin(ic, grid.beta, std::numbers::pi / 2),
                               kTwoPi * iq / grid.psi};
                offer(f(p), p);
              }
    }
  }

  BruteForceResult out;
  if (best.empty()) {
    out.evaluated = f.evaluated;
    return out;
  }

  const Params step0{1.0 / grid.share, 1.0 / grid.share, std::numbers::pi / 2 / std::max(grid.alpha - 1, 1),
                     kTwoPi / grid.phase, 1.0 / std::max(grid.rho - 1, 1),
                     std::numbers::pi / 2 / std::max(grid.beta - 1, 1),
                     kTwoPi / grid.psi};
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Entry top = best.front();
  for (const Entry& start : best) {
    Entry cur = start;
    double scale = 1.0;
    for (int round = 0; round < 4000 && scale > 1e-9; ++round) {
      bool moved = false;
      auto attempt = [&](const Params& dir) {
        Params q = cur.p;
        for (std::size_t d = 0; d < q.size(); ++d) q[d] += scale * step0[d] * dir[d];
        clamp_params(q);
        const double v = f(q);
        if (v > cur.value) {
          cur = {v, q};
          moved = true;
        }
      };
      for (std::size_t d = 0; d < 7; ++d)
        for (double sign : {1.0, -1.0}) {
          Params dir{};
          dir[d] = sign;
          attempt(dir);
        }
      for (int n = 0; n < 16; ++n) {
        Params dir;
        for (double& x : dir) x = normal(rng);
        attempt(dir);
      }
      if (!moved) scale *= 0.5;
    }
    if (cur.value > top.value) top = cur;
  }

  out.feasible = true;
  out.secrecy_rate = top.value;
  f.build(top.p, out.w, out.S);
  out.evaluated = f.evaluated;
  return out;
}

}  // namespace isac::oracle
