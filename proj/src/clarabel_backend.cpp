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

// Adapter from ConeProgram to the Clarabel C ABI. Each call builds a fresh
// solver instance, so concurrent solves on distinct programs are safe.

#include <clarabel_capi.h>

#include "isac/conic.hpp"

namespace isac::conic {

namespace {

int32_t cone_code(ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      return CLARABEL_CONE_ZERO;
    case ConeKind::kNonnegative:
      return CLARABEL_CONE_NONNEG;
    case ConeKind::kExponential:
      return CLARABEL_CONE_EXP;
    case ConeKind::kPsdTriangle:
      return CLARABEL_CONE_PSD_TRIANGLE;
  }
  return -1;
}

const char* backend_status_name(int32_t code) {
  switch (code) {
    case CLARABEL_STATUS_SOLVED:
      return "Solved";
    case CLARABEL_STATUS_PRIMAL_INFEASIBLE:
      return "PrimalInfeasible";
    case CLARABEL_STATUS_DUAL_INFEASIBLE:
      return "DualInfeasible";
    case CLARABEL_STATUS_ALMOST_SOLVED:
      return "AlmostSolved";
    case CLARABEL_STATUS_ALMOST_PRIMAL_INFEASIBLE:
      return "AlmostPrimalInfeasible";
    case CLARABEL_STATUS_ALMOST_DUAL_INFEASIBLE:
      return "AlmostDualInfeasible";
    case CLARABEL_STATUS_MAX_ITERATIONS:
      return "MaxIterations";
    case CLARABEL_STATUS_MAX_TIME:
      return "MaxTime";
    case CLARABEL_STATUS_NUMERICAL_ERROR:
      return "NumericalError";
    case CLARABEL_STATUS_INSUFFICIENT_PROGRESS:
      return "InsufficientProgress";
    case CLARABEL_STATUS_SETUP_ERROR:
      return "SetupError";
    default:
      return "Unsolved";
  }
}

SolveStatus map_status(int32_t code) {
  switch (code) {
    case CLARABEL_STATUS_SOLVED:
      return SolveStatus::kOptimal;
    case CLARABEL_STATUS_PRIMAL_INFEASIBLE:
    case CLARABEL_STATUS_ALMOST_PRIMAL_INFEASIBLE:
      return SolveStatus::kInfeasible;
    case CLARABEL_STATUS_DUAL_INFEASIBLE:
    case CLARABEL_STATUS_ALMOST_DUAL_INFEASIBLE:
      return SolveStatus::kUnbounded;
    default:
      // AlmostSolved included: a reduced-accuracy point is not certified.
      return SolveStatus::kNumericalFailure;
  }
}

}  // namespace

ConeSolution solve(const ConeProgram& program, const SolverOptions& options) {
  const std::size_t n = static_cast<std::size_t>(program.num_variables());
  const std::size_t m = static_cast<std::size_t>(program.num_rows());

  // minimize -objective
  std::vector<double> q(n, 0.0);
  for (const auto& [i, c] : program.objective().terms()) q[static_cast<std::size_t>(i)] -= c;

  // Row a'x + c in K  <=>  (-a)'x + s = c, s in K.
  std::vector<std::size_t> rows, cols;
  std::vector<double> vals;
  std::vector<double> b;
  std::vector<int32_t> types;
  std::vector<std::size_t> dims;
  b.reserve(m);
  std::size_t row = 0;
  for (const auto& cone : program.cones()) {
    types.push_back(cone_code(cone.kind));
    dims.push_back(cone.kind == ConeKind::kPsdTriangle ? static_cast<std::size_t>(cone.psd_dim)
                                                       : cone.rows.size());
    for (const auto& expr : cone.rows) {
      for (const auto& [i, c] : expr.terms()) {
        rows.push_back(row);
        cols.push_back(static_cast<std::size_t>(i));
        vals.push_back(-c);
      }
      b.push_back(expr.constant());
      ++row;
    }
  }

  ClarabelCSettings settings{};
  settings.tol_gap_abs = options.tolerance;
  settings.tol_gap_rel = options.tolerance;
  settings.tol_feas = options.tolerance;
  settings.tol_infeas_abs = options.tolerance;
  settings.tol_infeas_rel = options.tolerance;
  settings.max_iter = static_cast<uint32_t>(options.max_iterations);
  settings.verbose = options.verbose ? 1 : 0;

  ConeSolution out;
  out.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  ClarabelCInfo info{};
  int32_t code = CLARABEL_STATUS_UNSOLVED;
  double reg = options.static_regularization;
  for (int attempt = 0; attempt <= options.regularization_retries; ++attempt, reg *= 10.0) {
    settings.static_reg = reg;
    code = clarabel_capi_solve(n, m, q.data(), vals.size(), rows.data(), cols.data(), vals.data(), b.data(),
                               types.size(), types.data(), dims.data(), &settings, out.x.data(), nullptr, &info);
    out.diagnostics.attempts = attempt + 1;
    if (map_status(code) != SolveStatus::kNumericalFailure || code == CLARABEL_STATUS_SETUP_ERROR) break;
  }
  out.status = map_status(code);
  out.diagnostics.iterations = static_cast<int>(info.iterations);
  out.diagnostics.primal_residual = info.r_prim;
  out.diagnostics.dual_residual = info.r_dual;
  out.diagnostics.primal_objective = -info.obj_val + program.objective().constant();
  out.diagnostics.dual_objective = -info.obj_val_dual + program.objective().constant();
  out.diagnostics.solve_time = info.solve_time;
  out.diagnostics.backend_status = backend_status_name(code);
  out.objective = program.objective().evaluate(out.x);
  return out;
}

}  // namespace isac::conic
