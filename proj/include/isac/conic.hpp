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

// Solver-agnostic conic program over real scalar variables.
//
// Complex Hermitian PSD variables are handled through the real embedding
//
//     A = X + jY  ->  [ X  -Y ]
//                     [ Y   X ]
//
// where X is stored once as its upper triangle and Y (antisymmetric) as its
// strict upper triangle, so the embedded block is symmetric by construction
// and its two diagonal sub-blocks share the same variables. A is PSD iff the
// embedding is PSD.
//
// Exponential cone orientation: (x, y, z) with y * exp(x / y) <= z, y > 0.

#ifndef ISAC_CONIC_HPP_
#define ISAC_CONIC_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace isac::conic {

/// Index of a scalar decision variable.
struct Var {
  int index = -1;
};

/// Sparse affine expression sum_i coef_i * x_i + constant.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT(google-explicit-constructor)
  LinExpr(Var v, double coef = 1.0) { add(v.index, coef); }  // NOLINT(google-explicit-constructor)

  LinExpr& add(int index, double coef);
  LinExpr& operator+=(const LinExpr& rhs);
  LinExpr& operator-=(const LinExpr& rhs);
  LinExpr& operator*=(double s);

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
  friend LinExpr operator-(LinExpr a) { return a *= -1.0; }

  double constant() const { return constant_; }
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  double evaluate(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::pair<int, double>> terms_;
  double constant_ = 0.0;
};

/// Handle to an n x n complex Hermitian matrix variable (n^2 real scalars).
class HermitianBlock {
 public:
  HermitianBlock() = default;
  HermitianBlock(std::string name, int n, int offset) : name_(std::move(name)), n_(n), offset_(offset) {}

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  int offset() const { return offset_; }
  int num_scalars() const { return n_ * n_; }

  /// Variable index of Re A(i, j) (symmetric in i, j).
  int re_index(int i, int j) const;
  /// Variable index of Im A(i, j) for i < j; Im A(j, i) = -Im A(i, j).
  int im_index(int i, int j) const;

  /// Re Tr(C A) for a fixed Hermitian C.
  LinExpr trace_with(const Eigen::MatrixXcd& c) const;
  /// x A x^H for a fixed row vector x.
  LinExpr quad_form(const Eigen::RowVectorXcd& x) const;
  LinExpr trace() const;

  /// Embedded 2n x 2n entry M(r, c) as an expression.
  LinExpr embedded(int r, int c) const;

  /// Read the matrix out of a primal vector.
  Eigen::MatrixXcd read(const Eigen::VectorXd& x) const;
  /// Inverse of `read`: write a Hermitian matrix into a primal vector.
  void write(const Eigen::MatrixXcd& a, Eigen::VectorXd& x) const;

 private:
  std::string name_;
  int n_ = 0;
  int offset_ = 0;
};

enum class ConeKind { kZero, kNonnegative, kExponential, kPsdTriangle };

/// A group of affine rows that must jointly lie in one cone.
struct ConeBlock {
  ConeKind kind = ConeKind::kNonnegative;
  int psd_dim = 0;  // side length for kPsdTriangle
  std::vector<LinExpr> rows;
};

class NonConvexConstraint : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConeProgram {
 public:
  Var add_scalar(const std::string& name);
  /// Registers a Hermitian PSD matrix variable. n = 1 degenerates to one
  /// nonnegative scalar. Throws std::invalid_argument on a duplicate name.
  HermitianBlock add_hermitian(const std::string& name, int n);

  /// Objective (maximized).
  void maximize(LinExpr objective) { objective_ = std::move(objective); }

  void add_equal(const LinExpr& lhs, const LinExpr& rhs);
  void add_less_equal(const LinExpr& lhs, const LinExpr& rhs);
  void add_greater_equal(const LinExpr& lhs, const LinExpr& rhs) { add_less_equal(rhs, lhs); }

  /// e^t <= rhs, encoded as (t, 1, rhs) in the exponential cone. `t` may be
  /// affine, which lets callers center the cone near the expected operating
  /// point (e^(t - c) <= e^-c rhs).
  void exp_upper(const LinExpr& t, const LinExpr& rhs);
  /// e^t >= rhs describes a non-convex set; always throws NonConvexConstraint.
  [[noreturn]] void exp_lower(const LinExpr& t, const LinExpr& rhs);

  int num_variables() const { return static_cast<int>(names_.size()); }
  int num_rows() const;
  int count(ConeKind kind) const;
  const std::vector<ConeBlock>& cones() const { return cones_; }
  const LinExpr& objective() const { return objective_; }
  const std::vector<HermitianBlock>& hermitian_blocks() const { return blocks_; }
  const std::string& variable_name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  Var scalar(const std::string& name) const;
  const HermitianBlock& block(const std::string& name) const;

  /// Largest cone violation at x, for debugging and tests: max over linear
  /// rows of the signed violation, exponential cones of e^t - rhs, and PSD
  /// blocks of -lambda_min.
  double max_violation(const Eigen::VectorXd& x) const;

  /// Text dump in the style of the conic benchmark format (for offline
  /// inspection only; nothing reads it back).
  void write_text(std::ostream& os) const;

 private:
  void register_name(const std::string& name);

  std::vector<std::string> names_;
  std::map<std::string, int> scalars_;
  std::vector<HermitianBlock> blocks_;
  std::vector<ConeBlock> cones_;
  LinExpr objective_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* to_string(SolveStatus status);

struct SolverDiagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double solve_time = 0.0;
  int attempts = 1;
  std::string backend_status;
};

struct ConeSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd x;
  double objective = 0.0;  // of the maximization
  SolverDiagnostics diagnostics;

  double value(Var v) const { return x(v.index); }
  Eigen::MatrixXcd matrix(const HermitianBlock& b) const { return b.read(x); }
};

struct SolverOptions {
  double tolerance = 1e-8;
  // Static KKT regularization. The backend default (1e-8) stalls a few
  // iterations short of 1e-8 accuracy on the beamforming subproblems; 1e-7
  // only perturbs the linear solves, which iterative refinement corrects.
  double static_regularization = 1e-7;
  // A solve that stops without a certificate is repeated this many times,
  // with the regularization raised tenfold each time. The final status is
  // still the backend's own.
  int regularization_retries = 2;
  int max_iterations = 200;
  bool verbose = false;
};

/// Delegates to the interior-point backend. Only kOptimal carries a usable
/// primal point; every other status leaves `x` unspecified.
ConeSolution solve(const ConeProgram& program, const SolverOptions& options = {});

}  // namespace isac::conic

#endif  // ISAC_CONIC_HPP_
