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

#include "isac/conic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

namespace isac::conic {

// ---- LinExpr ---------------------------------------------------------------

LinExpr& LinExpr::add(int index, double coef) {
  if (coef != 0.0) terms_.emplace_back(index, coef);
  return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  constant_ += rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& rhs) {
  terms_.reserve(terms_.size() + rhs.terms_.size());
  for (const auto& [i, c] : rhs.terms_) terms_.emplace_back(i, -c);
  constant_ -= rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms_) t.second *= s;
  constant_ *= s;
  return *this;
}

double LinExpr::evaluate(const Eigen::VectorXd& x) const {
  double acc = constant_;
  for (const auto& [i, c] : terms_) acc += c * x(i);
  return acc;
}

// ---- HermitianBlock --------------------------------------------------------

int HermitianBlock::re_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  return offset_ + j * (j + 1) / 2 + i;
}

int HermitianBlock::im_index(int i, int j) const {
  if (i >= j) throw std::out_of_range("im_index requires i < j");
  return offset_ + n_ * (n_ + 1) / 2 + j * (j - 1) / 2 + i;
}

LinExpr HermitianBlock::trace_with(const Eigen::MatrixXcd& c) const {
  if (c.rows() != n_ || c.cols() != n_) throw std::invalid_argument("trace_with: dimension mismatch");
  LinExpr e;
  for (int j = 0; j < n_; ++j) {
    e.add(re_index(j, j), c(j, j).real());
    for (int i = 0; i < j; ++i) {
      // Re[C(j,i) A(i,j) + C(i,j) A(j,i)] with A(j,i) = conj A(i,j)
      e.add(re_index(i, j), c(j, i).real() + c(i, j).real());
      e.add(im_index(i, j), c(i, j).imag() - c(j, i).imag());
    }
  }
  return e;
}

LinExpr HermitianBlock::quad_form(const Eigen::RowVectorXcd& x) const {
  if (x.size() != n_) throw std::invalid_argument("quad_form: dimension mismatch");
  return trace_with(x.adjoint() * x);
}

LinExpr HermitianBlock::trace() const {
  LinExpr e;
  for (int j = 0; j < n_; ++j) e.add(re_index(j, j), 1.0);
  return e;
}

LinExpr HermitianBlock::embedded(int r, int c) const {
  auto im = [&](int i, int j) {
    if (i == j) return LinExpr{};
    return i < j ? LinExpr(Var{im_index(i, j)}) : LinExpr(Var{im_index(j, i)}, -1.0);
  };
  const bool top = r < n_;
  const bool left = c < n_;
  if (top && left) return LinExpr(Var{re_index(r, c)});
  if (!top && !left) return LinExpr(Var{re_index(r - n_, c - n_)});
  if (top) return -im(r, c - n_);
  return im(r - n_, c);
}

Eigen::MatrixXcd HermitianBlock::read(const Eigen::VectorXd& x) const {
  Eigen::MatrixXcd a(n_, n_);
  for (int j = 0; j < n_; ++j) {
    a(j, j) = x(re_index(j, j));
    for (int i = 0; i < j; ++i) {
      const std::complex<double> v(x(re_index(i, j)), x(im_index(i, j)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

void HermitianBlock::write(const Eigen::MatrixXcd& a, Eigen::VectorXd& x) const {
  for (int j = 0; j < n_; ++j) {
    x(re_index(j, j)) = a(j, j).real();
    for (int i = 0; i < j; ++i) {
      x(re_index(i, j)) = 0.5 * (a(i, j).real() + a(j, i).real());
      x(im_index(i, j)) = 0.5 * (a(i, j).imag() - a(j, i).imag());
    }
  }
}

// ---- ConeProgram -----------------------------------------------------------

void ConeProgram::register_name(const std::string& name) {
  if (scalars_.contains(name) ||
      std::any_of(blocks_.begin(), blocks_.end(), [&](const auto& b) { return b.name() == name; }))
    throw std::invalid_argument("duplicate variable name: " + name);
}

Var ConeProgram::add_scalar(const std::string& name) {
  register_name(name);
  const int index = num_variables();
  names_.push_back(name);
  scalars_.emplace(name, index);
  return Var{index};
}

HermitianBlock ConeProgram::add_hermitian(const std::string& name, int n) {
  if (n < 1) throw std::invalid_argument("add_hermitian: dimension must be positive");
  register_name(name);
  HermitianBlock block(name, n, num_variables());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) names_.push_back(name + ".re(" + std::to_string(i) + "," + std::to_string(j) + ")");
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) names_.push_back(name + ".im(" + std::to_string(i) + "," + std::to_string(j) + ")");

  ConeBlock cone;
  if (n == 1) {
    cone.kind = ConeKind::kNonnegative;
    cone.rows.emplace_back(Var{block.re_index(0, 0)});
  } else {
    cone.kind = ConeKind::kPsdTriangle;
    cone.psd_dim = 2 * n;
    for (int c = 0; c < 2 * n; ++c)
      for (int r = 0; r <= c; ++r) cone.rows.push_back(block.embedded(r, c) * (r == c ? 1.0 : std::numbers::sqrt2));
  }
  cones_.push_back(std::move(cone));
  blocks_.push_back(block);
  return block;
}

void ConeProgram::add_equal(const LinExpr& lhs, const LinExpr& rhs) {
  cones_.push_back(ConeBlock{ConeKind::kZero, 0, {lhs - rhs}});
}

void ConeProgram::add_less_equal(const LinExpr& lhs, const LinExpr& rhs) {
  cones_.push_back(ConeBlock{ConeKind::kNonnegative, 0, {rhs - lhs}});
}

void ConeProgram::exp_upper(const LinExpr& t, const LinExpr& rhs) {
  cones_.push_back(ConeBlock{ConeKind::kExponential, 0, {t, LinExpr(1.0), rhs}});
}

void ConeProgram::exp_lower(const LinExpr&, const LinExpr&) {
  throw NonConvexConstraint("exp_lower: e^t >= affine is non-convex; linearize it first");
}

int ConeProgram::num_rows() const {
  int rows = 0;
  for (const auto& c : cones_) rows += static_cast<int>(c.rows.size());
  return rows;
}

int ConeProgram::count(ConeKind kind) const {
  return static_cast<int>(std::count_if(cones_.begin(), cones_.end(), [&](const auto& c) { return c.kind == kind; }));
}

Var ConeProgram::scalar(const std::string& name) const {
  const auto it = scalars_.find(name);
  if (it == scalars_.end()) throw std::out_of_range("no scalar named " + name);
  return Var{it->second};
}

const HermitianBlock& ConeProgram::block(const std::string& name) const {
  for (const auto& b : blocks_)
    if (b.name() == name) return b;
  throw std::out_of_range("no Hermitian block named " + name);
}

double ConeProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& cone : cones_) {
    switch (cone.kind) {
      case ConeKind::kZero:
        for (const auto& r : cone.rows) worst = std::max(worst, std::abs(r.evaluate(x)));
        break;
      case ConeKind::kNonnegative:
        for (const auto& r : cone.rows) worst = std::max(worst, -r.evaluate(x));
        break;
      case ConeKind::kExponential: {
        const double t = cone.rows[0].evaluate(x);
        const double y = cone.rows[1].evaluate(x);
        const double z = cone.rows[2].evaluate(x);
        worst = std::max(worst, y > 0.0 ? y * std::exp(t / y) - z : -z);
        break;
      }
      case ConeKind::kPsdTriangle: {
        const int d = cone.psd_dim;
        Eigen::MatrixXd m(d, d);
        int idx = 0;
        for (int c = 0; c < d; ++c)
          for (int r = 0; r <= c; ++r, ++idx) {
            const double v = cone.rows[static_cast<std::size_t>(idx)].evaluate(x);
            m(r, c) = m(c, r) = (r == c) ? v : v / std::numbers::sqrt2;
          }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
        worst = std::max(worst, -eig.eigenvalues().minCoeff());
        break;
      }
    }
  }
  return worst;
}

void ConeProgram::write_text(std::ostream& os) const {
  // Each row is an affine a'x + b that must lie in its cone. EXP triples keep
  // the (x, y, z) order used here, not the reversed order of the format.
  os << "VER\n3\n\nOBJSENSE\nMAX\n\nVAR\n" << num_variables() << " 1\nF " << num_variables() << "\n\n";
  os << "CON\n" << num_rows() << ' ' << cones_.size() << '\n';
  for (const auto& cone : cones_) {
    const char* tag = cone.kind == ConeKind::kZero          ? "L="
                      : cone.kind == ConeKind::kNonnegative ? "L+"
                      : cone.kind == ConeKind::kExponential ? "EXP"
                                                            : "SVPSD";
    os << tag << ' ' << cone.rows.size() << '\n';
  }
  std::size_t nnz = 0;
  std::size_t nb = 0;
  for (const auto& cone : cones_)
    for (const auto& r : cone.rows) {
      nnz += r.terms().size();
      nb += r.constant() != 0.0 ? 1 : 0;
    }
  os << "\nOBJACOORD\n" << objective_.terms().size() << '\n';
  for (const auto& [i, c] : objective_.terms()) os << i << ' ' << c << '\n';
  os << "\nACOORD\n" << nnz << '\n';
  int row = 0;
  for (const auto& cone : cones_)
    for (const auto& r : cone.rows) {
      for (const auto& [i, c] : r.terms()) os << row << ' ' << i << ' ' << c << '\n';
      ++row;
    }
  os << "\nBCOORD\n" << nb << '\n';
  row = 0;
  for (const auto& cone : cones_)
    for (const auto& r : cone.rows) {
      if (r.constant() != 0.0) os << row << ' ' << r.constant() << '\n';
      ++row;
    }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

}  // namespace isac::conic
