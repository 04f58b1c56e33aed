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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "isac/conic.hpp"

using namespace isac::conic;
using Catch::Approx;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng, bool psd) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = cd(normal(rng), normal(rng));
  Eigen::MatrixXcd a = psd ? Eigen::MatrixXcd(g * g.adjoint()) : Eigen::MatrixXcd(g + g.adjoint());
  return 0.5 * (a + a.adjoint());
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

TEST_CASE("a 1 x 1 Hermitian block is one nonnegative scalar", "[conic]") {
  ConeProgram prog;
  const auto b = prog.add_hermitian("A", 1);
  CHECK(prog.num_variables() == 1);
  REQUIRE(prog.cones().size() == 1);
  CHECK(prog.cones()[0].kind == ConeKind::kNonnegative);
  CHECK(b.num_scalars() == 1);
}

TEST_CASE("block layout and duplicate names", "[conic]") {
  ConeProgram prog;
  const auto b = prog.add_hermitian("Q1", 3);
  CHECK(prog.num_variables() == 9);
  CHECK(prog.count(ConeKind::kPsdTriangle) == 1);
  CHECK(prog.cones()[0].psd_dim == 6);
  CHECK(prog.cones()[0].rows.size() == 21);
  CHECK(b.re_index(0, 2) == b.re_index(2, 0));
  CHECK_THROWS_AS(prog.add_hermitian("Q1", 2), std::invalid_argument);
  CHECK_THROWS_AS(prog.add_scalar("Q1"), std::invalid_argument);
  CHECK_THROWS_AS(prog.add_hermitian("Z", 0), std::invalid_argument);
}

TEST_CASE("embedding round trip and symmetric structure", "[conic][property]") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 6; ++n) {
    ConeProgram prog;
    const auto b = prog.add_hermitian("A", n);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXcd a = random_hermitian(n, rng, rep % 2 == 0);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(prog.num_variables());
      b.write(a, x);
      CHECK((b.read(x) - a).cwiseAbs().maxCoeff() <= 1e-10);

      // [[Re, -Im], [Im, Re]]
      for (int r = 0; r < 2 * n; ++r)
        for (int c = 0; c < 2 * n; ++c) {
          const double e = b.embedded(r, c).evaluate(x);
          CHECK(e == Approx(b.embedded(c, r).evaluate(x)).margin(1e-14));
          const cd z = a(r % n, c % n);
          const double want = (r < n) == (c < n) ? z.real() : (r >= n ? z.imag() : -z.imag());
          CHECK(e == Approx(want).margin(1e-12));
        }
    }
  }
}

TEST_CASE("quadratic forms through the embedding match direct evaluation", "[conic][property]") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> dim(1, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = dim(rng);
    ConeProgram prog;
    const auto b = prog.add_hermitian("A", n);
    const Eigen::MatrixXcd a = random_hermitian(n, rng, true);
    Eigen::RowVectorXcd h(n);
    for (int i = 0; i < n; ++i) h(i) = cd(normal(rng), normal(rng));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(prog.num_variables());
    b.write(a, x);
    const double direct = (h * a * h.adjoint())(0, 0).real();
    worst = std::max(worst, rel(b.quad_form(h).evaluate(x), direct));
    worst = std::max(worst, rel(b.trace().evaluate(x), a.trace().real()));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("identity embedding is PSD-feasible", "[conic]") {
  ConeProgram prog;
  const auto b = prog.add_hermitian("A", 4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(prog.num_variables());
  b.write(Eigen::MatrixXcd::Identity(4, 4), x);
  CHECK(prog.max_violation(x) <= 1e-14);
  b.write(-Eigen::MatrixXcd::Identity(4, 4), x);
  CHECK(prog.max_violation(x) == Approx(1.0));
}

TEST_CASE("exponential cone boundary points", "[conic]") {
  ConeProgram prog;
  const Var t = prog.add_scalar("t");
  const Var r = prog.add_scalar("r");
  prog.exp_upper(LinExpr(t), LinExpr(r));
  CHECK(prog.count(ConeKind::kExponential) == 1);
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  CHECK(std::abs(prog.max_violation(x)) <= 1e-15);
  x << 1.0, std::numbers::e;
  CHECK(std::abs(prog.max_violation(x)) <= 1e-15);
  x << 1.0, 2.0;
  CHECK(prog.max_violation(x) > 0.7);
}

TEST_CASE("the solver does not accept an infeasible exponential point", "[conic]") {
  ConeProgram prog;
  const Var t = prog.add_scalar("t");
  prog.add_equal(LinExpr(t), LinExpr(1.0));
  prog.exp_upper(LinExpr(t), LinExpr(2.0));
  prog.maximize(LinExpr(t));
  CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("a lower bound on an exponential is rejected", "[conic]") {
  ConeProgram prog;
  const Var t = prog.add_scalar("t");
  CHECK_THROWS_AS(prog.exp_lower(LinExpr(t), LinExpr(2.0)), NonConvexConstraint);
}

TEST_CASE("maximize tau with e^tau <= 2", "[conic]") {
  ConeProgram prog;
  const Var tau = prog.add_scalar("tau");
  prog.exp_upper(LinExpr(tau), LinExpr(2.0));
  prog.maximize(LinExpr(tau));
  const auto sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.value(tau) == Approx(std::log(2.0)).margin(1e-6));
  CHECK(sol.objective == Approx(0.6931).margin(1e-4));
}

TEST_CASE("linear objective over the trace-one spectraplex gives the top eigenvalue", "[conic]") {
  std::mt19937_64 rng(31);
  for (int n : {1, 2, 3, 5}) {
    const Eigen::MatrixXcd c = random_hermitian(n, rng, false);
    ConeProgram prog;
    const auto a = prog.add_hermitian("A", n);
    prog.add_less_equal(a.trace(), LinExpr(1.0));
    prog.maximize(a.trace_with(c));
    const auto sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c, Eigen::EigenvaluesOnly);
    const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    CHECK(sol.objective == Approx(top).margin(1e-6));

    // Returned matrix is PSD to 1e-7 of its trace.
    const Eigen::MatrixXcd m = sol.matrix(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> me(m, Eigen::EigenvaluesOnly);
    CHECK(me.eigenvalues().minCoeff() >= -1e-7 * std::max(m.trace().real(), 1.0));
  }
}

TEST_CASE("contradictory bounds are infeasible", "[conic]") {
  ConeProgram prog;
  const Var x = prog.add_scalar("x");
  prog.add_greater_equal(LinExpr(x), LinExpr(1.0));
  prog.add_less_equal(LinExpr(x), LinExpr(0.0));
  prog.maximize(LinExpr(x));
  CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("an unbounded objective is reported as such", "[conic]") {
  ConeProgram prog;
  const Var x = prog.add_scalar("x");
  prog.add_greater_equal(LinExpr(x), LinExpr(1.0));
  prog.maximize(LinExpr(x));
  CHECK(solve(prog).status == SolveStatus::kUnbounded);
}

TEST_CASE("text dump lists every cone", "[conic]") {
  ConeProgram prog;
  const Var t = prog.add_scalar("t");
  prog.add_hermitian("A", 2);
  prog.exp_upper(LinExpr(t), LinExpr(3.0));
  prog.add_less_equal(LinExpr(t), LinExpr(1.0));
  std::ostringstream os;
  prog.write_text(os);
  const std::string text = os.str();
  CHECK(text.find("EXP") != std::string::npos);
  CHECK(text.find("SVPSD") != std::string::npos);
  CHECK(prog.num_rows() == 3 + 10 + 1);
}
