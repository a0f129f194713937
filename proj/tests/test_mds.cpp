// Copyright 2026 The CLEMS Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "clems/error.hpp"
#include "clems/mds.hpp"
#include "oracles.hpp"

using namespace clems;
using Eigen::MatrixXd;

namespace {

mds::Problem two_point() {
  mds::Problem p;
  p.dissimilarity = MatrixXd{{0, 1}, {1, 0}};
  p.weight = MatrixXd{{0, 1}, {1, 0}};
  p.dim = 1;
  return p;
}

mds::Problem from_random(const testing::RandomProblem& rp, int dim) {
  return {rp.delta, rp.weight, dim};
}

}  // namespace

TEST_CASE("stress examples") {
  const mds::Problem p = two_point();
  CHECK(mds::stress(MatrixXd{{0}, {0}}, p) == 2.0);
  CHECK(mds::stress(MatrixXd{{0}, {1}}, p) == 0.0);
  mds::Problem zero = p;
  zero.weight.setZero();
  CHECK(mds::stress(MatrixXd{{3}, {-4}}, zero) == 0.0);
  CHECK_THROWS_AS(mds::stress(MatrixXd{{0, 0}, {1, 1}, {2, 2}}, p), DimensionError);
}

TEST_CASE("stress matches the oracle and is translation invariant") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto rp = testing::random_problem(rng, 3 + t % 9, 0.3);
    const mds::Problem p = from_random(rp, 2);
    const MatrixXd x = mds::random_init(p.size(), 2, t);
    const double s = mds::stress(x, p);
    CHECK(s == doctest::Approx(testing::oracle_stress(x, rp.delta, rp.weight)).epsilon(1e-12));
    MatrixXd shifted = x;
    shifted.rowwise() += Eigen::RowVector2d(3.5, -1.25);
    CHECK(mds::stress(shifted, p) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("validate rejects malformed problems") {
  mds::Problem p = two_point();
  mds::validate(p);
  mds::Problem asym = p;
  asym.dissimilarity(0, 1) = 2;
  CHECK_THROWS_AS(mds::validate(asym), ValidationError);
  mds::Problem diag = p;
  diag.weight(0, 0) = 1;
  CHECK_THROWS_AS(mds::validate(diag), ValidationError);
  mds::Problem neg = p;
  neg.weight(0, 1) = neg.weight(1, 0) = -1;
  CHECK_THROWS_AS(mds::validate(neg), ValidationError);
  mds::Problem orphan = p;
  orphan.weight.setZero();
  CHECK_THROWS_AS(mds::validate(orphan), ValidationError);
  mds::Problem nodim = p;
  nodim.dim = 0;
  CHECK_THROWS_AS(mds::validate(nodim), ValidationError);
}

TEST_CASE("pinv_v examples") {
  const MatrixXd v_pinv = mds::pinv_v(MatrixXd{{0, 1}, {1, 0}});
  const MatrixXd expected = 0.25 * MatrixXd{{1, -1}, {-1, 1}};
  CHECK((v_pinv - expected).cwiseAbs().maxCoeff() < 1e-15);

  // Uniform weights: V+ V acts as the identity on zero-mean vectors.
  const int n = 5;
  MatrixXd w = MatrixXd::Ones(n, n) - MatrixXd::Identity(n, n);
  const MatrixXd v = n * MatrixXd::Identity(n, n) - MatrixXd::Ones(n, n);
  Eigen::VectorXd x(n);
  x << 1, -2, 0.5, 3, -2.5;
  CHECK((mds::pinv_v(w) * v * x - x).norm() < 1e-12);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto rp = testing::random_problem(rng, 4 + t, 0.5);
    MatrixXd vv = -rp.weight;
    vv.diagonal() = rp.weight.rowwise().sum();
    const MatrixXd vp = mds::pinv_v(rp.weight);
    CHECK((vp * vv * vp - vp).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((vv * vp * vv - vv).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pinv_v detects a disconnected weight graph") {
  MatrixXd w = MatrixXd::Zero(4, 4);
  w(0, 1) = w(1, 0) = 1;
  w(2, 3) = w(3, 2) = 1;
  CHECK_THROWS_AS(mds::pinv_v(w), DecompositionError);
}

TEST_CASE("guttman step on two points lands at the target distance") {
  const mds::Problem p = two_point();
  const MatrixXd vp = mds::pinv_v(p.weight);
  for (double a : {-3.0, 0.1, 2.0}) {
    const MatrixXd x = MatrixXd{{a}, {a + 0.37}};
    const MatrixXd next = mds::guttman_step(x, p, vp);
    CHECK(std::abs(std::abs(next(0, 0) - next(1, 0)) - 1.0) < 1e-14);
  }
}

TEST_CASE("guttman step keeps a perfect configuration perfect") {
  MatrixXd x{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mds::Problem p{testing::euclidean_distances(x), MatrixXd::Ones(4, 4) - MatrixXd::Identity(4, 4), 2};
  const MatrixXd next = mds::guttman_step(x, p, mds::pinv_v(p.weight));
  CHECK(mds::stress(next, p) < 1e-24);
}

TEST_CASE("solve reaches zero stress on embeddable problems") {
  const auto two = mds::solve(two_point(), {1e-6, 300, 4});
  CHECK(two.stress() < 1e-12);

  MatrixXd square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mds::Problem p{testing::euclidean_distances(square), MatrixXd::Ones(4, 4) - MatrixXd::Identity(4, 4), 2};
  mds::Options opt;
  opt.tol = 1e-12;
  opt.max_iter = 10000;
  const auto sol = mds::solve(p, opt);
  CHECK(sol.stress() < 1e-8);
}

TEST_CASE("solve is monotone and deterministic") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto rp = testing::random_problem(rng, 5 + t, 0.4);
    const mds::Problem p = from_random(rp, 1 + t % 3);
    mds::Options opt;
    opt.seed = t;
    const auto a = mds::solve(p, opt);
    const auto b = mds::solve(p, opt);
    CHECK(a.coords == b.coords);
    CHECK(a.stress_history == b.stress_history);
    CHECK(a.iterations + 1 == static_cast<int>(a.stress_history.size()));
    for (std::size_t i = 1; i < a.stress_history.size(); ++i)
      CHECK(a.stress_history[i] <= a.stress_history[i - 1] * (1.0 + 1e-12));
    CHECK(a.stress() == doctest::Approx(testing::oracle_stress(a.coords, rp.delta, rp.weight)).epsilon(1e-10));
  }
}

TEST_CASE("zero-weight dissimilarities never influence the iterates") {
  std::mt19937_64 rng(5);
  const auto rp = testing::random_problem(rng, 10, 0.6);
  mds::Problem p = from_random(rp, 2);
  mds::Problem q = p;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = 0; j < q.size(); ++j)
      if (i != j && q.weight(i, j) == 0.0) q.dissimilarity(i, j) = 7.0 + static_cast<double>(i + j);
  const MatrixXd init = mds::random_init(p.size(), 2, 99);
  const auto a = mds::solve(p, {}, init);
  const auto b = mds::solve(q, {}, init);
  CHECK(a.coords == b.coords);
  CHECK(a.stress_history == b.stress_history);
}

TEST_CASE("restarts keep the lowest stress") {
  std::mt19937_64 rng(17);
  const auto rp = testing::random_problem(rng, 12);
  const mds::Problem p = from_random(rp, 1);
  mds::Options one;
  one.seed = 4;
  mds::Options many = one;
  many.restarts = 6;
  CHECK(mds::solve(p, many).stress() <= mds::solve(p, one).stress());
}

TEST_CASE("random_init is seeded and bounded") {
  const MatrixXd a = mds::random_init(7, 3, 42);
  CHECK(a == mds::random_init(7, 3, 42));
  CHECK(a != mds::random_init(7, 3, 43));
  CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("solve matches a gradient-descent oracle on small problems") {
  std::mt19937_64 rng(2024);
  mds::Options opt;
  opt.tol = 1e-15;
  opt.max_iter = 20000;
  for (int t = 0; t < 5; ++t) {
    const auto rp = testing::random_problem(rng, 6);
    const mds::Problem p = from_random(rp, 2);
    const MatrixXd init = mds::random_init(6, 2, 1000 + t);
    const auto sol = mds::solve(p, opt, init);
    const auto gd = testing::oracle_gradient_descent(rp.delta, rp.weight, init);
    CHECK(std::abs(sol.stress() - gd.stress) < 1e-6);
  }
}
