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

#include "clems/mds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "clems/error.hpp"
#include "clems/random.hpp"

namespace clems::mds {

void validate(const Problem& problem) {
  const auto& delta = problem.dissimilarity;
  const auto& w = problem.weight;
  const Eigen::Index n = delta.rows();
  if (problem.dim < 1) throw ValidationError("target dimension must be >= 1");
  if (n == 0) throw ValidationError("MDS problem has no objects");
  if (delta.cols() != n || w.rows() != n || w.cols() != n)
    throw ValidationError("dissimilarity and weight must be square and the same size");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (delta(i, i) != 0.0 || w(i, i) != 0.0)
      throw ValidationError("nonzero diagonal at object " + std::to_string(i));
    double row_weight = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(delta(i, j) >= 0.0) || !std::isfinite(delta(i, j)))
        throw ValidationError("dissimilarity must be finite and nonnegative");
      if (!(w(i, j) >= 0.0) || !std::isfinite(w(i, j)))
        throw ValidationError("weight must be finite and nonnegative");
      if (delta(i, j) != delta(j, i) || w(i, j) != w(j, i))
        throw ValidationError("matrices must be symmetric");
      row_weight += w(i, j);
    }
    if (n > 1 && row_weight == 0.0)
      throw ValidationError("object " + std::to_string(i) + " has no weighted pair");
  }
}

double stress(const Eigen::MatrixXd& coords, const Problem& problem) {
  const Eigen::Index n = problem.size();
  if (coords.rows() != n || problem.weight.rows() != n)
    throw DimensionError("coordinate rows do not match the problem size");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = problem.weight(i, j);
      if (w == 0.0) continue;
      const double d = (coords.row(i) - coords.row(j)).norm();
      const double r = problem.dissimilarity(i, j) - d;
      total += w * r * r;
    }
  }
  return total;
}

Eigen::MatrixXd pinv_v(const Eigen::MatrixXd& weight) {
  const Eigen::Index n = weight.rows();
  if (weight.cols() != n) throw DimensionError("weight matrix must be square");

  // The all-ones vector spans the null space of V exactly when the weight
  // graph is connected.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Eigen::Index> frontier;
  if (n > 0) {
    seen[0] = 1;
    frontier.push(0);
  }
  while (!frontier.empty()) {
    const Eigen::Index i = frontier.front();
    frontier.pop();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!seen[j] && weight(i, j) > 0.0) {
        seen[j] = 1;
        frontier.push(j);
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (!seen[i])
      throw DecompositionError("weight graph is disconnected: object " + std::to_string(i) +
                               " is unreachable from object 0, V has extra null directions");

  Eigen::MatrixXd v = -weight;
  v.diagonal().setZero();
  for (Eigen::Index i = 0; i < n; ++i) v(i, i) = -v.row(i).sum();

  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd shifted = v.array() + inv_n;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw DecompositionError("V + J/n is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  inv.array() -= inv_n;
  // Symmetrize away round-off so repeated products stay symmetric.
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd guttman_step(const Eigen::MatrixXd& coords, const Problem& problem,
                             const Eigen::MatrixXd& v_pinv) {
  const Eigen::Index n = problem.size();
  const Eigen::Index m = coords.cols();
  if (coords.rows() != n || v_pinv.rows() != n || v_pinv.cols() != n)
    throw DimensionError("guttman_step: shapes do not agree");

  // (B X)_i = sum_{j != i} W_ij Delta_ij / d_ij (x_i - x_j), terms with d_ij = 0 dropped.
  Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double wd = problem.weight(i, j) * problem.dissimilarity(i, j);
      if (wd == 0.0) continue;
      const Eigen::RowVectorXd diff = coords.row(i) - coords.row(j);
      const double d = diff.norm();
      if (d > 0.0) bx.row(i) += (wd / d) * diff;
    }
  }
  return v_pinv * bx;
}

Eigen::MatrixXd random_init(Eigen::Index n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < dim; ++k) x(i, k) = uniform_real(rng, -1.0, 1.0);
  return x;
}

namespace {

Solution run_once(const Problem& problem, const Options& options, const Eigen::MatrixXd& v_pinv,
                  Eigen::MatrixXd start) {
  Solution sol;
  sol.coords = std::move(start);
  sol.stress_history.push_back(stress(sol.coords, problem));
  constexpr double kTiny = std::numeric_limits<double>::min();
  while (sol.iterations < options.max_iter) {
    const double before = sol.stress_history.back();
    if (before == 0.0) {
      sol.converged = true;
      break;
    }
    Eigen::MatrixXd next = guttman_step(sol.coords, problem, v_pinv);
    const double after = stress(next, problem);
    sol.coords = std::move(next);
    sol.stress_history.push_back(after);
    ++sol.iterations;
    if ((before - after) / std::max(before, kTiny) < options.tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

}  // namespace

Solution solve(const Problem& problem, const Options& options,
               const std::optional<Eigen::MatrixXd>& init) {
  validate(problem);
  if (!(options.tol > 0.0)) throw ValidationError("tol must be positive");
  if (options.max_iter < 0) throw ValidationError("max_iter must be >= 0");
  if (options.restarts < 1) throw ValidationError("restarts must be >= 1");
  const Eigen::Index n = problem.size();
  if (init && (init->rows() != n || init->cols() != problem.dim))
    throw DimensionError("initial coordinates must be n x dim");

  const Eigen::MatrixXd v_pinv = pinv_v(problem.weight);
  std::optional<Solution> best;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::MatrixXd start =
        (r == 0 && init) ? *init
                         : random_init(n, problem.dim,
                                       derive_seed(options.seed, {static_cast<std::uint64_t>(r)}));
    Solution sol = run_once(problem, options, v_pinv, std::move(start));
    if (!best || sol.stress() < best->stress()) best = std::move(sol);
  }
  return std::move(*best);
}

}  // namespace clems::mds
