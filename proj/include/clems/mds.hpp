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

#pragma once

// Weighted metric multidimensional scaling by stress majorization (SMACOF).
//
// Minimizes  sum_{i,j} W_ij (Delta_ij - ||x_i - x_j||)^2  over all ordered
// pairs. Each Guttman transform X <- V^+ B(X) X never increases the stress.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace clems::mds {

struct Problem {
  Eigen::MatrixXd dissimilarity;  // n x n
  Eigen::MatrixXd weight;         // n x n
  int dim = 2;

  Eigen::Index size() const noexcept { return dissimilarity.rows(); }
};

/// Throws ValidationError unless both matrices are square, equal-sized,
/// symmetric, nonnegative with zero diagonal, every object carries some weight,
/// and dim >= 1.
void validate(const Problem& problem);

struct Options {
  double tol = 1e-6;
  int max_iter = 300;
  std::uint64_t seed = 0;
  /// Independent seeded starts; the lowest final stress wins (first on ties).
  int restarts = 1;
};

struct Solution {
  Eigen::MatrixXd coords;  // n x dim
  std::vector<double> stress_history;  // entry 0 is the initial stress
  int iterations = 0;
  bool converged = false;

  double stress() const { return stress_history.back(); }
};

double stress(const Eigen::MatrixXd& coords, const Problem& problem);

/// V^+ for V_ij = -W_ij (i != j), V_ii = sum_j W_ij. Uses
/// V^+ = (V + J/n)^-1 - J/n, which holds when the weight graph is connected.
/// Throws DecompositionError naming the unreachable object otherwise.
Eigen::MatrixXd pinv_v(const Eigen::MatrixXd& weight);

/// One Guttman transform.
Eigen::MatrixXd guttman_step(const Eigen::MatrixXd& coords, const Problem& problem,
                             const Eigen::MatrixXd& v_pinv);

/// Uniform [-1, 1]^dim starting coordinates.
Eigen::MatrixXd random_init(Eigen::Index n, int dim, std::uint64_t seed);

/// Iterates from `init` (or a seeded random start when absent) until the
/// relative stress decrease drops below tol or max_iter steps were taken.
Solution solve(const Problem& problem, const Options& options = {},
               const std::optional<Eigen::MatrixXd>& init = std::nullopt);

}  // namespace clems::mds
