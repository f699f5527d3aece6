/*
 * Copyright 2026 The xorgame Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace xorgame {

struct FitResult {
    Eigen::VectorXd params;
    Eigen::VectorXd uncertainties;  // 1-sigma, from s^2 (J^T J)^{-1}
    Eigen::MatrixXd covariance;
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
};

using ModelFunc = std::function<double(double x, const Eigen::VectorXd& p)>;
/// Writes df/dp_j at (x, p) into `row`.
using ModelJacobian = std::function<void(double x, const Eigen::VectorXd& p, Eigen::VectorXd& row)>;

/// Damped least squares with analytic Jacobian. Iteration cap 500;
/// convergence when the largest relative parameter step drops below 1e-9.
FitResult levenberg_marquardt(const std::vector<double>& x, const std::vector<double>& y,
                              const Eigen::VectorXd& initial, const ModelFunc& f,
                              const ModelJacobian& jac, int max_iterations = 500,
                              double relative_tolerance = 1e-9);

}  // namespace xorgame
