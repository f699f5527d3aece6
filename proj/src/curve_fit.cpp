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
#include "xorgame/curve_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace xorgame {

namespace {

double sse(const std::vector<double>& x, const std::vector<double>& y, const Eigen::VectorXd& p,
           const ModelFunc& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = f(x[i], p) - y[i];
        s += r * r;
    }
    return s;
}

}  // namespace

FitResult levenberg_marquardt(const std::vector<double>& x, const std::vector<double>& y,
                              const Eigen::VectorXd& initial, const ModelFunc& f,
                              const ModelJacobian& jac, int max_iterations, double relative_tolerance) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("abscissa and ordinate sizes differ");
    }
    const std::size_t n = x.size();
    const int dim = static_cast<int>(initial.size());
    if (n < static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("fewer points than parameters");
    }

    FitResult result;
    result.params = initial;
    double current_sse = sse(x, y, result.params, f);

    Eigen::MatrixXd jtj(dim, dim);
    Eigen::VectorXd jtr(dim);
    Eigen::VectorXd row(dim);
    double mu = -1.0;  // initialized from the first J^T J diagonal

    for (int iter = 0; iter < max_iterations; ++iter) {
        result.iterations = iter + 1;
        jtj.setZero();
        jtr.setZero();
        for (std::size_t i = 0; i < n; ++i) {
            jac(x[i], result.params, row);
            const double r = f(x[i], result.params) - y[i];
            jtj.noalias() += row * row.transpose();
            jtr.noalias() += row * r;
        }
        if (mu < 0.0) {
            mu = 1e-3 * jtj.diagonal().maxCoeff();
            if (!(mu > 0.0)) mu = 1e-3;
        }

        bool stepped = false;
        while (!stepped) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal().array() += mu;
            const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
            const Eigen::VectorXd candidate = result.params + delta;
            const double candidate_sse = sse(x, y, candidate, f);
            if (candidate_sse <= current_sse) {
                double max_step = 0.0;
                for (int j = 0; j < dim; ++j) {
                    max_step = std::max(max_step,
                                        std::abs(delta[j]) / (std::abs(result.params[j]) + 1e-30));
                }
                result.params = candidate;
                current_sse = candidate_sse;
                mu = std::max(mu * 0.3, 1e-12);
                stepped = true;
                if (max_step < relative_tolerance) {
                    result.converged = true;
                }
            } else {
                mu *= 2.5;
                if (mu > 1e14) {
                    // Damping exhausted: stuck at a point where no downhill
                    // step exists. Treat as converged to the current params.
                    result.converged = true;
                    stepped = true;
                }
            }
        }
        if (result.converged) break;
    }

    result.rss = current_sse;

    // 1-sigma parameter uncertainties from the linearized covariance
    // s^2 (J^T J)^{-1}; left at zero when the problem has no residual dof.
    jtj.setZero();
    for (std::size_t i = 0; i < n; ++i) {
        jac(x[i], result.params, row);
        jtj.noalias() += row * row.transpose();
    }
    result.uncertainties = Eigen::VectorXd::Zero(dim);
    result.covariance = Eigen::MatrixXd::Zero(dim, dim);
    const double dof = static_cast<double>(n) - static_cast<double>(dim);
    if (dof > 0.0) {
        const double s2 = current_sse / dof;
        result.covariance = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
        for (int j = 0; j < dim; ++j) {
            result.uncertainties[j] =
                result.covariance(j, j) > 0.0 ? std::sqrt(result.covariance(j, j)) : 0.0;
        }
    }
    return result;
}

}  // namespace xorgame
