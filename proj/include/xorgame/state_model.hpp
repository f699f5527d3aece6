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

#include "xorgame/beamsplitter.hpp"
#include "xorgame/rng.hpp"

namespace xorgame {

/// Path qubit of the test photon. Diagonal fixed to (T, R) of the preparation
/// beamsplitter; hermitian, unit trace, positive semidefinite.
struct TestStateDensity {
    Eigen::Matrix2cd rho;

    double purity() const { return (rho * rho).trace().real(); }
    void validate() const;
};

/// rho = [[T, lambda*t*r*e^{-i phi}], [lambda*t*r*e^{+i phi}, R]]: the linear
/// interpolation between the pure path superposition and its phase-flipped
/// counterpart.
TestStateDensity density_from_lambda(const BeamsplitterSpec& bs, double phi, double lambda);

double purity(const TestStateDensity& state);

/// Closed form Tr(rho^2) = T^2 + R^2 + 2 lambda^2 T R.
double purity_from_lambda(const BeamsplitterSpec& bs, double lambda);

/// Minimum reachable purity T^2 + R^2 (fully dephased path mixture).
double purity_floor(const BeamsplitterSpec& bs);

/// lambda = exp(-sigma^2 / 2) for Gaussian phase noise of width sigma.
double lambda_from_sigma(double sigma);

/// Inverse of lambda_from_sigma; capped at kSigmaCap so lambda = 0 maps to a
/// finite, numerically fully-dephasing width.
double sigma_from_lambda(double lambda);
inline constexpr double kSigmaCap = 50.0;

/// lambda = sqrt((P - T^2 - R^2) / (2 T R)); requires purity in [floor, 1].
double lambda_from_purity(double purity, const BeamsplitterSpec& bs);

/// sigma = sqrt(-ln((P - T^2 - R^2)/(2 T R))). Purity at or below the floor
/// has no finite sigma and is reported as a domain error.
double sigma_from_purity(double purity, const BeamsplitterSpec& bs);

/// The three equivalent decoherence parameterizations, kept consistent:
/// lambda = e^{-sigma^2/2} and P = T^2 + R^2 + 2 lambda^2 T R.
struct DecoherenceSpec {
    double sigma;
    double lambda;
    double purity;

    static DecoherenceSpec from_sigma(double sigma, const BeamsplitterSpec& bs);
    static DecoherenceSpec from_lambda(double lambda, const BeamsplitterSpec& bs);
    /// Accepts the closed interval [floor, 1]; the floor maps to lambda = 0
    /// with the capped sigma.
    static DecoherenceSpec from_purity(double purity, const BeamsplitterSpec& bs);
};

/// One draw of phi ~ Normal(phi_x, sigma^2).
double sample_phase_noise(double phi_x, double sigma, Rng& rng);

}  // namespace xorgame
