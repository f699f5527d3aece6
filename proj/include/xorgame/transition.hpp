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

#include "xorgame/interferometer.hpp"
#include "xorgame/occupation.hpp"
#include "xorgame/phase_setting.hpp"

namespace xorgame {

/// Builds the k x k transition submatrix for an input/output occupation pair:
/// n_j copies of column j, then m_i copies of row i. Throws on photon-number
/// mismatch.
Eigen::MatrixXcd submatrix(const Eigen::Matrix4cd& u, const Occupation& input, const Occupation& output);

/// prod_i m_i! * prod_j n_j! normalization of the transition amplitude.
double occupation_norm(const Occupation& input, const Occupation& output);

/// Two-photon transition probability for a partially decohered test photon of
/// partial indistinguishability:
///
///   P = (1+lambda)/2 * [ (1+V)/2 |Per|^2 + (1-V)/2 |det|^2 ] / (prod m! n!)
///     + (1-lambda)/2 * [ same with the x-flipped unitary ],
///
/// where `u_setting` is the interferometer unitary at the applied setting and
/// `u_flipped` the one with phi_x shifted by pi.
double transition_probability(const Eigen::Matrix4cd& u_setting, const Eigen::Matrix4cd& u_flipped,
                              const Occupation& input, const Occupation& output, double lambda,
                              double visibility);

/// Exact probabilities of all ten detection patterns for the two-photon input.
OutcomeDistribution outcome_distribution(const InterferometerConfig& cfg, const PhaseSetting& ps,
                                         double lambda, double visibility);

/// Same, with an independent decoherence parameter for the ancilla photon
/// (lambda_meas = 1 recovers the pure-ancilla model above).
OutcomeDistribution outcome_distribution(const InterferometerConfig& cfg, const PhaseSetting& ps,
                                         double lambda, double lambda_meas, double visibility);

/// Ideal-case cross-lab coincidence probabilities (balanced splitters,
/// lambda = V = 1): p00 = p11 = cos^2(sum/2)/4, p01 = p10 = sin^2(sum/2)/4.
struct PairProbabilities {
    double p00;
    double p01;
    double p10;
    double p11;
};

PairProbabilities analytic_pair_probabilities(const PhaseSetting& ps);

}  // namespace xorgame
