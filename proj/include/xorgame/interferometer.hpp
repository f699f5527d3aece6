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
#include "xorgame/phase_setting.hpp"

namespace xorgame {

/// The four beamsplitters of the nonlocal interferometer: two preparation
/// stages (test and ancilla photon) and the two local detection stages.
/// Detection stages default to exactly balanced; the members are exposed for
/// robustness studies.
struct InterferometerConfig {
    BeamsplitterSpec prep_test = BeamsplitterSpec::balanced();
    BeamsplitterSpec prep_meas = BeamsplitterSpec::balanced();
    BeamsplitterSpec det_alice = BeamsplitterSpec::balanced();
    BeamsplitterSpec det_bob = BeamsplitterSpec::balanced();

    static InterferometerConfig balanced() { return InterferometerConfig{}; }

    /// Preparation stages from transmission probabilities, balanced detection.
    static InterferometerConfig with_preparation(double tau_test, double tau_meas) {
        InterferometerConfig cfg;
        cfg.prep_test = BeamsplitterSpec::from_transmission(tau_test);
        cfg.prep_meas = BeamsplitterSpec::from_transmission(tau_meas);
        return cfg;
    }

    /// Probability for both photons to end up in the same lab. Independent of
    /// all phases, the decoherence parameter and the visibility.
    double bunching_probability() const {
        return prep_test.transmission() * prep_meas.reflection() +
               prep_meas.transmission() * prep_test.reflection();
    }
};

/// Builds the 4x4 single-photon unitary U = U2 * R * U1.
///
/// U1 is the block-diagonal preparation pair, R carries the four applied
/// phases and U2 the detection pair (modes 1&4 on Alice's beamsplitter,
/// modes 2&3 on Bob's). Phase orientations in R are chosen so that for
/// bit-derived settings R equals diag((-1)^x, (-1)^y, 1, 1) entry by entry,
/// and for continuous phases the correlated coincidence probability varies
/// as cos^2((phi_x + phi_y + theta_a + theta_b)/2).
Eigen::Matrix4cd build_unitary(const InterferometerConfig& cfg, const PhaseSetting& ps);

}  // namespace xorgame
