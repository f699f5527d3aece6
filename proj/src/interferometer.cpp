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
#include "xorgame/interferometer.hpp"

#include <complex>

namespace xorgame {

namespace {

const std::complex<double> kI{0.0, 1.0};

// Exact at the XOR-game settings: phases reduced to 0 or pi give exactly
// +-1, so bit-derived unitaries are exactly real and the same-lab
// probabilities are bit-identical across referee settings.
std::complex<double> unit_phase(double phi) {
    if (phi == 0.0) return {1.0, 0.0};
    if (phi == kPi) return {-1.0, 0.0};
    return std::exp(kI * phi);
}

}  // namespace

Eigen::Matrix4cd build_unitary(const InterferometerConfig& cfg, const PhaseSetting& ps) {
    const double t_t = cfg.prep_test.t();
    const double r_t = cfg.prep_test.r();
    const double t_m = cfg.prep_meas.t();
    const double r_m = cfg.prep_meas.r();

    Eigen::Matrix4cd u1 = Eigen::Matrix4cd::Zero();
    u1(0, 0) = t_t;
    u1(0, 1) = kI * r_t;
    u1(1, 0) = kI * r_t;
    u1(1, 1) = t_t;
    u1(2, 2) = t_m;
    u1(2, 3) = kI * r_m;
    u1(3, 2) = kI * r_m;
    u1(3, 3) = t_m;

    // Orientation convention: phi_y and theta_a enter with negative sign so
    // that bit settings reproduce diag((-1)^x, (-1)^y, 1, 1) exactly while
    // continuous phases give correlated fringes in cos^2((phi_x + phi_y +
    // theta_a + theta_b)/2). theta_a sits on the ancilla mode detected in
    // Alice's lab (mode 4), theta_b on mode 3.
    Eigen::Matrix4cd phases = Eigen::Matrix4cd::Zero();
    phases(0, 0) = unit_phase(ps.phi_x);
    phases(1, 1) = std::conj(unit_phase(ps.phi_y));
    phases(2, 2) = unit_phase(ps.theta_b);
    phases(3, 3) = std::conj(unit_phase(ps.theta_a));

    const double t_a = cfg.det_alice.t();
    const double r_a = cfg.det_alice.r();
    const double t_b = cfg.det_bob.t();
    const double r_b = cfg.det_bob.r();

    Eigen::Matrix4cd u2 = Eigen::Matrix4cd::Zero();
    u2(0, 0) = t_a;
    u2(0, 3) = kI * r_a;
    u2(1, 1) = t_b;
    u2(1, 2) = kI * r_b;
    u2(2, 1) = kI * r_b;
    u2(2, 2) = t_b;
    u2(3, 0) = kI * r_a;
    u2(3, 3) = t_a;

    return u2 * phases * u1;
}

}  // namespace xorgame
