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

#include <stdexcept>

#include "xorgame/numeric.hpp"

namespace xorgame {

/// Referee bits with the four applied phases: phi_x, phi_y on the test-photon
/// arms and theta_a, theta_b on the two local reference shifters. All phases
/// live in [0, 2*pi); bit-derived settings carry phi = bit * pi exactly.
struct PhaseSetting {
    int x = 0;
    int y = 0;
    double phi_x = 0.0;
    double phi_y = 0.0;
    double theta_a = 0.0;
    double theta_b = 0.0;

    static PhaseSetting from_bits(int x, int y, double theta_a = 0.0, double theta_b = 0.0) {
        if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
            throw std::invalid_argument("referee bits must be 0 or 1");
        }
        PhaseSetting ps;
        ps.x = x;
        ps.y = y;
        ps.phi_x = x == 1 ? kPi : 0.0;
        ps.phi_y = y == 1 ? kPi : 0.0;
        ps.theta_a = reduce_phase(theta_a);
        ps.theta_b = reduce_phase(theta_b);
        return ps;
    }

    /// Copy with phi_x shifted (phase noise, or the x -> x xor 1 flip).
    PhaseSetting with_phi_x_offset(double delta) const {
        PhaseSetting ps = *this;
        ps.phi_x = reduce_phase(phi_x + delta);
        return ps;
    }

    PhaseSetting with_theta_a_offset(double delta) const {
        PhaseSetting ps = *this;
        ps.theta_a = reduce_phase(theta_a + delta);
        return ps;
    }

    /// Coincidence correlations depend on the phases only through this sum.
    double phase_sum() const { return phi_x + phi_y + theta_a + theta_b; }
};

}  // namespace xorgame
