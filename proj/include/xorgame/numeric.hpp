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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace xorgame {

/// Tolerance hierarchy: linear algebra at 1e-12, probability sums at 1e-10.
inline constexpr double kLinAlgTol = 1e-12;
inline constexpr double kProbSumTol = 1e-10;

/// Probabilities within this margin below zero are numerical noise and are
/// clamped to exactly 0; anything lower is a genuine error.
inline constexpr double kNegativeClampTol = 1e-12;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double clamp_probability(double p) {
    if (p < 0.0) {
        if (p < -kNegativeClampTol) {
            throw std::domain_error("probability below zero beyond tolerance: " +
                                    std::to_string(p));
        }
        return 0.0;
    }
    return p;
}

/// Reduces an angle to [0, 2*pi).
inline double reduce_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r == kTwoPi) r = 0.0;
    return r;
}

}  // namespace xorgame
