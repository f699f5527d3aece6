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
#include <stdexcept>
#include <string>

#include "xorgame/numeric.hpp"

namespace xorgame {

/// Real transmission/reflection amplitudes of a lossless beamsplitter.
/// The probabilities T = t^2 and R = r^2 are always derived, never stored.
class BeamsplitterSpec {
  public:
    BeamsplitterSpec(double t, double r) : t_(t), r_(r) {
        if (t < 0.0 || r < 0.0 || std::abs(t * t + r * r - 1.0) > kLinAlgTol) {
            throw std::invalid_argument("beamsplitter amplitudes must be non-negative with t^2 + r^2 = 1, got t=" +
                                        std::to_string(t) + " r=" + std::to_string(r));
        }
    }

    static BeamsplitterSpec balanced() { return BeamsplitterSpec(std::sqrt(0.5), std::sqrt(0.5)); }

    /// Builds from a transmission probability T in [0, 1].
    static BeamsplitterSpec from_transmission(double tau) {
        if (tau < 0.0 || tau > 1.0) {
            throw std::invalid_argument("transmission probability must be in [0, 1], got " + std::to_string(tau));
        }
        return BeamsplitterSpec(std::sqrt(tau), std::sqrt(1.0 - tau));
    }

    double t() const { return t_; }
    double r() const { return r_; }
    double transmission() const { return t_ * t_; }
    double reflection() const { return r_ * r_; }

  private:
    double t_;
    double r_;
};

}  // namespace xorgame
