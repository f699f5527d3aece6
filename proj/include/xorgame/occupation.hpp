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

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "xorgame/numeric.hpp"
#include "xorgame/rng.hpp"

namespace xorgame {

/// Photon counts per interferometer mode. Mode order follows the setup
/// diagram: 1 = test mode to Alice, 2 = test mode to Bob, then the two
/// ancilla modes; the detection beamsplitters interfere modes 1&4 (Alice)
/// and 2&3 (Bob).
struct Occupation {
    std::array<int, 4> counts{};

    int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

    bool operator==(const Occupation&) const = default;
};

/// Both photons enter on the transmitted-input ports of the two preparation
/// beamsplitters: one photon in mode 1, one in mode 3.
inline constexpr Occupation kTwoPhotonInput{{1, 0, 1, 0}};

enum class PatternClass {
    kUnresolvedDouble,  // both photons on one detector; not observable
    kInLabCoincidence,  // both photons in one lab, different detectors
    kCrossLab,          // one photon per lab; carries the phase information
};

enum class Lab { kAlice, kBob };

/// One of the ten two-photon detection patterns of the four outputs.
struct DetectionPattern {
    const char* name;
    Occupation occ;
    PatternClass cls;
    Lab lab;  // meaningful for same-lab classes
    int a;    // Alice's detector index, meaningful for cross-lab
    int b;    // Bob's detector index, meaningful for cross-lab
};

inline constexpr int kNumPatterns = 10;

// Canonical pattern order; every distribution, CSV column set and sampling
// loop uses these indices.
inline constexpr int kPatternDoubleA0 = 0;  // 2000
inline constexpr int kPatternDoubleB1 = 1;  // 0200
inline constexpr int kPatternDoubleB0 = 2;  // 0020
inline constexpr int kPatternDoubleA1 = 3;  // 0002
inline constexpr int kPatternInLabA = 4;    // 1001
inline constexpr int kPatternInLabB = 5;    // 0110
inline constexpr int kPatternC00 = 6;       // 1010, correlated
inline constexpr int kPatternC11 = 7;       // 0101, correlated
inline constexpr int kPatternC01 = 8;       // 1100, anti-correlated
inline constexpr int kPatternC10 = 9;       // 0011, anti-correlated

inline constexpr std::array<DetectionPattern, kNumPatterns> kPatterns{{
    {"2000", Occupation{{2, 0, 0, 0}}, PatternClass::kUnresolvedDouble, Lab::kAlice, 0, -1},
    {"0200", Occupation{{0, 2, 0, 0}}, PatternClass::kUnresolvedDouble, Lab::kBob, -1, 1},
    {"0020", Occupation{{0, 0, 2, 0}}, PatternClass::kUnresolvedDouble, Lab::kBob, -1, 0},
    {"0002", Occupation{{0, 0, 0, 2}}, PatternClass::kUnresolvedDouble, Lab::kAlice, 1, -1},
    {"1001", Occupation{{1, 0, 0, 1}}, PatternClass::kInLabCoincidence, Lab::kAlice, -1, -1},
    {"0110", Occupation{{0, 1, 1, 0}}, PatternClass::kInLabCoincidence, Lab::kBob, -1, -1},
    {"1010", Occupation{{1, 0, 1, 0}}, PatternClass::kCrossLab, Lab::kAlice, 0, 0},
    {"0101", Occupation{{0, 1, 0, 1}}, PatternClass::kCrossLab, Lab::kAlice, 1, 1},
    {"1100", Occupation{{1, 1, 0, 0}}, PatternClass::kCrossLab, Lab::kAlice, 0, 1},
    {"0011", Occupation{{0, 0, 1, 1}}, PatternClass::kCrossLab, Lab::kAlice, 1, 0},
}};

inline int pattern_index(const Occupation& occ) {
    for (int i = 0; i < kNumPatterns; ++i) {
        if (kPatterns[i].occ == occ) return i;
    }
    return -1;
}

/// Probability over the ten two-photon detection patterns.
struct OutcomeDistribution {
    std::array<double, kNumPatterns> p{};

    double sum() const {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
    }

    double same_lab_mass() const {
        double s = 0.0;
        for (int i = 0; i < kNumPatterns; ++i) {
            if (kPatterns[i].cls != PatternClass::kCrossLab) s += p[i];
        }
        return s;
    }

    double correlated_mass() const { return p[kPatternC00] + p[kPatternC11]; }
    double anticorrelated_mass() const { return p[kPatternC01] + p[kPatternC10]; }

    /// Cross-lab mass whose detector indices satisfy a xor b = x xor y.
    double winning_cross_mass(int x, int y) const {
        return ((x ^ y) == 0) ? correlated_mass() : anticorrelated_mass();
    }

    void validate() const {
        for (double v : p) {
            if (!(v >= 0.0 && v <= 1.0 + kProbSumTol)) {
                throw std::domain_error("outcome probability out of [0, 1]: " + std::to_string(v));
            }
        }
        if (std::abs(sum() - 1.0) > kProbSumTol) {
            throw std::domain_error("outcome distribution does not sum to 1: " + std::to_string(sum()));
        }
    }

    /// Samples a pattern index by cumulative inversion in canonical order.
    int sample(Rng& rng) const {
        const double u = rng.uniform();
        double acc = 0.0;
        for (int i = 0; i < kNumPatterns; ++i) {
            acc += p[i];
            if (u < acc) return i;
        }
        return kNumPatterns - 1;  // u landed in the rounding gap at the top
    }
};

}  // namespace xorgame
