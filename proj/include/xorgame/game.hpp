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
#include <cstdint>
#include <utility>
#include <vector>

#include "xorgame/interferometer.hpp"
#include "xorgame/occupation.hpp"
#include "xorgame/phase_setting.hpp"
#include "xorgame/rng.hpp"
#include "xorgame/transition.hpp"

namespace xorgame {

/// Per-run order of referee settings: four blocks of contiguous instances,
/// one block per (x, y) setting, block order shuffled from the seed.
struct RefereeSchedule {
    std::vector<std::pair<int, int>> settings;  // one entry per instance
    int instances_per_setting = 0;

    int instances() const { return static_cast<int>(settings.size()); }
};

RefereeSchedule make_schedule(int instances_per_setting, std::uint64_t master_seed);

/// Outcome of a single two-photon event. For cross-lab patterns a and b are
/// the detector indices; for same-lab patterns they are fair random guesses.
/// win = (a xor b == x xor y) in either case.
struct RoundResult {
    int pattern;
    int a;
    int b;
    bool win;
};

/// Ideal-case p(ab|xy) = 1/8 + 1/8 (1 + (-1)^{a xor b} cos(phase sum)).
double p_ab_given_xy(int a, int b, const PhaseSetting& ps);

/// Closed-form winning probability: 1/2 + 1/2 lambda V (T_T R_M + T_M R_T).
/// Exact for equal-ratio preparation splitters and balanced detection.
double pwin_lambda(double lambda, double visibility, const InterferometerConfig& cfg);

/// Winning probability parameterized by the test-photon purity; equal to
/// pwin_lambda at the corresponding lambda for any splitter pair.
double pwin_purity(double purity, double visibility, const InterferometerConfig& cfg);

/// Winning cross-lab mass plus half the same-lab mass of a distribution.
double pwin_from_distribution(const OutcomeDistribution& dist, int x, int y);

/// Samples one detection pattern and fills in the players' outputs.
RoundResult play_round(const OutcomeDistribution& dist, int x, int y, Rng& rng);

/// Win fraction over `rounds` games with uniformly random referee settings,
/// sampling from the exact mixed-state distribution.
double monte_carlo_win_rate(const InterferometerConfig& cfg, double lambda, double visibility,
                            std::uint64_t rounds, std::uint64_t seed);

struct ExperimentParams {
    InterferometerConfig optics;
    double visibility = 0.94;
    /// Gaussian phase-noise width emulating decoherence; resampled once per
    /// instance on top of the referee's phi_x.
    double sigma = 0.0;
    double lambda_meas = 1.0;
    int instances_per_setting = 60;
    double mean_counts = 500.0;
    /// false: exactly round(mean_counts) events per instance.
    bool poisson_counts = true;
    std::uint64_t master_seed = 42;
    int workers = 1;
};

/// Counts observed during one instance (1 s of acquisition). The double-click
/// tallies are simulation truth only: real detectors cannot resolve them and
/// no analysis path reads them.
struct InstanceRecord {
    int index = 0;
    int x = 0;
    int y = 0;
    double phi_x_applied = 0.0;
    double t_start_s = 0.0;
    std::uint64_t rounds = 0;
    std::array<std::uint64_t, 4> cross{};           // C00, C01, C10, C11
    std::uint64_t inlab_alice = 0;                  // A0 & A1 coincidences
    std::uint64_t inlab_bob = 0;                    // B0 & B1 coincidences
    std::array<std::uint64_t, 4> doubles_truth{};   // A0, A1, B0, B1 double-clicks

    std::uint64_t cross_total() const { return cross[0] + cross[1] + cross[2] + cross[3]; }
};

struct RunRecord {
    ExperimentParams params;
    RefereeSchedule schedule;
    std::vector<InstanceRecord> instances;
};

/// Full simulated run: per instance, resample the phase noise, rebuild the
/// outcome distribution, draw the event count and tally the detections.
/// Deterministic in (params.master_seed, params) for any worker count.
RunRecord run_experiment(const ExperimentParams& params);

/// The same simulation, but returning the ordered per-event results of one
/// repetition instead of counts. Used by the confidence pipeline.
std::vector<RoundResult> simulate_event_stream(const ExperimentParams& params, std::uint64_t repetition);

}  // namespace xorgame
