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
#include <vector>

#include "xorgame/game.hpp"
#include "xorgame/interferometer.hpp"
#include "xorgame/rng.hpp"

namespace xorgame {

/// Relative detection efficiency per cross-lab coincidence pattern, in the
/// order (eta00, eta01, eta10, eta11), normalized so the most efficient
/// pattern has eta = 1.
struct EfficiencyMap {
    std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};

    static EfficiencyMap uniform() { return EfficiencyMap{}; }
    /// Scales raw positive values by their maximum.
    static EfficiencyMap normalized(const std::array<double, 4>& raw);
};

struct ConfidenceResult {
    std::uint64_t n_games = 0;
    std::uint64_t n_wins = 0;
    double p_value = 1.0;
    double confidence = 0.0;
};

/// Exact binomial p-value under the fair-coin null:
/// p = 1 - sum_{k < n_wins} C(N, k) / 2^N. Integer-exact for N <= 30,
/// log-space accumulation of the smaller tail beyond that (stable to N = 1e6).
double p_value(std::uint64_t n_games, std::uint64_t n_wins);

ConfidenceResult confidence(std::uint64_t n_games, std::uint64_t n_wins);

/// Fraction of two-photons-in-one-lab events that produce a visible in-lab
/// coincidence: (1 - V) / 2.
double effective_double_click_efficiency(double visibility);

/// Efficiency-normalized instance win rate:
/// (C_win / C_tot) * (1 - P_b) + P_b / 2 with C = sum eta^{-1} counts.
/// The confidence pipeline deliberately does not apply this map; it treats
/// the four cross-lab efficiencies as equal and uses the discard rule below.
double normalized_win_rate(const InstanceRecord& instance, const EfficiencyMap& eta,
                           const InterferometerConfig& cfg);

/// Replays an ordered event stream as confidence games: unresolved double
/// clicks are invisible and skipped; cross-lab events are kept with
/// probability (1 - V)/2 (balancing the unobservable double clicks); in-lab
/// coincidences are always kept as fair-guess games. Emits the cumulative
/// confidence after each retained event.
std::vector<ConfidenceResult> confidence_event_stream(const std::vector<RoundResult>& events,
                                                      double visibility, Rng& discard_rng);

/// Boxplot summary of one event index across repetitions. Median and
/// quartiles use the midpoint convention for even counts (Tukey hinges);
/// outliers lie beyond 1.5 IQR from the box.
struct EventStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    std::vector<double> outliers;
};

/// Per-event statistics over >= 2 equal-length confidence trajectories.
std::vector<EventStats> confidence_curve_stats(const std::vector<std::vector<double>>& trajectories);

struct LogLinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

/// Ordinary least squares of ln(1 - median_k) against the event index k,
/// over indices with positive residual. Characterizes the exponential decay
/// of the confidence residual.
LogLinearFit fit_residual_decay(const std::vector<double>& medians);

}  // namespace xorgame
