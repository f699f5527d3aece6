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
#include "xorgame/game.hpp"

#include <cmath>
#include <stdexcept>

#include "xorgame/numeric.hpp"
#include "xorgame/parallel.hpp"
#include "xorgame/state_model.hpp"

namespace xorgame {

RefereeSchedule make_schedule(int instances_per_setting, std::uint64_t master_seed) {
    if (instances_per_setting <= 0) {
        throw std::invalid_argument("instances_per_setting must be positive");
    }
    std::vector<std::pair<int, int>> block_order{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    Rng rng = Rng::substream(master_seed, Stream::kSchedule);
    rng.shuffle(block_order);

    RefereeSchedule schedule;
    schedule.instances_per_setting = instances_per_setting;
    schedule.settings.reserve(4 * static_cast<std::size_t>(instances_per_setting));
    for (const auto& setting : block_order) {
        for (int i = 0; i < instances_per_setting; ++i) {
            schedule.settings.push_back(setting);
        }
    }
    return schedule;
}

double p_ab_given_xy(int a, int b, const PhaseSetting& ps) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
        throw std::invalid_argument("player outputs must be bits");
    }
    const double sign = ((a ^ b) == 0) ? 1.0 : -1.0;
    return 0.125 + 0.125 * (1.0 + sign * std::cos(ps.phase_sum()));
}

double pwin_lambda(double lambda, double visibility, const InterferometerConfig& cfg) {
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(visibility >= 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("lambda and visibility must lie in [0, 1]");
    }
    return 0.5 + 0.5 * lambda * visibility * cfg.bunching_probability();
}

double pwin_purity(double purity, double visibility, const InterferometerConfig& cfg) {
    const double tau_t = cfg.prep_test.transmission();
    const double rho_t = cfg.prep_test.reflection();
    if (tau_t <= 0.0 || rho_t <= 0.0) {
        throw std::domain_error("degenerate test preparation splitter: purity parameterization undefined");
    }
    const double floor = tau_t * tau_t + rho_t * rho_t;
    if (purity > 1.0 + kLinAlgTol || purity < floor - kLinAlgTol) {
        throw std::domain_error("purity outside [T^2 + R^2, 1]");
    }
    double excess = purity - floor;
    if (excess < 0.0) excess = 0.0;
    const double tau_m = cfg.prep_meas.transmission();
    const double rho_m = cfg.prep_meas.reflection();
    const double bracket =
        std::sqrt(tau_t / (2.0 * rho_t)) * rho_m + std::sqrt(rho_t / (2.0 * tau_t)) * tau_m;
    return 0.5 + 0.5 * visibility * std::sqrt(excess) * bracket;
}

double pwin_from_distribution(const OutcomeDistribution& dist, int x, int y) {
    return dist.winning_cross_mass(x, y) + 0.5 * dist.same_lab_mass();
}

RoundResult play_round(const OutcomeDistribution& dist, int x, int y, Rng& rng) {
    RoundResult result{};
    result.pattern = dist.sample(rng);
    const DetectionPattern& pattern = kPatterns[result.pattern];
    if (pattern.cls == PatternClass::kCrossLab) {
        result.a = pattern.a;
        result.b = pattern.b;
    } else {
        // No phase information reaches the players; both output a fair guess.
        result.a = rng.bit();
        result.b = rng.bit();
    }
    result.win = (result.a ^ result.b) == (x ^ y);
    return result;
}

double monte_carlo_win_rate(const InterferometerConfig& cfg, double lambda, double visibility,
                            std::uint64_t rounds, std::uint64_t seed) {
    if (rounds == 0) {
        throw std::invalid_argument("rounds must be positive");
    }
    std::array<OutcomeDistribution, 4> dists;
    for (int s = 0; s < 4; ++s) {
        dists[s] = outcome_distribution(cfg, PhaseSetting::from_bits(s >> 1, s & 1), lambda, visibility);
    }
    Rng rng = Rng::substream(seed, Stream::kMonteCarlo);
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < rounds; ++i) {
        const int s = static_cast<int>(rng.below(4));
        if (play_round(dists[s], s >> 1, s & 1, rng).win) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(rounds);
}

namespace {

void check_params(const ExperimentParams& params) {
    if (params.instances_per_setting <= 0) {
        throw std::invalid_argument("instances_per_setting must be positive");
    }
    if (!(params.mean_counts > 0.0)) {
        throw std::invalid_argument("mean_counts must be positive");
    }
    if (!(params.sigma >= 0.0)) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    if (!(params.visibility >= 0.0 && params.visibility <= 1.0)) {
        throw std::invalid_argument("visibility must lie in [0, 1]");
    }
    if (!(params.lambda_meas >= 0.0 && params.lambda_meas <= 1.0)) {
        throw std::invalid_argument("lambda_meas must lie in [0, 1]");
    }
}

/// Runs one instance and hands every round to `on_round`. All randomness of
/// the instance comes from its own substream, so instances are independent
/// of execution order.
template <typename OnRound>
InstanceRecord simulate_instance(const ExperimentParams& params, int index, int x, int y,
                                 std::uint64_t stream_index, OnRound&& on_round) {
    Rng rng = Rng::substream(params.master_seed, Stream::kInstance, stream_index);

    const double noise = sample_phase_noise(0.0, params.sigma, rng);
    const PhaseSetting ps = PhaseSetting::from_bits(x, y).with_phi_x_offset(noise);
    const OutcomeDistribution dist =
        outcome_distribution(params.optics, ps, 1.0, params.lambda_meas, params.visibility);

    InstanceRecord record;
    record.index = index;
    record.x = x;
    record.y = y;
    record.phi_x_applied = ps.phi_x;
    record.t_start_s = static_cast<double>(index);  // 1 s of acquisition per instance
    record.rounds = params.poisson_counts ? rng.poisson(params.mean_counts)
                                          : static_cast<std::uint64_t>(std::llround(params.mean_counts));

    for (std::uint64_t r = 0; r < record.rounds; ++r) {
        const RoundResult round = play_round(dist, x, y, rng);
        switch (round.pattern) {
            case kPatternC00: ++record.cross[0]; break;
            case kPatternC01: ++record.cross[1]; break;
            case kPatternC10: ++record.cross[2]; break;
            case kPatternC11: ++record.cross[3]; break;
            case kPatternInLabA: ++record.inlab_alice; break;
            case kPatternInLabB: ++record.inlab_bob; break;
            case kPatternDoubleA0: ++record.doubles_truth[0]; break;
            case kPatternDoubleA1: ++record.doubles_truth[1]; break;
            case kPatternDoubleB0: ++record.doubles_truth[2]; break;
            case kPatternDoubleB1: ++record.doubles_truth[3]; break;
            default: break;
        }
        on_round(round);
    }
    return record;
}

}  // namespace

RunRecord run_experiment(const ExperimentParams& params) {
    check_params(params);
    RunRecord record;
    record.params = params;
    record.schedule = make_schedule(params.instances_per_setting, params.master_seed);
    const std::size_t n = record.schedule.settings.size();
    record.instances.resize(n);
    parallel_for(n, params.workers, [&](std::size_t i) {
        const auto [x, y] = record.schedule.settings[i];
        record.instances[i] = simulate_instance(params, static_cast<int>(i), x, y,
                                                static_cast<std::uint64_t>(i), [](const RoundResult&) {});
    });
    return record;
}

std::vector<RoundResult> simulate_event_stream(const ExperimentParams& params, std::uint64_t repetition) {
    check_params(params);
    // Each repetition is a full run with its own schedule shuffle and
    // disjoint instance substreams.
    const RefereeSchedule schedule =
        make_schedule(params.instances_per_setting, mix64(params.master_seed ^ mix64(repetition)));
    std::vector<RoundResult> events;
    events.reserve(static_cast<std::size_t>(params.mean_counts * static_cast<double>(schedule.settings.size())));
    const std::uint64_t base = repetition * (static_cast<std::uint64_t>(1) << 32);
    for (std::size_t i = 0; i < schedule.settings.size(); ++i) {
        const auto [x, y] = schedule.settings[i];
        simulate_instance(params, static_cast<int>(i), x, y, base + i,
                          [&](const RoundResult& round) { events.push_back(round); });
    }
    return events;
}

}  // namespace xorgame
