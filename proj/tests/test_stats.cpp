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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "xorgame/game.hpp"
#include "xorgame/state_model.hpp"
#include "xorgame/stats.hpp"

using namespace xorgame;

namespace {

std::vector<std::vector<double>> build_trajectories(const ExperimentParams& params, int repetitions,
                                                    std::size_t horizon) {
    std::vector<std::vector<double>> trajectories;
    for (int rep = 0; rep < repetitions; ++rep) {
        const std::vector<RoundResult> events =
            simulate_event_stream(params, static_cast<std::uint64_t>(rep));
        Rng discard = Rng::substream(params.master_seed, Stream::kDiscard, static_cast<std::uint64_t>(rep));
        const std::vector<ConfidenceResult> stream =
            confidence_event_stream(events, params.visibility, discard);
        REQUIRE(stream.size() >= horizon);
        std::vector<double> traj(horizon);
        for (std::size_t i = 0; i < horizon; ++i) traj[i] = stream[i].confidence;
        trajectories.push_back(std::move(traj));
    }
    return trajectories;
}

ExperimentParams paper_params() {
    ExperimentParams params;
    params.optics = InterferometerConfig::with_preparation(0.35, 0.35);
    params.visibility = 0.94;
    params.sigma = 0.0;
    params.instances_per_setting = 60;
    params.mean_counts = 500.0;
    params.master_seed = 42;
    return params;
}

}  // namespace

TEST_CASE("p-value and confidence reference values") {
    CHECK(p_value(1, 1) == 0.5);
    CHECK(confidence(1, 1).confidence == 0.5);
    CHECK(p_value(5, 0) == 1.0);
    CHECK(confidence(5, 0).confidence == 0.0);
    CHECK(confidence(2, 2).confidence == 0.75);

    // Frozen from the exact integer oracle: sum_{k<27} C(37,k) / 2^37.
    CHECK(p_value(37, 27) == doctest::Approx(0.003816039301455021).epsilon(1e-12));
    CHECK(p_value(37, 27) < 0.01);
    CHECK(p_value(37, 27) == doctest::Approx(1.0 - oracles::fair_coin_lower_tail(37, 27)).epsilon(1e-12));
    CHECK(confidence(37, 26).confidence == doctest::Approx(0.9899630740401335).epsilon(1e-12));
    CHECK(confidence(37, 27).confidence == doctest::Approx(0.996183960698545).epsilon(1e-12));

    // 37 games at the paper's experimental win rate: the median win count
    // certifies the superposition above 99%.
    const std::uint64_t median_wins = oracles::binomial_median(37, 0.716L);
    CHECK(median_wins == 27);
    CHECK(confidence(37, median_wins).confidence > 0.99);

    CHECK_THROWS_AS(confidence(10, 11), std::invalid_argument);
}

TEST_CASE("exact equality with the integer oracle for N <= 30") {
    for (std::uint64_t n = 1; n <= 30; ++n) {
        for (std::uint64_t w = 0; w <= n; ++w) {
            CHECK(confidence(n, w).confidence == oracles::fair_coin_lower_tail(n, w));
        }
    }
}

TEST_CASE("log-space path agrees with the integer oracle up to N = 52") {
    for (std::uint64_t n : {31ull, 40ull, 52ull}) {
        for (std::uint64_t w = 0; w <= n; w += 3) {
            CHECK(confidence(n, w).confidence ==
                  doctest::Approx(oracles::fair_coin_lower_tail(n, w)).epsilon(1e-13));
        }
    }
}

TEST_CASE("confidence and p-value are complementary and monotone") {
    Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t n = 1 + rng.below(2000);
        const std::uint64_t w = rng.below(n + 1);
        const ConfidenceResult r = confidence(n, w);
        CHECK(std::abs(r.confidence + r.p_value - 1.0) < 1e-15);
        CHECK(r.confidence >= 0.0);
        CHECK(r.confidence <= 1.0);
        if (w < n) {
            CHECK(confidence(n, w + 1).confidence >= r.confidence);
        }
    }
}

TEST_CASE("binomial tail is stable at a million games") {
    const ConfidenceResult mid = confidence(1000000, 500000);
    CHECK(std::isfinite(mid.p_value));
    CHECK(mid.p_value > 0.49);
    CHECK(mid.p_value < 0.51);
    const ConfidenceResult high = confidence(1000000, 502000);
    CHECK(high.p_value < 4e-5);
    CHECK(high.p_value > 0.0);
    const ConfidenceResult extreme = confidence(1000000, 600000);
    CHECK(extreme.p_value >= 0.0);
    CHECK(extreme.confidence == 1.0);
}

TEST_CASE("p-values under the classical null are valid (not anti-conservative)") {
    // 1e4 seeded runs of 64 fair games; the empirical CDF of the p-value must
    // not exceed the diagonal beyond the one-sided KS 1% band.
    Rng rng(161803);
    const int runs = 10000;
    const std::uint64_t games = 64;
    std::vector<double> pvals;
    pvals.reserve(runs);
    for (int i = 0; i < runs; ++i) {
        std::uint64_t wins = 0;
        for (std::uint64_t g = 0; g < games; ++g) wins += static_cast<std::uint64_t>(rng.bit());
        pvals.push_back(p_value(games, wins));
    }
    std::sort(pvals.begin(), pvals.end());
    double d_plus = 0.0;
    for (int i = 0; i < runs; ++i) {
        d_plus = std::max(d_plus, static_cast<double>(i + 1) / runs - pvals[static_cast<std::size_t>(i)]);
    }
    // sqrt(ln(1/0.01) / (2 * 1e4))
    CHECK(d_plus < 0.01517);
}

TEST_CASE("effective double-click efficiency") {
    CHECK(effective_double_click_efficiency(1.0) == 0.0);
    CHECK(effective_double_click_efficiency(0.0) == 0.5);
    CHECK(effective_double_click_efficiency(0.94) == doctest::Approx(0.03).epsilon(1e-12));
    CHECK_THROWS_AS(effective_double_click_efficiency(1.2), std::invalid_argument);
}

TEST_CASE("normalized win rate") {
    const InterferometerConfig cfg = InterferometerConfig::with_preparation(0.35, 0.35);
    InstanceRecord inst;
    inst.x = 0;
    inst.y = 0;

    SUBCASE("equal counts give the classical value for any splitting") {
        inst.cross = {250, 250, 250, 250};
        CHECK(normalized_win_rate(inst, EfficiencyMap::uniform(), cfg) == doctest::Approx(0.5).epsilon(1e-12));
        const InterferometerConfig other = InterferometerConfig::with_preparation(0.2, 0.2);
        CHECK(normalized_win_rate(inst, EfficiencyMap::uniform(), other) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("pure winning counts on balanced splitters give 3/4") {
        inst.cross = {300, 0, 0, 200};
        CHECK(normalized_win_rate(inst, EfficiencyMap::uniform(), InterferometerConfig::balanced()) ==
              doctest::Approx(0.75).epsilon(1e-12));
    }

    SUBCASE("efficiency normalization cancels for a single populated pattern") {
        inst.cross = {400, 0, 0, 0};
        const double uniform = normalized_win_rate(inst, EfficiencyMap::uniform(), cfg);
        EfficiencyMap eta;
        eta.eta = {0.8, 1.0, 1.0, 1.0};
        CHECK(normalized_win_rate(inst, eta, cfg) == doctest::Approx(uniform).epsilon(1e-12));
    }

    SUBCASE("invariant under common rescaling of the efficiencies") {
        inst.cross = {312, 17, 25, 280};
        const EfficiencyMap a = EfficiencyMap::normalized({1.0, 0.9, 0.8, 0.95});
        const EfficiencyMap b = EfficiencyMap::normalized({0.5, 0.45, 0.4, 0.475});
        CHECK(normalized_win_rate(inst, a, cfg) == normalized_win_rate(inst, b, cfg));
    }

    SUBCASE("zero cross-lab counts are rejected") {
        inst.cross = {0, 0, 0, 0};
        CHECK_THROWS_AS(normalized_win_rate(inst, EfficiencyMap::uniform(), cfg), std::domain_error);
    }
}

TEST_CASE("confidence event stream") {
    SUBCASE("perfect visibility discards every cross-lab event") {
        std::vector<RoundResult> events;
        for (int i = 0; i < 50; ++i) {
            events.push_back({kPatternC00, 0, 0, true});              // discarded: keep prob 0
            events.push_back({kPatternDoubleA0, 0, 0, true});         // invisible
            events.push_back({kPatternInLabA, i % 2, 0, i % 2 == 0});  // kept fair guess
        }
        Rng rng(1);
        const auto stream = confidence_event_stream(events, 1.0, rng);
        REQUIRE(stream.size() == 50);
        // Fair-guess games only: the confidence hovers near the prior.
        CHECK(stream.back().n_games == 50);
        CHECK(stream.back().confidence < 0.9);
        CHECK(stream.back().confidence > 0.1);
    }

    SUBCASE("all-winning retained stream follows the closed form") {
        std::vector<RoundResult> events(20, RoundResult{kPatternInLabB, 0, 0, true});
        Rng rng(2);
        const auto stream = confidence_event_stream(events, 0.94, rng);
        REQUIRE(stream.size() == 20);
        for (std::size_t k = 1; k <= stream.size(); ++k) {
            CHECK(stream[k - 1].confidence == oracles::fair_coin_lower_tail(k, k));
        }
    }

    SUBCASE("discard decisions are reproducible from the substream") {
        ExperimentParams params = paper_params();
        params.instances_per_setting = 5;
        const std::vector<RoundResult> events = simulate_event_stream(params, 0);
        Rng a = Rng::substream(7, Stream::kDiscard, 0);
        Rng b = Rng::substream(7, Stream::kDiscard, 0);
        const auto s1 = confidence_event_stream(events, 0.94, a);
        const auto s2 = confidence_event_stream(events, 0.94, b);
        REQUIRE(s1.size() == s2.size());
        for (std::size_t i = 0; i < s1.size(); ++i) {
            CHECK(s1[i].n_wins == s2[i].n_wins);
        }
    }
}

TEST_CASE("median confidence trajectory crosses 0.99 within the expected window") {
    const auto trajectories = build_trajectories(paper_params(), 25, 120);
    const auto stats = confidence_curve_stats(trajectories);
    std::size_t crossing = 0;
    for (std::size_t k = 0; k < stats.size(); ++k) {
        if (stats[k].median > 0.99) {
            crossing = k + 1;
            break;
        }
    }
    REQUIRE(crossing > 0);
    CHECK(crossing >= 30);
    CHECK(crossing <= 45);

    // Residual decays log-linearly.
    std::vector<double> medians;
    for (const auto& s : stats) medians.push_back(s.median);
    const LogLinearFit fit = fit_residual_decay(medians);
    CHECK(fit.slope < 0.0);
    CHECK(fit.r_squared > 0.9);
}

TEST_CASE("classical-mode median confidence stays below 0.95") {
    ExperimentParams params = paper_params();
    params.sigma = kSigmaCap;  // lambda = 0
    params.master_seed = 171;
    const auto trajectories = build_trajectories(params, 25, 1000);
    const auto stats = confidence_curve_stats(trajectories);
    double max_median = 0.0;
    for (const auto& s : stats) max_median = std::max(max_median, s.median);
    CHECK(max_median < 0.95);
}

TEST_CASE("confidence curve statistics") {
    SUBCASE("identical trajectories give zero-width boxes") {
        const std::vector<std::vector<double>> t(5, {0.1, 0.5, 0.9});
        const auto stats = confidence_curve_stats(t);
        REQUIRE(stats.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(stats[k].median == t[0][k]);
            CHECK(stats[k].q1 == t[0][k]);
            CHECK(stats[k].q3 == t[0][k]);
            CHECK(stats[k].outliers.empty());
        }
    }

    SUBCASE("odd-count median") {
        const std::vector<std::vector<double>> t{{0.2}, {0.6}, {0.4}};
        const auto stats = confidence_curve_stats(t);
        CHECK(stats[0].median == 0.4);
        CHECK(stats[0].q1 == doctest::Approx(0.3));
        CHECK(stats[0].q3 == doctest::Approx(0.5));
    }

    SUBCASE("boxplot outliers beyond 1.5 IQR") {
        const std::vector<std::vector<double>> t{{1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {100.0}};
        const auto stats = confidence_curve_stats(t);
        REQUIRE(stats[0].outliers.size() == 1);
        CHECK(stats[0].outliers[0] == 100.0);
    }

    SUBCASE("mismatched lengths rejected") {
        CHECK_THROWS_AS(confidence_curve_stats({{0.1, 0.2}, {0.1}}), std::invalid_argument);
        CHECK_THROWS_AS(confidence_curve_stats({{0.1}}), std::invalid_argument);
    }
}

TEST_CASE("residual decay fit recovers a synthetic exponential") {
    std::vector<double> medians;
    for (int k = 1; k <= 60; ++k) {
        medians.push_back(1.0 - std::exp(-0.2 * k));
    }
    const LogLinearFit fit = fit_residual_decay(medians);
    CHECK(fit.slope == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(fit.r_squared > 0.999999);
}
