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
#include "xorgame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xorgame/numeric.hpp"

namespace xorgame {

EfficiencyMap EfficiencyMap::normalized(const std::array<double, 4>& raw) {
    double max = 0.0;
    for (double v : raw) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("efficiencies must be positive");
        }
        max = std::max(max, v);
    }
    EfficiencyMap map;
    for (int i = 0; i < 4; ++i) map.eta[i] = raw[i] / max;
    return map;
}

namespace {

// N <= 30: numerator sums of binomial coefficients stay below 2^30, so the
// dyadic rational sum_{k<W} C(N,k) / 2^N is computed exactly in doubles.
double lower_tail_exact(std::uint64_t n, std::uint64_t w) {
    std::uint64_t sum = 0;
    std::uint64_t binom = 1;  // C(n, 0)
    for (std::uint64_t k = 0; k < w; ++k) {
        sum += binom;
        binom = binom * (n - k) / (k + 1);
    }
    return static_cast<double>(sum) / std::exp2(static_cast<double>(n));
}

// Log-space accumulation of sum_{k=lo}^{hi} C(n,k)/2^n, iterating toward the
// distribution center so terms are added in increasing magnitude.
double tail_log_space(std::uint64_t n, std::uint64_t lo, std::uint64_t hi, bool ascend) {
    const double log2n = static_cast<double>(n) * std::log(2.0);
    double sum = 0.0;
    double compensation = 0.0;
    auto add = [&](double term) {
        const double y = term - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    };
    if (ascend) {
        // log C(n, k) built upward from k = lo.
        double log_binom = 0.0;
        for (std::uint64_t k = 1; k <= lo; ++k) {
            log_binom += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
        }
        for (std::uint64_t k = lo; k <= hi; ++k) {
            add(std::exp(log_binom - log2n));
            log_binom += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1));
        }
    } else {
        // log C(n, k) built downward from k = hi.
        double log_binom = 0.0;
        for (std::uint64_t k = n; k > hi; --k) {
            log_binom += std::log(static_cast<double>(k)) - std::log(static_cast<double>(n - k + 1));
        }
        for (std::uint64_t k = hi; k + 1 > lo; --k) {
            add(std::exp(log_binom - log2n));
            log_binom += std::log(static_cast<double>(k)) - std::log(static_cast<double>(n - k + 1));
        }
    }
    return sum;
}

}  // namespace

double p_value(std::uint64_t n_games, std::uint64_t n_wins) {
    return confidence(n_games, n_wins).p_value;
}

ConfidenceResult confidence(std::uint64_t n_games, std::uint64_t n_wins) {
    if (n_wins > n_games) {
        throw std::invalid_argument("n_wins exceeds n_games");
    }
    ConfidenceResult result;
    result.n_games = n_games;
    result.n_wins = n_wins;
    if (n_wins == 0) {
        result.confidence = 0.0;
        result.p_value = 1.0;
        return result;
    }
    if (n_games <= 30) {
        // Both the sum and its complement are exact dyadic rationals here.
        result.confidence = lower_tail_exact(n_games, n_wins);
        result.p_value = 1.0 - result.confidence;
        return result;
    }
    // Sum whichever binomial tail is smaller; derive the other by complement.
    if (n_wins - 1 < n_games / 2) {
        result.confidence = tail_log_space(n_games, 0, n_wins - 1, true);
        result.p_value = 1.0 - result.confidence;
    } else {
        result.p_value = tail_log_space(n_games, n_wins, n_games, false);
        result.confidence = 1.0 - result.p_value;
    }
    return result;
}

double effective_double_click_efficiency(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("visibility must lie in [0, 1]");
    }
    return 0.5 * (1.0 - visibility);
}

double normalized_win_rate(const InstanceRecord& instance, const EfficiencyMap& eta,
                           const InterferometerConfig& cfg) {
    double c_tot = 0.0;
    double c_win = 0.0;
    const bool correlated_wins = (instance.x ^ instance.y) == 0;
    for (int i = 0; i < 4; ++i) {
        const double weighted = static_cast<double>(instance.cross[i]) / eta.eta[i];
        c_tot += weighted;
        // cross order C00, C01, C10, C11: indices 0 and 3 are correlated.
        const bool winning = (i == 0 || i == 3) == correlated_wins;
        if (winning) c_win += weighted;
    }
    if (c_tot <= 0.0) {
        throw std::domain_error("instance has no cross-lab coincidences to normalize");
    }
    const double p_b = cfg.bunching_probability();
    return (c_win / c_tot) * (1.0 - p_b) + 0.5 * p_b;
}

std::vector<ConfidenceResult> confidence_event_stream(const std::vector<RoundResult>& events,
                                                      double visibility, Rng& discard_rng) {
    const double keep_probability = effective_double_click_efficiency(visibility);
    std::vector<ConfidenceResult> trajectory;
    std::uint64_t games = 0;
    std::uint64_t wins = 0;
    for (const RoundResult& event : events) {
        const PatternClass cls = kPatterns[event.pattern].cls;
        if (cls == PatternClass::kUnresolvedDouble) continue;  // invisible to the detectors
        if (cls == PatternClass::kCrossLab && discard_rng.uniform() >= keep_probability) continue;
        ++games;
        if (event.win) ++wins;
        trajectory.push_back(confidence(games, wins));
    }
    return trajectory;
}

namespace {

double midpoint_median(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    const std::size_t mid = lo + n / 2;
    if (n % 2 == 1) return sorted[mid];
    return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace

std::vector<EventStats> confidence_curve_stats(const std::vector<std::vector<double>>& trajectories) {
    if (trajectories.size() < 2) {
        throw std::invalid_argument("need at least two trajectories");
    }
    const std::size_t length = trajectories.front().size();
    for (const auto& t : trajectories) {
        if (t.size() != length) {
            throw std::invalid_argument("trajectories have mismatched lengths");
        }
    }
    std::vector<EventStats> stats(length);
    std::vector<double> column(trajectories.size());
    for (std::size_t k = 0; k < length; ++k) {
        for (std::size_t r = 0; r < trajectories.size(); ++r) column[r] = trajectories[r][k];
        std::sort(column.begin(), column.end());
        const std::size_t n = column.size();
        EventStats& s = stats[k];
        s.median = midpoint_median(column, 0, n);
        // Tukey hinges: for odd n the median element belongs to both halves.
        s.q1 = midpoint_median(column, 0, n % 2 == 1 ? n / 2 + 1 : n / 2);
        s.q3 = midpoint_median(column, n / 2, n);
        const double iqr = s.q3 - s.q1;
        for (double v : column) {
            if (v < s.q1 - 1.5 * iqr || v > s.q3 + 1.5 * iqr) s.outliers.push_back(v);
        }
    }
    return stats;
}

LogLinearFit fit_residual_decay(const std::vector<double>& medians) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < medians.size(); ++k) {
        const double residual = 1.0 - medians[k];
        if (residual > 0.0) {
            xs.push_back(static_cast<double>(k + 1));
            ys.push_back(std::log(residual));
        }
    }
    LogLinearFit fit;
    fit.n_points = xs.size();
    if (xs.size() < 2) return fit;
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace xorgame
