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

// Independent brute-force reference implementations used only by tests.
// They stay deliberately naive so they cannot share a failure mode with the
// production code paths they check.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "xorgame/rng.hpp"

namespace xorgame::oracles {

/// Permanent as the literal permutation sum, O(n! n).
inline std::complex<double> permanent_by_permutations(const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return {1.0, 0.0};
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::complex<double> total{0.0, 0.0};
    do {
        std::complex<double> prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            prod *= m(i, perm[static_cast<std::size_t>(i)]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Exact lower binomial tail sum_{k < w} C(n, k) / 2^n by integer Pascal
/// recurrence; valid for n <= 52 (sums stay below 2^53).
inline double fair_coin_lower_tail(std::uint64_t n, std::uint64_t w) {
    std::uint64_t sum = 0;
    std::uint64_t binom = 1;
    for (std::uint64_t k = 0; k < w; ++k) {
        sum += binom;
        binom = binom * (n - k) / (k + 1);
    }
    return static_cast<double>(sum) / std::exp2(static_cast<double>(n));
}

/// CDF of Binomial(n, p) at k, direct summation in long double.
inline long double binomial_cdf(std::uint64_t n, std::uint64_t k, long double p) {
    long double cdf = 0.0L;
    long double pmf = std::pow(1.0L - p, static_cast<long double>(n));  // P(X = 0)
    for (std::uint64_t j = 0; j <= k; ++j) {
        cdf += pmf;
        pmf *= (static_cast<long double>(n - j) / static_cast<long double>(j + 1)) * (p / (1.0L - p));
    }
    return cdf;
}

/// Smallest m with P(X <= m) >= 1/2 for X ~ Binomial(n, p).
inline std::uint64_t binomial_median(std::uint64_t n, long double p) {
    long double cdf = 0.0L;
    long double pmf = std::pow(1.0L - p, static_cast<long double>(n));
    for (std::uint64_t m = 0; m <= n; ++m) {
        cdf += pmf;
        if (cdf >= 0.5L) return m;
        pmf *= (static_cast<long double>(n - m) / static_cast<long double>(m + 1)) * (p / (1.0L - p));
    }
    return n;
}

inline Eigen::MatrixXcd random_complex_matrix(int n, Rng& rng) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = std::complex<double>(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        }
    }
    return m;
}

}  // namespace xorgame::oracles
