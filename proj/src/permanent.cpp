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
#include "xorgame/permanent.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace xorgame {

std::complex<double> permanent(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("permanent requires a square matrix");
    }
    const int n = static_cast<int>(m.rows());
    if (n > 8) {
        throw std::invalid_argument("permanent supports matrices up to 8x8");
    }
    if (n == 0) return {1.0, 0.0};

    // Ryser: Per(A) = (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij.
    // Gray-code order touches one column per subset step.
    std::array<std::complex<double>, 8> rowsum{};
    std::complex<double> total{0.0, 0.0};
    std::uint32_t prev_gray = 0;
    const std::uint32_t n_subsets = 1u << n;
    for (std::uint32_t k = 1; k < n_subsets; ++k) {
        const std::uint32_t gray = k ^ (k >> 1);
        const std::uint32_t diff = gray ^ prev_gray;
        const int j = std::countr_zero(diff);
        const double direction = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            rowsum[i] += direction * m(i, j);
        }
        std::complex<double> prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            prod *= rowsum[i];
        }
        total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
        prev_gray = gray;
    }
    return (n % 2 == 0) ? total : -total;
}

}  // namespace xorgame
