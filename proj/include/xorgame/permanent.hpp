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

#include <Eigen/Dense>
#include <complex>

namespace xorgame {

/// Matrix permanent via Ryser's inclusion-exclusion formula with Gray-code
/// subset ordering, O(2^n * n). Supports square matrices up to 8x8; rejects
/// non-square or larger input. Per(empty) = 1.
std::complex<double> permanent(const Eigen::MatrixXcd& m);

}  // namespace xorgame
