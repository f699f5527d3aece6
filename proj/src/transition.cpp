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
#include "xorgame/transition.hpp"

#include <cmath>
#include <stdexcept>

#include "xorgame/numeric.hpp"
#include "xorgame/permanent.hpp"

namespace xorgame {

Eigen::MatrixXcd submatrix(const Eigen::Matrix4cd& u, const Occupation& input, const Occupation& output) {
    const int k = input.total();
    if (k != output.total()) {
        throw std::invalid_argument("input and output occupations carry different photon numbers");
    }

    // n_j copies of column j, then m_i copies of row i.
    Eigen::MatrixXcd cols(4, k);
    int c = 0;
    for (int j = 0; j < 4; ++j) {
        for (int rep = 0; rep < input.counts[j]; ++rep) {
            cols.col(c++) = u.col(j);
        }
    }
    Eigen::MatrixXcd result(k, k);
    int r = 0;
    for (int i = 0; i < 4; ++i) {
        for (int rep = 0; rep < output.counts[i]; ++rep) {
            result.row(r++) = cols.row(i);
        }
    }
    return result;
}

double occupation_norm(const Occupation& input, const Occupation& output) {
    static constexpr std::array<double, 5> factorial{1.0, 1.0, 2.0, 6.0, 24.0};
    double norm = 1.0;
    for (int i = 0; i < 4; ++i) {
        norm *= factorial[static_cast<std::size_t>(input.counts[i])];
        norm *= factorial[static_cast<std::size_t>(output.counts[i])];
    }
    return norm;
}

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

// Exact unit phase rotating an axis-aligned value onto the positive real
// axis; identity for general complex values.
std::complex<double> quadrant_gauge(const std::complex<double>& v) {
    if (v.imag() == 0.0 && v.real() < 0.0) return {-1.0, 0.0};
    if (v.real() == 0.0 && v.imag() > 0.0) return {0.0, -1.0};
    if (v.real() == 0.0 && v.imag() < 0.0) return {0.0, 1.0};
    return {1.0, 0.0};
}

// Row and column phases are unobservable: |Per|^2 and |det|^2 are invariant
// under diagonal phase multiplication. Fixing this gauge with exact quadrant
// rotations maps the submatrices of all four referee settings onto one
// canonical matrix, so phase-independent probabilities (the same-lab
// patterns) come out bit-identical across settings.
void gauge_normalize(Eigen::MatrixXcd& m) {
    const std::complex<double> one{1.0, 0.0};
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != std::complex<double>{0.0, 0.0}) {
                const std::complex<double> g = quadrant_gauge(m(i, j));
                if (g != one) m.row(i) *= g;
                break;
            }
        }
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != std::complex<double>{0.0, 0.0}) {
                const std::complex<double> g = quadrant_gauge(m(i, j));
                if (g != one) m.col(j) *= g;
                break;
            }
        }
    }
}

double interference_term(const Eigen::Matrix4cd& u, const Occupation& input, const Occupation& output,
                         double visibility, double norm) {
    Eigen::MatrixXcd sub = submatrix(u, input, output);
    gauge_normalize(sub);
    const double per2 = std::norm(permanent(sub));
    const double det2 = std::norm(sub.determinant());
    return (0.5 * (1.0 + visibility) * per2 + 0.5 * (1.0 - visibility) * det2) / norm;
}

}  // namespace

double transition_probability(const Eigen::Matrix4cd& u_setting, const Eigen::Matrix4cd& u_flipped,
                              const Occupation& input, const Occupation& output, double lambda,
                              double visibility) {
    check_unit_interval(lambda, "lambda");
    check_unit_interval(visibility, "visibility");
    const double norm = occupation_norm(input, output);
    double p = 0.5 * (1.0 + lambda) * interference_term(u_setting, input, output, visibility, norm);
    if (lambda < 1.0) {
        p += 0.5 * (1.0 - lambda) * interference_term(u_flipped, input, output, visibility, norm);
    }
    return clamp_probability(p);
}

OutcomeDistribution outcome_distribution(const InterferometerConfig& cfg, const PhaseSetting& ps,
                                         double lambda, double visibility) {
    const Eigen::Matrix4cd u = build_unitary(cfg, ps);
    const Eigen::Matrix4cd u_flipped = build_unitary(cfg, ps.with_phi_x_offset(kPi));
    OutcomeDistribution dist;
    for (int i = 0; i < kNumPatterns; ++i) {
        dist.p[i] = transition_probability(u, u_flipped, kTwoPhotonInput, kPatterns[i].occ, lambda, visibility);
    }
    return dist;
}

OutcomeDistribution outcome_distribution(const InterferometerConfig& cfg, const PhaseSetting& ps,
                                         double lambda, double lambda_meas, double visibility) {
    check_unit_interval(lambda_meas, "lambda_meas");
    OutcomeDistribution dist = outcome_distribution(cfg, ps, lambda, visibility);
    if (lambda_meas >= 1.0) return dist;
    // Ancilla dephasing mixes in the pi-flipped ancilla superposition, the
    // analogue of the test-photon interpolation.
    const OutcomeDistribution flipped =
        outcome_distribution(cfg, ps.with_theta_a_offset(kPi), lambda, visibility);
    for (int i = 0; i < kNumPatterns; ++i) {
        dist.p[i] = 0.5 * (1.0 + lambda_meas) * dist.p[i] + 0.5 * (1.0 - lambda_meas) * flipped.p[i];
    }
    return dist;
}

PairProbabilities analytic_pair_probabilities(const PhaseSetting& ps) {
    const double half = 0.5 * ps.phase_sum();
    const double c = std::cos(half);
    const double s = std::sin(half);
    PairProbabilities p{};
    p.p00 = p.p11 = 0.25 * c * c;
    p.p01 = p.p10 = 0.25 * s * s;
    return p;
}

}  // namespace xorgame
