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
#include "xorgame/state_model.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "xorgame/numeric.hpp"

namespace xorgame {

void TestStateDensity::validate() const {
    if (std::abs(rho.trace().real() - 1.0) > kLinAlgTol || std::abs(rho.trace().imag()) > kLinAlgTol) {
        throw std::domain_error("density matrix trace differs from 1");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kLinAlgTol) {
        throw std::domain_error("density matrix is not hermitian");
    }
    // A 2x2 hermitian matrix is PSD iff both diagonal entries and the
    // determinant are non-negative.
    if (rho(0, 0).real() < -kLinAlgTol || rho(1, 1).real() < -kLinAlgTol ||
        rho.determinant().real() < -kLinAlgTol) {
        throw std::domain_error("density matrix is not positive semidefinite");
    }
}

TestStateDensity density_from_lambda(const BeamsplitterSpec& bs, double phi, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must lie in [0, 1]");
    }
    const std::complex<double> off = lambda * bs.t() * bs.r() * std::exp(std::complex<double>(0.0, -phi));
    TestStateDensity state;
    state.rho << bs.transmission(), off, std::conj(off), bs.reflection();
    return state;
}

double purity(const TestStateDensity& state) { return state.purity(); }

double purity_from_lambda(const BeamsplitterSpec& bs, double lambda) {
    const double tau = bs.transmission();
    const double rho = bs.reflection();
    return tau * tau + rho * rho + 2.0 * lambda * lambda * tau * rho;
}

double purity_floor(const BeamsplitterSpec& bs) {
    const double tau = bs.transmission();
    const double rho = bs.reflection();
    return tau * tau + rho * rho;
}

double lambda_from_sigma(double sigma) {
    if (sigma < 0.0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    return std::exp(-0.5 * sigma * sigma);
}

double sigma_from_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must lie in [0, 1]");
    }
    if (lambda == 0.0) return kSigmaCap;
    const double sigma = std::sqrt(-2.0 * std::log(lambda));
    return sigma < kSigmaCap ? sigma : kSigmaCap;
}

double lambda_from_purity(double purity, const BeamsplitterSpec& bs) {
    const double floor = purity_floor(bs);
    const double spread = 2.0 * bs.transmission() * bs.reflection();
    if (spread <= 0.0) {
        throw std::domain_error("degenerate beamsplitter: purity is fixed at 1");
    }
    if (purity > 1.0 + kLinAlgTol || purity < floor - kLinAlgTol) {
        throw std::domain_error("purity outside [T^2 + R^2, 1]");
    }
    double ratio = (purity - floor) / spread;
    if (ratio < 0.0) ratio = 0.0;
    // floor + spread = 1 only up to rounding; snap the pure endpoint so that
    // P = 1 maps to lambda = 1 (and sigma = 0) exactly.
    if (ratio > 1.0 - kLinAlgTol) ratio = 1.0;
    return std::sqrt(ratio);
}

double sigma_from_purity(double purity, const BeamsplitterSpec& bs) {
    const double floor = purity_floor(bs);
    if (purity <= floor) {
        throw std::domain_error("purity at or below the floor T^2 + R^2: sigma is undefined");
    }
    const double lambda = lambda_from_purity(purity, bs);
    return sigma_from_lambda(lambda);
}

DecoherenceSpec DecoherenceSpec::from_sigma(double sigma, const BeamsplitterSpec& bs) {
    const double lambda = lambda_from_sigma(sigma);
    return DecoherenceSpec{sigma, lambda, purity_from_lambda(bs, lambda)};
}

DecoherenceSpec DecoherenceSpec::from_lambda(double lambda, const BeamsplitterSpec& bs) {
    return DecoherenceSpec{sigma_from_lambda(lambda), lambda, purity_from_lambda(bs, lambda)};
}

DecoherenceSpec DecoherenceSpec::from_purity(double purity, const BeamsplitterSpec& bs) {
    const double lambda = lambda_from_purity(purity, bs);
    return DecoherenceSpec{sigma_from_lambda(lambda), lambda, purity};
}

double sample_phase_noise(double phi_x, double sigma, Rng& rng) {
    if (sigma < 0.0) {
        throw std::invalid_argument("sigma must be non-negative");
    }
    return rng.normal(phi_x, sigma);
}

}  // namespace xorgame
