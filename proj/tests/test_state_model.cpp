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

#include <cmath>
#include <complex>

#include "xorgame/numeric.hpp"
#include "xorgame/state_model.hpp"

using namespace xorgame;

namespace {
const BeamsplitterSpec kPaperSplitter = BeamsplitterSpec::from_transmission(0.35);
}

TEST_CASE("density interpolation endpoints") {
    SUBCASE("lambda = 1 is the pure state") {
        const TestStateDensity state = density_from_lambda(kPaperSplitter, 0.7, 1.0);
        state.validate();
        CHECK(state.purity() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(state.rho(0, 0).real() == doctest::Approx(0.35).epsilon(1e-12));
        CHECK(state.rho(1, 1).real() == doctest::Approx(0.65).epsilon(1e-12));
        CHECK(std::abs(state.rho(0, 1)) ==
              doctest::Approx(kPaperSplitter.t() * kPaperSplitter.r()).epsilon(1e-12));
    }
    SUBCASE("lambda = 0 is the diagonal mixture") {
        const TestStateDensity state = density_from_lambda(kPaperSplitter, 0.7, 0.0);
        state.validate();
        CHECK(state.rho(0, 1) == std::complex<double>(0.0, 0.0));
        CHECK(state.rho(1, 0) == std::complex<double>(0.0, 0.0));
    }
    SUBCASE("lambda out of range rejected") {
        CHECK_THROWS_AS(density_from_lambda(kPaperSplitter, 0.0, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(density_from_lambda(kPaperSplitter, 0.0, -0.1), std::invalid_argument);
    }
}

TEST_CASE("Gaussian phase averaging matches the lambda-scaled density entrywise") {
    // Quadrature oracle: average exp(i phi) under Normal(phi0, sigma^2) by
    // trapezoid integration over +-10 sigma.
    const double phi0 = 0.45;
    for (double sigma : {0.3, 0.8, 1.5}) {
        std::complex<double> averaged{0.0, 0.0};
        const int n = 40001;
        const double lo = phi0 - 10.0 * sigma;
        const double hi = phi0 + 10.0 * sigma;
        const double dx = (hi - lo) / (n - 1);
        double weight_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double phi = lo + i * dx;
            const double w = std::exp(-0.5 * (phi - phi0) * (phi - phi0) / (sigma * sigma)) *
                             ((i == 0 || i == n - 1) ? 0.5 : 1.0);
            averaged += w * std::exp(std::complex<double>(0.0, -phi));
            weight_sum += w;
        }
        averaged /= weight_sum;

        const std::complex<double> off_quadrature = kPaperSplitter.t() * kPaperSplitter.r() * averaged;
        const TestStateDensity state =
            density_from_lambda(kPaperSplitter, phi0, lambda_from_sigma(sigma));
        CHECK(std::abs(state.rho(0, 1) - off_quadrature) < 1e-8);
    }
}

TEST_CASE("purity closed form and paper values") {
    CHECK(purity(density_from_lambda(kPaperSplitter, 0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    // Fully dephased floor at the 0.65:0.35 ratio.
    CHECK(purity(density_from_lambda(kPaperSplitter, 0.0, 0.0)) == doctest::Approx(0.545).epsilon(1e-12));
    CHECK(purity_floor(kPaperSplitter) == doctest::Approx(0.545).epsilon(1e-12));
    const BeamsplitterSpec balanced = BeamsplitterSpec::balanced();
    CHECK(purity(density_from_lambda(balanced, 0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(density_from_lambda(balanced, 0.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lambda from sigma") {
    CHECK(lambda_from_sigma(0.0) == 1.0);
    CHECK(lambda_from_sigma(40.0) < 1e-300);
    CHECK(lambda_from_sigma(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(lambda_from_sigma(-0.1), std::invalid_argument);
    // Cross-check through the purity chain.
    const double tau = 0.35, rho = 0.65;
    const double expected = tau * tau + rho * rho + 2.0 * std::exp(-1.0) * tau * rho;
    CHECK(purity_from_lambda(kPaperSplitter, lambda_from_sigma(1.0)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sigma from purity") {
    CHECK(sigma_from_purity(1.0, kPaperSplitter) == 0.0);
    const double tau = 0.35, rho = 0.65;
    const double purity_at_one = tau * tau + rho * rho + 2.0 * std::exp(-1.0) * tau * rho;
    CHECK(sigma_from_purity(purity_at_one, kPaperSplitter) == doctest::Approx(1.0).epsilon(1e-10));
    SUBCASE("floor case is a domain error") {
        CHECK_THROWS_AS(sigma_from_purity(0.545, kPaperSplitter), std::domain_error);
        CHECK_THROWS_AS(sigma_from_purity(0.3, kPaperSplitter), std::domain_error);
    }
    SUBCASE("round trip through purity of lambda_from_sigma") {
        for (double sigma : {0.2, 0.7, 1.3, 2.0}) {
            const double p = purity_from_lambda(kPaperSplitter, lambda_from_sigma(sigma));
            CHECK(sigma_from_purity(p, kPaperSplitter) == doctest::Approx(sigma).epsilon(1e-10));
        }
    }
}

TEST_CASE("decoherence spec keeps the three parameterizations consistent") {
    for (double sigma : {0.0, 0.4, 1.1, 2.5}) {
        const DecoherenceSpec spec = DecoherenceSpec::from_sigma(sigma, kPaperSplitter);
        CHECK(spec.lambda == doctest::Approx(std::exp(-0.5 * sigma * sigma)).epsilon(1e-12));
        CHECK(spec.purity ==
              doctest::Approx(purity_from_lambda(kPaperSplitter, spec.lambda)).epsilon(1e-10));
        const DecoherenceSpec back = DecoherenceSpec::from_purity(spec.purity, kPaperSplitter);
        CHECK(back.lambda == doctest::Approx(spec.lambda).epsilon(1e-10));
    }
    // The floor itself is admissible and maps to lambda = 0.
    const DecoherenceSpec at_floor = DecoherenceSpec::from_purity(0.545, kPaperSplitter);
    CHECK(at_floor.lambda == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
    CHECK(at_floor.sigma == kSigmaCap);
}

TEST_CASE("phase-noise sampling") {
    SUBCASE("sigma = 0 returns phi_x exactly") {
        Rng rng(42);
        CHECK(sample_phase_noise(1.234, 0.0, rng) == 1.234);
    }
    SUBCASE("law of large numbers at sigma = 0.5") {
        Rng rng(4242);
        const int n = 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = sample_phase_noise(0.9, 0.5, rng);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        const double stddev = std::sqrt(sum_sq / n - mean * mean);
        CHECK(mean == doctest::Approx(0.9).epsilon(0.006));
        CHECK(stddev == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("seeded determinism") {
        Rng a(777), b(777);
        for (int i = 0; i < 100; ++i) {
            CHECK(sample_phase_noise(0.1, 0.8, a) == sample_phase_noise(0.1, 0.8, b));
        }
    }
    SUBCASE("empirical decoherence matches lambda within three standard errors") {
        for (double sigma : {0.5, 1.0}) {
            Rng rng(31007);
            const int n = 1000000;
            double re = 0.0, im = 0.0;
            for (int i = 0; i < n; ++i) {
                const double phi = sample_phase_noise(0.0, sigma, rng);
                re += std::cos(phi);
                im += std::sin(phi);
            }
            re /= n;
            im /= n;
            const double lambda = lambda_from_sigma(sigma);
            // Var(cos phi) = (1 + e^{-2 sigma^2})/2 - e^{-sigma^2}.
            const double var = 0.5 * (1.0 + std::exp(-2.0 * sigma * sigma)) -
                               std::exp(-sigma * sigma);
            const double se = std::sqrt(var / n);
            CHECK(std::abs(re - lambda) < 3.0 * se);
            CHECK(std::abs(im) < 3.0 * std::sqrt(0.5 / n));
        }
    }
}

TEST_CASE("returned densities are valid states for random parameters") {
    Rng rng(5061);
    for (int trial = 0; trial < 200; ++trial) {
        const BeamsplitterSpec bs = BeamsplitterSpec::from_transmission(rng.uniform());
        const TestStateDensity state = density_from_lambda(bs, kTwoPi * rng.uniform(), rng.uniform());
        state.validate();
        const double p = state.purity();
        CHECK(p > 0.5 - 1e-12);
        CHECK(p < 1.0 + 1e-12);
    }
}
