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
#include <string>
#include <vector>

#include "xorgame/curve_fit.hpp"
#include "xorgame/phase_setting.hpp"
#include "xorgame/rng.hpp"
#include "xorgame/stats.hpp"

namespace xorgame {

/// One calibration sweep: counts per channel per abscissa point. In Poisson
/// mode the counts are integral draws; with poisson = false they are the
/// exact model means (used by injection-recovery tests), which is why the
/// storage type is double.
struct ScanRecord {
    std::vector<double> abscissa;  // delay in um, or PZT voltage in V
    std::vector<std::string> channels;
    std::vector<std::vector<double>> counts;  // [channel][point]
    double integration_s = 1.0;
    bool poisson = true;

    void validate() const;
};

// --- Hong-Ou-Mandel delay scan ---------------------------------------------

struct HomScanParams {
    double visibility = 0.94;
    double c_max = 1000.0;          // baseline coincidences per point
    double coherence_width_um = 30.0;
    double center_um = 0.0;         // dip position x0
    double integration_s = 5.0;
    bool poisson = true;
};

/// Coincidence counts around G(x) = C_max - A exp(-(x-x0)^2 / (2 w^2)) with
/// A = V * C_max.
ScanRecord simulate_hom_scan(const std::vector<double>& delays_um, const HomScanParams& params, Rng& rng);

struct HomFit {
    FitResult fit;        // params (c_max, amplitude, x0, width)
    double c_max = 0.0;
    double amplitude = 0.0;
    double x0 = 0.0;
    double width_um = 0.0;
    double visibility = 0.0;        // (C_max - C_min)/C_max = A / C_max
    double visibility_sigma = 0.0;
    bool clamped = false;           // visibility was clipped into [0, 1]
    bool degenerate = false;        // amplitude indistinguishable from zero
};

/// Grid-seeded nonlinear least squares of the Gaussian dip; needs >= 6 points.
HomFit fit_hom_dip(const ScanRecord& scan);

// --- Phase-reference voltage sweep ------------------------------------------

struct PhaseScanParams {
    double volts_per_radian = 0.8;
    double pairs_per_point = 1000.0;  // two-photon events per point
    PhaseSetting baseline;            // phases at zero applied voltage
    double integration_s = 10.0;
    bool poisson = true;
};

/// Cross-lab coincidence fringes with the swept phase linear in voltage:
/// channels C00, C01, C10, C11 with p00 = p11 = cos^2(.)/4 in antiphase with
/// p01 = p10.
ScanRecord simulate_phase_scan(const std::vector<double>& voltages, const PhaseScanParams& params, Rng& rng);

struct PhaseSetpoints {
    double v_zero = 0.0;    // voltage of a correlated-events maximum
    double v_pi = 0.0;      // half a fringe period away
    double period_volts = 0.0;
    std::vector<double> maxima;
    std::vector<double> minima;
    FitResult fit;          // sinusoid params (c0, contrast, scale, delta)
};

/// Fits C(v) = C0 (1 + k cos(v/s + delta)) to the correlated counts and
/// returns the extremal voltages. The zero-phase reference is the second
/// fitted maximum when the scan contains one, otherwise the first.
PhaseSetpoints find_phase_setpoints(const ScanRecord& scan);

// --- Detector-efficiency sweep ----------------------------------------------

struct EfficiencyScanParams {
    double volts_per_radian = 0.8;
    double pairs_per_point = 5000.0;
    std::array<double, 4> eta_true{1.0, 1.0, 1.0, 1.0};  // (00, 01, 10, 11)
    double integration_s = 10.0;
    bool poisson = true;
};

ScanRecord simulate_efficiency_scan(const std::vector<double>& voltages, const EfficiencyScanParams& params,
                                    Rng& rng);

/// Pairwise linear regression of each pattern against the brightest one;
/// efficiencies are the slope magnitudes normalized to max 1. Throws on
/// rank-deficient (constant) scans.
EfficiencyMap fit_relative_efficiencies(const ScanRecord& scan);

}  // namespace xorgame
