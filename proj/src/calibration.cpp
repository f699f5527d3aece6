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
#include "xorgame/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xorgame/numeric.hpp"
#include "xorgame/transition.hpp"

namespace xorgame {

void ScanRecord::validate() const {
    if (abscissa.size() < 2) {
        throw std::invalid_argument("scan needs at least two points");
    }
    for (std::size_t i = 1; i < abscissa.size(); ++i) {
        if (!(abscissa[i] > abscissa[i - 1])) {
            throw std::invalid_argument("scan abscissa must be strictly increasing");
        }
    }
    if (channels.size() != counts.size()) {
        throw std::invalid_argument("channel names and count columns disagree");
    }
    for (const auto& column : counts) {
        if (column.size() != abscissa.size()) {
            throw std::invalid_argument("count column length differs from abscissa");
        }
        for (double v : column) {
            if (v < 0.0) {
                throw std::invalid_argument("counts must be non-negative");
            }
            if (poisson && v != std::floor(v)) {
                throw std::invalid_argument("poisson-mode counts must be integers");
            }
        }
    }
}

namespace {

double draw_counts(double mean, bool poisson, Rng& rng) {
    if (mean < 0.0) mean = 0.0;
    return poisson ? static_cast<double>(rng.poisson(mean)) : mean;
}

// Gaussian-dip model: p = (c_max, amplitude, x0, width).
double gaussian_dip(double x, const Eigen::VectorXd& p) {
    const double dx = x - p[2];
    return p[0] - p[1] * std::exp(-dx * dx / (2.0 * p[3] * p[3]));
}

void gaussian_dip_jacobian(double x, const Eigen::VectorXd& p, Eigen::VectorXd& row) {
    const double dx = x - p[2];
    const double w2 = p[3] * p[3];
    const double e = std::exp(-dx * dx / (2.0 * w2));
    row[0] = 1.0;
    row[1] = -e;
    row[2] = -p[1] * e * dx / w2;
    row[3] = -p[1] * e * dx * dx / (w2 * p[3]);
}

// Fringe model: p = (c0, contrast, scale, delta), f = c0 (1 + k cos(v/s + delta)).
double sinusoid(double v, const Eigen::VectorXd& p) {
    return p[0] * (1.0 + p[1] * std::cos(v / p[2] + p[3]));
}

void sinusoid_jacobian(double v, const Eigen::VectorXd& p, Eigen::VectorXd& row) {
    const double theta = v / p[2] + p[3];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    row[0] = 1.0 + p[1] * c;
    row[1] = p[0] * c;
    row[2] = p[0] * p[1] * s * v / (p[2] * p[2]);
    row[3] = -p[0] * p[1] * s;
}

double model_sse(const std::vector<double>& x, const std::vector<double>& y, const Eigen::VectorXd& p,
                 double (*f)(double, const Eigen::VectorXd&)) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = f(x[i], p) - y[i];
        s += r * r;
    }
    return s;
}

}  // namespace

ScanRecord simulate_hom_scan(const std::vector<double>& delays_um, const HomScanParams& params, Rng& rng) {
    if (!(params.visibility >= 0.0 && params.visibility <= 1.0)) {
        throw std::invalid_argument("visibility must lie in [0, 1]");
    }
    if (!(params.c_max > 0.0) || !(params.coherence_width_um > 0.0)) {
        throw std::invalid_argument("c_max and coherence width must be positive");
    }
    ScanRecord scan;
    scan.abscissa = delays_um;
    scan.channels = {"coincidences"};
    scan.integration_s = params.integration_s;
    scan.poisson = params.poisson;
    std::vector<double> column;
    column.reserve(delays_um.size());
    const double amplitude = params.visibility * params.c_max;
    for (double x : delays_um) {
        const double dx = x - params.center_um;
        const double mean =
            params.c_max - amplitude * std::exp(-dx * dx / (2.0 * params.coherence_width_um * params.coherence_width_um));
        column.push_back(draw_counts(mean, params.poisson, rng));
    }
    scan.counts.push_back(std::move(column));
    scan.validate();
    return scan;
}

HomFit fit_hom_dip(const ScanRecord& scan) {
    scan.validate();
    if (scan.counts.size() != 1) {
        throw std::invalid_argument("HOM scan must carry a single coincidence channel");
    }
    const std::vector<double>& x = scan.abscissa;
    const std::vector<double>& y = scan.counts.front();
    if (x.size() < 6) {
        throw std::invalid_argument("HOM fit needs at least 6 points spanning the dip");
    }

    const double y_max = *std::max_element(y.begin(), y.end());
    const double y_min = *std::min_element(y.begin(), y.end());

    HomFit out;
    if (y_max == y_min) {
        // Flat data carries no dip; report zero visibility with no pretense
        // of precision.
        out.degenerate = true;
        out.c_max = y_max;
        out.amplitude = 0.0;
        out.visibility = 0.0;
        out.visibility_sigma = 1.0;
        out.fit.converged = true;
        out.fit.params = Eigen::Vector4d(y_max, 0.0, 0.5 * (x.front() + x.back()), x.back() - x.front());
        return out;
    }

    // Coarse grid over (x0, width) picks the least-squares seed.
    const double range = x.back() - x.front();
    Eigen::VectorXd best(4);
    double best_sse = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < 15; ++ix) {
        const double x0 = x.front() + range * (ix + 0.5) / 15.0;
        for (double width : {range / 40.0, range / 16.0, range / 8.0, range / 4.0}) {
            Eigen::VectorXd p(4);
            p << y_max, y_max - y_min, x0, width;
            const double s = model_sse(x, y, p, gaussian_dip);
            if (s < best_sse) {
                best_sse = s;
                best = p;
            }
        }
    }

    out.fit = levenberg_marquardt(x, y, best, gaussian_dip, gaussian_dip_jacobian);
    out.c_max = out.fit.params[0];
    out.amplitude = out.fit.params[1];
    out.x0 = out.fit.params[2];
    out.width_um = std::abs(out.fit.params[3]);

    // Dipless data can drive the fit into a sub-resolution spike or an
    // off-scan runaway; such results carry no visibility information.
    double min_spacing = range;
    for (std::size_t i = 1; i < x.size(); ++i) {
        min_spacing = std::min(min_spacing, x[i] - x[i - 1]);
    }
    const bool sane = out.fit.converged && out.width_um >= 0.25 * min_spacing &&
                      out.width_um <= 2.0 * range && std::abs(out.amplitude) <= 3.0 * (y_max - y_min) &&
                      out.x0 >= x.front() - range && out.x0 <= x.back() + range && out.c_max > 0.0;

    const double sigma_c = out.fit.uncertainties[0];
    const double sigma_a = out.fit.uncertainties[1];
    if (!sane || std::abs(out.amplitude) <= sigma_a) {
        out.degenerate = true;
        out.visibility = 0.0;
        out.visibility_sigma = std::max(1.0, sigma_a / std::max(std::abs(out.c_max), 1e-12));
        return out;
    }

    out.visibility = out.amplitude / out.c_max;
    // Delta method on V = A / C with the fitted (C, A) covariance block.
    const double dv_dc = -out.amplitude / (out.c_max * out.c_max);
    const double dv_da = 1.0 / out.c_max;
    const double var = dv_dc * dv_dc * sigma_c * sigma_c + dv_da * dv_da * sigma_a * sigma_a +
                       2.0 * dv_dc * dv_da * out.fit.covariance(0, 1);
    out.visibility_sigma = var > 0.0 ? std::sqrt(var) : 0.0;
    if (out.visibility < 0.0) {
        out.visibility = 0.0;
        out.clamped = true;
    } else if (out.visibility > 1.0) {
        out.visibility = 1.0;
        out.clamped = true;
    }
    return out;
}

ScanRecord simulate_phase_scan(const std::vector<double>& voltages, const PhaseScanParams& params, Rng& rng) {
    if (!(params.volts_per_radian > 0.0) || !(params.pairs_per_point > 0.0)) {
        throw std::invalid_argument("volts_per_radian and pairs_per_point must be positive");
    }
    ScanRecord scan;
    scan.abscissa = voltages;
    scan.channels = {"c00", "c01", "c10", "c11"};
    scan.integration_s = params.integration_s;
    scan.poisson = params.poisson;
    scan.counts.assign(4, {});
    for (auto& column : scan.counts) column.reserve(voltages.size());
    for (double v : voltages) {
        const PhaseSetting ps = params.baseline.with_theta_a_offset(v / params.volts_per_radian);
        const PairProbabilities p = analytic_pair_probabilities(ps);
        scan.counts[0].push_back(draw_counts(params.pairs_per_point * p.p00, params.poisson, rng));
        scan.counts[1].push_back(draw_counts(params.pairs_per_point * p.p01, params.poisson, rng));
        scan.counts[2].push_back(draw_counts(params.pairs_per_point * p.p10, params.poisson, rng));
        scan.counts[3].push_back(draw_counts(params.pairs_per_point * p.p11, params.poisson, rng));
    }
    scan.validate();
    return scan;
}

namespace {

FitResult fit_fringe(const std::vector<double>& x, const std::vector<double>& y) {
    const double y_max = *std::max_element(y.begin(), y.end());
    const double y_min = *std::min_element(y.begin(), y.end());
    const double mean = 0.5 * (y_max + y_min);
    if (y_max == y_min) {
        throw std::domain_error("fringe scan is constant; nothing to fit");
    }
    const double contrast = std::min(0.95, (y_max - y_min) / std::max(y_max + y_min, 1e-12));
    const double range = x.back() - x.front();

    Eigen::VectorXd best(4);
    double best_sse = std::numeric_limits<double>::infinity();
    // Seed grid: 0.5 .. 8 fringes across the scan, eight phase offsets.
    for (int cycles = 1; cycles <= 16; ++cycles) {
        const double scale = range / (kPi * cycles);  // cycles/2 full fringes
        for (int id = 0; id < 8; ++id) {
            Eigen::VectorXd p(4);
            p << mean, std::max(contrast, 0.1), scale, kTwoPi * id / 8.0;
            const double s = model_sse(x, y, p, sinusoid);
            if (s < best_sse) {
                best_sse = s;
                best = p;
            }
        }
    }
    return levenberg_marquardt(x, y, best, sinusoid, sinusoid_jacobian);
}

}  // namespace

PhaseSetpoints find_phase_setpoints(const ScanRecord& scan) {
    scan.validate();
    if (scan.counts.size() != 4) {
        throw std::invalid_argument("phase scan must carry the four coincidence channels");
    }
    // Correlated events: C00 + C11.
    std::vector<double> correlated(scan.abscissa.size());
    for (std::size_t i = 0; i < correlated.size(); ++i) {
        correlated[i] = scan.counts[0][i] + scan.counts[3][i];
    }

    PhaseSetpoints out;
    out.fit = fit_fringe(scan.abscissa, correlated);

    double c0 = out.fit.params[0];
    double k = out.fit.params[1];
    double s = out.fit.params[2];
    double delta = out.fit.params[3];
    (void)c0;
    // Canonical form: positive contrast and scale.
    if (s < 0.0) {
        s = -s;
        delta = -delta;
    }
    if (k < 0.0) {
        k = -k;
        delta += kPi;
    }
    out.period_volts = kTwoPi * s;

    const double v_lo = scan.abscissa.front();
    const double v_hi = scan.abscissa.back();
    if (v_hi - v_lo < out.period_volts * (1.0 - 1e-9)) {
        throw std::domain_error("phase scan spans less than one full fringe");
    }
    // Maxima at v = s (2 pi n - delta); minima half a period further.
    const double v_first_max = s * (kTwoPi * std::ceil((v_lo / s + delta) / kTwoPi) - delta);
    for (double v = v_first_max; v <= v_hi + 1e-12; v += out.period_volts) {
        out.maxima.push_back(v);
    }
    const double v_first_min =
        s * (kTwoPi * std::ceil((v_lo / s + delta - kPi) / kTwoPi) + kPi - delta);
    for (double v = v_first_min; v <= v_hi + 1e-12; v += out.period_volts) {
        out.minima.push_back(v);
    }
    if (out.maxima.empty() || out.minima.empty()) {
        throw std::domain_error("no extrema inside the scanned range");
    }
    // Reference at the second fitted peak when the scan contains one.
    out.v_zero = out.maxima.size() >= 2 ? out.maxima[1] : out.maxima[0];
    out.v_pi = out.v_zero + 0.5 * out.period_volts;
    if (out.v_pi > v_hi) {
        out.v_pi = out.v_zero - 0.5 * out.period_volts;
    }
    return out;
}

ScanRecord simulate_efficiency_scan(const std::vector<double>& voltages, const EfficiencyScanParams& params,
                                    Rng& rng) {
    if (!(params.volts_per_radian > 0.0) || !(params.pairs_per_point > 0.0)) {
        throw std::invalid_argument("volts_per_radian and pairs_per_point must be positive");
    }
    for (double eta : params.eta_true) {
        if (!(eta > 0.0)) {
            throw std::invalid_argument("true efficiencies must be positive");
        }
    }
    ScanRecord scan;
    scan.abscissa = voltages;
    scan.channels = {"c00", "c01", "c10", "c11"};
    scan.integration_s = params.integration_s;
    scan.poisson = params.poisson;
    scan.counts.assign(4, {});
    for (double v : voltages) {
        const PhaseSetting ps = PhaseSetting{}.with_theta_a_offset(v / params.volts_per_radian);
        const PairProbabilities p = analytic_pair_probabilities(ps);
        const std::array<double, 4> probs{p.p00, p.p01, p.p10, p.p11};
        for (int c = 0; c < 4; ++c) {
            scan.counts[c].push_back(
                draw_counts(params.pairs_per_point * params.eta_true[c] * probs[c], params.poisson, rng));
        }
    }
    scan.validate();
    return scan;
}

EfficiencyMap fit_relative_efficiencies(const ScanRecord& scan) {
    scan.validate();
    if (scan.counts.size() != 4) {
        throw std::invalid_argument("efficiency scan must carry the four coincidence channels");
    }
    const std::size_t n = scan.abscissa.size();

    // Reference pattern: the brightest one.
    int ref = 0;
    double best_total = -1.0;
    for (int c = 0; c < 4; ++c) {
        double total = 0.0;
        for (double v : scan.counts[c]) total += v;
        if (total > best_total) {
            best_total = total;
            ref = c;
        }
    }

    const std::vector<double>& rx = scan.counts[ref];
    double mean_ref = 0.0;
    for (double v : rx) mean_ref += v;
    mean_ref /= static_cast<double>(n);
    double var_ref = 0.0;
    for (double v : rx) var_ref += (v - mean_ref) * (v - mean_ref);
    if (var_ref <= 0.0) {
        throw std::domain_error("efficiency regression is rank-deficient: constant counts");
    }

    std::array<double, 4> slope{};
    for (int c = 0; c < 4; ++c) {
        if (c == ref) {
            slope[c] = 1.0;
            continue;
        }
        double cov = 0.0;
        double mean_c = 0.0;
        for (double v : scan.counts[c]) mean_c += v;
        mean_c /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            cov += (rx[i] - mean_ref) * (scan.counts[c][i] - mean_c);
        }
        // Same-phase patterns regress with positive slope, anti-phase ones
        // with negative slope; the magnitude is the efficiency ratio.
        slope[c] = std::abs(cov / var_ref);
        if (slope[c] <= 0.0) {
            throw std::domain_error("efficiency regression produced a zero slope");
        }
    }
    return EfficiencyMap::normalized(slope);
}

}  // namespace xorgame
