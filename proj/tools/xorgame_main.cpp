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
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "xorgame/calibration.hpp"
#include "xorgame/game.hpp"
#include "xorgame/io.hpp"
#include "xorgame/numeric.hpp"
#include "xorgame/parallel.hpp"
#include "xorgame/state_model.hpp"
#include "xorgame/stats.hpp"
#include "xorgame/version.hpp"

namespace {

using namespace xorgame;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    }
    return v;
}

std::uint64_t derived_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ (0x9e3779b97f4a7c15ull * (index + 1)));
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return config.out_dir + "/" + name;
}

void attach_config_metadata(CsvTable& table, const RunConfig& config) {
    for (const auto& [key, value] : config_metadata(config)) {
        table.add_metadata(key, value);
    }
}

// --- analytic -----------------------------------------------------------

int cmd_analytic(const RunConfig& config) {
    const InterferometerConfig optics = config.optics();
    const DecoherenceSpec deco = config.decoherence();

    CsvTable table;
    attach_config_metadata(table, config);
    table.set_header({"label", "lambda", "visibility", "purity", "pwin", "note"});

    const double p_config = pwin_lambda(deco.lambda, config.visibility, optics);
    table.add_row({"config", cell(deco.lambda), cell(config.visibility), cell(deco.purity),
                   cell(p_config), "closed form at the configured parameters"});
    const double p95 = pwin_lambda(deco.lambda, 0.95, optics);
    table.add_row({"visibility-0.95", cell(deco.lambda), cell(0.95), cell(deco.purity), cell(p95),
                   "one visibility sigma up; rounds to 0.7162"});
    table.add_row({"perfect-visibility", cell(deco.lambda), cell(1.0), cell(deco.purity),
                   cell(pwin_lambda(deco.lambda, 1.0, optics)), "same splitters, V = 1"});
    table.add_row({"classical", cell(0.0), cell(config.visibility),
                   cell(purity_floor(optics.prep_test)), cell(0.5), "fully dephased test photon"});
    table.add_row({"ideal", cell(1.0), cell(1.0), cell(1.0),
                   cell(pwin_lambda(1.0, 1.0, InterferometerConfig::balanced())),
                   "balanced splitters, pure states, V = 1"});

    write_text_file(out_path(config, "analytic.csv"), table.to_string());
    std::printf("P_win(config)           = %.6f\n", p_config);
    std::printf("P_win(V = 0.95)         = %.6f\n", p95);
    std::printf("P_win(ideal, balanced)  = %.6f\n", 0.75);
    std::printf("wrote %s\n", out_path(config, "analytic.csv").c_str());
    return 0;
}

// --- run ------------------------------------------------------------------

int cmd_run(const RunConfig& config) {
    const RunRecord record = run_experiment(config.experiment());
    const EfficiencyMap eta = config.efficiency_map();
    const InterferometerConfig optics = config.optics();

    CsvTable table;
    attach_config_metadata(table, config);
    table.set_header({"instance", "x", "y", "phi_x", "rounds", "c00", "c01", "c10", "c11",
                      "inlab_alice", "inlab_bob", "correlated", "anticorrelated", "win_rate"});
    double sum = 0.0, sum_sq = 0.0;
    std::size_t rated = 0;
    for (const InstanceRecord& inst : record.instances) {
        std::string win_rate_cell;
        if (inst.cross_total() > 0) {
            const double rate = normalized_win_rate(inst, eta, optics);
            win_rate_cell = cell(rate);
            sum += rate;
            sum_sq += rate * rate;
            ++rated;
        }
        table.add_row({cell(inst.index), cell(inst.x), cell(inst.y), cell(inst.phi_x_applied),
                       cell(inst.rounds), cell(inst.cross[0]), cell(inst.cross[1]), cell(inst.cross[2]),
                       cell(inst.cross[3]), cell(inst.inlab_alice), cell(inst.inlab_bob),
                       cell(inst.cross[0] + inst.cross[3]), cell(inst.cross[1] + inst.cross[2]),
                       win_rate_cell});
    }
    write_text_file(out_path(config, "instances.csv"), table.to_string());
    write_text_file(out_path(config, "run_record.json"), run_record_to_json(record, config));

    const double mean = rated > 0 ? sum / static_cast<double>(rated) : 0.0;
    double stddev = 0.0;
    if (rated > 1) {
        const double var = (sum_sq - sum * mean) / (static_cast<double>(rated) - 1.0);
        stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    const double model = pwin_lambda(config.decoherence().lambda, config.visibility, optics);
    std::printf("instances               = %zu\n", record.instances.size());
    std::printf("mean win rate           = %.6f +- %.6f (per instance)\n", mean, stddev);
    std::printf("model P_win             = %.6f\n", model);
    std::printf("wrote %s\n", out_path(config, "instances.csv").c_str());
    std::printf("wrote %s\n", out_path(config, "run_record.json").c_str());
    return 0;
}

// --- purity sweep ----------------------------------------------------------

int cmd_purity_sweep(const RunConfig& config) {
    const InterferometerConfig optics = config.optics();
    const EfficiencyMap eta = config.efficiency_map();
    std::vector<double> grid = config.purity_grid;
    if (grid.empty()) {
        grid = linspace(purity_floor(optics.prep_test), 1.0, 9);
    }

    CsvTable table;
    attach_config_metadata(table, config);
    table.set_header({"purity", "lambda", "sigma", "n_instances", "mean_win_rate", "std_win_rate",
                      "stderr_win_rate", "model_pwin"});

    std::printf("%10s %12s %12s %12s\n", "purity", "mean", "stderr", "model");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const DecoherenceSpec deco = DecoherenceSpec::from_purity(grid[i], optics.prep_test);
        ExperimentParams params = config.experiment();
        params.sigma = deco.sigma;
        params.master_seed = derived_seed(config.seed, i);
        const RunRecord record = run_experiment(params);

        double sum = 0.0, sum_sq = 0.0;
        std::size_t rated = 0;
        for (const InstanceRecord& inst : record.instances) {
            if (inst.cross_total() == 0) continue;
            const double rate = normalized_win_rate(inst, eta, optics);
            sum += rate;
            sum_sq += rate * rate;
            ++rated;
        }
        const double mean = sum / static_cast<double>(rated);
        const double var = (sum_sq - sum * mean) / (static_cast<double>(rated) - 1.0);
        const double stddev = var > 0.0 ? std::sqrt(var) : 0.0;
        const double stderr_mean = stddev / std::sqrt(static_cast<double>(rated));
        const double model = pwin_purity(grid[i], config.visibility, optics);

        table.add_row({cell(grid[i]), cell(deco.lambda), cell(deco.sigma), cell(std::uint64_t{rated}),
                       cell(mean), cell(stddev), cell(stderr_mean), cell(model)});
        std::printf("%10.6f %12.6f %12.6f %12.6f\n", grid[i], mean, stderr_mean, model);
    }
    write_text_file(out_path(config, "purity_sweep.csv"), table.to_string());
    std::printf("wrote %s\n", out_path(config, "purity_sweep.csv").c_str());
    return 0;
}

// --- confidence -------------------------------------------------------------

int cmd_confidence(const RunConfig& config) {
    const ExperimentParams params = config.experiment();

    std::vector<std::vector<ConfidenceResult>> streams(static_cast<std::size_t>(config.repetitions));
    parallel_for(streams.size(), config.workers, [&](std::size_t rep) {
        const std::vector<RoundResult> events = simulate_event_stream(params, rep);
        Rng discard = Rng::substream(config.seed, Stream::kDiscard, rep);
        streams[rep] = confidence_event_stream(events, config.visibility, discard);
    });

    std::size_t horizon = static_cast<std::size_t>(config.confidence_horizon);
    for (const auto& stream : streams) horizon = std::min(horizon, stream.size());
    if (horizon < 2) {
        throw ConfigError("confidence horizon too short: streams carry fewer than 2 retained events");
    }

    CsvTable events_table;
    attach_config_metadata(events_table, config);
    events_table.add_metadata("repetitions", std::to_string(config.repetitions));
    events_table.set_header({"repetition", "event_index", "n_games", "n_wins", "p_value", "confidence"});
    std::vector<std::vector<double>> trajectories(streams.size());
    for (std::size_t rep = 0; rep < streams.size(); ++rep) {
        trajectories[rep].resize(horizon);
        for (std::size_t k = 0; k < horizon; ++k) {
            const ConfidenceResult& r = streams[rep][k];
            trajectories[rep][k] = r.confidence;
            events_table.add_row({cell(static_cast<std::uint64_t>(rep)),
                                  cell(static_cast<std::uint64_t>(k + 1)), cell(r.n_games),
                                  cell(r.n_wins), cell(r.p_value), cell(r.confidence)});
        }
    }

    const std::vector<EventStats> stats = confidence_curve_stats(trajectories);
    std::vector<double> medians;
    medians.reserve(stats.size());
    for (const auto& s : stats) medians.push_back(s.median);
    const LogLinearFit decay = fit_residual_decay(medians);

    std::size_t crossing = 0;
    for (std::size_t k = 0; k < stats.size(); ++k) {
        if (stats[k].median > 0.99) {
            crossing = k + 1;
            break;
        }
    }

    CsvTable stats_table;
    attach_config_metadata(stats_table, config);
    stats_table.add_metadata("repetitions", std::to_string(config.repetitions));
    stats_table.add_metadata("quartile_convention", "Tukey hinges, midpoint on ties");
    stats_table.add_metadata("median_crossing_0.99", std::to_string(crossing));
    stats_table.set_header({"event_index", "median", "q1", "q3", "n_outliers", "outliers"});
    for (std::size_t k = 0; k < stats.size(); ++k) {
        std::string outliers;
        for (std::size_t j = 0; j < stats[k].outliers.size(); ++j) {
            if (j > 0) outliers += ";";
            outliers += format_double(stats[k].outliers[j]);
        }
        stats_table.add_row({cell(static_cast<std::uint64_t>(k + 1)), cell(stats[k].median),
                             cell(stats[k].q1), cell(stats[k].q3),
                             cell(static_cast<std::uint64_t>(stats[k].outliers.size())), outliers});
    }

    CsvTable residual_table;
    attach_config_metadata(residual_table, config);
    residual_table.add_metadata("decay_slope", format_double(decay.slope));
    residual_table.add_metadata("decay_r_squared", format_double(decay.r_squared));
    residual_table.set_header({"event_index", "residual"});
    for (std::size_t k = 0; k < medians.size(); ++k) {
        residual_table.add_row({cell(static_cast<std::uint64_t>(k + 1)), cell(1.0 - medians[k])});
    }

    write_text_file(out_path(config, "confidence_events.csv"), events_table.to_string());
    write_text_file(out_path(config, "confidence_stats.csv"), stats_table.to_string());
    write_text_file(out_path(config, "confidence_residual.csv"), residual_table.to_string());

    if (crossing > 0) {
        std::printf("median confidence first exceeds 0.99 at event %zu\n", crossing);
    } else {
        std::printf("median confidence stays below 0.99 over %zu events\n", horizon);
    }
    std::printf("residual decay: slope %.4f per event, R^2 = %.4f\n", decay.slope, decay.r_squared);
    std::printf("wrote %s\n", out_path(config, "confidence_stats.csv").c_str());
    return 0;
}

// --- calibrate ---------------------------------------------------------------

void write_scan_csv(const RunConfig& config, const std::string& name, const ScanRecord& scan,
                    const std::string& abscissa_name,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
    CsvTable table;
    attach_config_metadata(table, config);
    for (const auto& [key, value] : extra) table.add_metadata(key, value);
    table.add_metadata("integration_s", format_double(scan.integration_s));
    std::vector<std::string> header{abscissa_name};
    header.insert(header.end(), scan.channels.begin(), scan.channels.end());
    table.set_header(header);
    for (std::size_t i = 0; i < scan.abscissa.size(); ++i) {
        std::vector<std::string> row{cell(scan.abscissa[i])};
        for (const auto& column : scan.counts) {
            row.push_back(cell(static_cast<std::uint64_t>(column[i])));
        }
        table.add_row(row);
    }
    write_text_file(out_path(config, name), table.to_string());
}

int cmd_calibrate(const RunConfig& config) {
    // HOM delay scan.
    HomScanParams hom;
    hom.visibility = config.visibility;
    hom.c_max = config.hom_rate_cps * config.hom_integration_s;
    hom.coherence_width_um = config.hom_coherence_um;
    hom.center_um = 0.0;
    hom.integration_s = config.hom_integration_s;
    Rng hom_rng = Rng::substream(config.seed, Stream::kTrial, 1);
    const ScanRecord hom_scan = simulate_hom_scan(
        linspace(-0.5 * config.hom_range_um, 0.5 * config.hom_range_um, config.hom_points), hom, hom_rng);
    const HomFit hom_fit = fit_hom_dip(hom_scan);
    if (!hom_fit.fit.converged) {
        throw ConvergenceError("HOM dip fit did not converge");
    }

    // Phase-reference sweep.
    PhaseScanParams phase;
    phase.volts_per_radian = config.volts_per_radian;
    phase.pairs_per_point = config.phase_rate_cps * config.phase_integration_s;
    phase.integration_s = config.phase_integration_s;
    Rng phase_rng = Rng::substream(config.seed, Stream::kTrial, 2);
    const double span = 2.4 * kTwoPi * config.volts_per_radian;
    const ScanRecord phase_scan =
        simulate_phase_scan(linspace(0.0, span, config.phase_points), phase, phase_rng);
    const PhaseSetpoints setpoints = find_phase_setpoints(phase_scan);
    if (!setpoints.fit.converged) {
        throw ConvergenceError("phase fringe fit did not converge");
    }

    // Detector-efficiency sweep.
    EfficiencyScanParams eff;
    eff.volts_per_radian = config.volts_per_radian;
    eff.pairs_per_point = config.eff_rate_cps * config.eff_integration_s;
    eff.eta_true = config.calib_eta;
    eff.integration_s = config.eff_integration_s;
    Rng eff_rng = Rng::substream(config.seed, Stream::kTrial, 3);
    const ScanRecord eff_scan =
        simulate_efficiency_scan(linspace(0.0, span, config.eff_points), eff, eff_rng);
    const EfficiencyMap eta = fit_relative_efficiencies(eff_scan);

    write_scan_csv(config, "calib_hom.csv", hom_scan, "delay_um",
                   {{"fit_c_max", format_double(hom_fit.c_max)},
                    {"fit_amplitude", format_double(hom_fit.amplitude)},
                    {"fit_x0_um", format_double(hom_fit.x0)},
                    {"fit_width_um", format_double(hom_fit.width_um)},
                    {"fit_visibility", format_double(hom_fit.visibility)},
                    {"fit_visibility_sigma", format_double(hom_fit.visibility_sigma)}});
    write_scan_csv(config, "calib_phase.csv", phase_scan, "voltage_v",
                   {{"setpoint_v_zero", format_double(setpoints.v_zero)},
                    {"setpoint_v_pi", format_double(setpoints.v_pi)},
                    {"fringe_period_v", format_double(setpoints.period_volts)}});
    write_scan_csv(config, "calib_efficiency.csv", eff_scan, "voltage_v",
                   {{"eta_00", format_double(eta.eta[0])},
                    {"eta_01", format_double(eta.eta[1])},
                    {"eta_10", format_double(eta.eta[2])},
                    {"eta_11", format_double(eta.eta[3])}});

    CsvTable summary;
    attach_config_metadata(summary, config);
    summary.set_header({"quantity", "value", "uncertainty"});
    summary.add_row({"hom_visibility", cell(hom_fit.visibility), cell(hom_fit.visibility_sigma)});
    summary.add_row({"phase_v_zero", cell(setpoints.v_zero), ""});
    summary.add_row({"phase_v_pi", cell(setpoints.v_pi), ""});
    summary.add_row({"fringe_period_v", cell(setpoints.period_volts), ""});
    summary.add_row({"eta_00", cell(eta.eta[0]), ""});
    summary.add_row({"eta_01", cell(eta.eta[1]), ""});
    summary.add_row({"eta_10", cell(eta.eta[2]), ""});
    summary.add_row({"eta_11", cell(eta.eta[3]), ""});
    write_text_file(out_path(config, "calibration_summary.csv"), summary.to_string());

    std::printf("HOM visibility          = %.4f +- %.4f\n", hom_fit.visibility, hom_fit.visibility_sigma);
    std::printf("phase setpoints         : v0 = %.4f V, vpi = %.4f V (period %.4f V)\n",
                setpoints.v_zero, setpoints.v_pi, setpoints.period_volts);
    std::printf("relative efficiencies   : %.4f, %.4f, %.4f, %.4f\n", eta.eta[0], eta.eta[1],
                eta.eta[2], eta.eta[3]);
    std::printf("wrote %s\n", out_path(config, "calibration_summary.csv").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(xorgame::kArtifactName) +
                 " - nonlocal-interferometer XOR game simulator and analysis toolkit"};
    app.set_version_flag("--version", std::string(xorgame::kArtifactVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 0;
    app.add_option("--config", config_path, "configuration file (flat key = value)");
    auto* seed_opt = app.add_option("--seed", seed, "master seed override");
    auto* out_opt = app.add_option("--out", out_dir, "output directory override");
    auto* workers_opt = app.add_option("--workers", workers, "worker thread override");

    auto* analytic = app.add_subcommand("analytic", "closed-form winning probabilities");
    auto* run = app.add_subcommand("run", "simulate one experimental run");
    auto* sweep = app.add_subcommand("purity-sweep", "win rate versus test-photon purity");
    std::string grid_spec;
    sweep->add_option("--grid", grid_spec, "comma-separated purity grid");
    auto* confidence_cmd = app.add_subcommand("confidence", "median confidence trajectories");
    int repetitions = 0;
    confidence_cmd->add_option("--repetitions", repetitions, "number of repetitions");
    auto* calibrate = app.add_subcommand("calibrate", "simulate and fit the calibration procedures");

    CLI11_PARSE(app, argc, argv);

    try {
        xorgame::RunConfig config;
        if (!config_path.empty()) {
            config = xorgame::load_config_file(config_path);
        }
        if (*seed_opt) config.seed = seed;
        if (*out_opt) config.out_dir = out_dir;
        if (*workers_opt) config.workers = workers;
        if (repetitions > 0) config.repetitions = repetitions;
        if (!grid_spec.empty()) {
            config.purity_grid.clear();
            std::stringstream ss(grid_spec);
            std::string item;
            while (std::getline(ss, item, ',')) {
                config.purity_grid.push_back(std::strtod(item.c_str(), nullptr));
            }
        }
        // Environment override for the output directory only.
        if (const char* env_out = std::getenv("XORGAME_OUT"); env_out != nullptr && !*out_opt) {
            config.out_dir = env_out;
        }
        config.validate();
        xorgame::ensure_directory(config.out_dir);

        if (*analytic) return cmd_analytic(config);
        if (*run) return cmd_run(config);
        if (*sweep) return cmd_purity_sweep(config);
        if (*confidence_cmd) return cmd_confidence(config);
        if (*calibrate) return cmd_calibrate(config);
        return 1;
    } catch (const xorgame::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const xorgame::ConvergenceError& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 3;
    } catch (const xorgame::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
