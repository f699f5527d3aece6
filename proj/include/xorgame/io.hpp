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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xorgame/errors.hpp"
#include "xorgame/game.hpp"
#include "xorgame/state_model.hpp"
#include "xorgame/stats.hpp"

namespace xorgame {

enum class DecoherenceKind { kLambda, kSigma, kPurity };

/// Full tool configuration; round-trips losslessly through the flat
/// key-value config file. Exactly one of lambda/sigma/purity may be set;
/// the other two are derived and echoed in output metadata.
struct RunConfig {
    // Optics: transmission probabilities of the four beamsplitter stages.
    double tau_test = 0.35;
    double tau_meas = 0.35;
    double tau_det_a = 0.5;
    double tau_det_b = 0.5;

    // Imperfections.
    double visibility = 0.94;
    DecoherenceKind decoherence_kind = DecoherenceKind::kLambda;
    double decoherence_value = 1.0;
    double lambda_meas = 1.0;

    // Game.
    int instances = 240;
    int instances_per_setting = 60;
    double mean_counts = 500.0;
    bool fixed_counts = false;

    // Analysis efficiency map (eta00, eta01, eta10, eta11).
    std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};

    // Calibration defaults.
    int hom_points = 61;
    double hom_range_um = 300.0;
    double hom_integration_s = 5.0;
    double hom_rate_cps = 200.0;
    double hom_coherence_um = 30.0;
    int phase_points = 150;
    double phase_integration_s = 10.0;
    double phase_rate_cps = 100.0;
    int eff_points = 150;
    double eff_integration_s = 10.0;
    double eff_rate_cps = 500.0;
    double volts_per_radian = 0.8;
    std::array<double, 4> calib_eta{1.0, 0.9, 0.8, 0.95};

    // Sweeps and ensembles.
    std::vector<double> purity_grid;  // empty: linspace(floor, 1, 9)
    int repetitions = 25;
    int confidence_horizon = 500;

    // Execution.
    std::uint64_t seed = 42;
    int workers = 1;
    std::string out_dir = "out";

    void validate() const;

    InterferometerConfig optics() const;
    DecoherenceSpec decoherence() const;
    ExperimentParams experiment() const;
    EfficiencyMap efficiency_map() const;
};

/// Parses the flat `key = value` format ('#' comments, blank lines ignored).
/// Unknown keys and repeated decoherence keys are ConfigErrors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Serialization that parse_config_text inverts losslessly.
std::string config_to_text(const RunConfig& config);

/// Metadata echoed at the top of every output file: config snapshot plus the
/// derived decoherence trio.
std::vector<std::pair<std::string, std::string>> config_metadata(const RunConfig& config);

/// 17-significant-digit decimal form (bit-faithful round trip).
std::string format_double(double v);

/// CSV with `# key = value` metadata lines before the header row.
class CsvTable {
  public:
    void add_metadata(const std::string& key, const std::string& value);
    void set_header(const std::vector<std::string>& columns);
    void add_row(const std::vector<std::string>& cells);
    std::string to_string() const;

  private:
    std::vector<std::pair<std::string, std::string>> metadata_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(std::uint64_t v);
std::string cell(int v);

/// Single-document JSON form of a run, config snapshot embedded. The
/// unobservable double-click tallies live under "simulation_truth".
std::string run_record_to_json(const RunRecord& record, const RunConfig& config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace xorgame
