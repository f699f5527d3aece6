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
#include "xorgame/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "xorgame/numeric.hpp"
#include "xorgame/version.hpp"

namespace xorgame {

void RunConfig::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(tau_test) || !in_unit(tau_meas) || !in_unit(tau_det_a) || !in_unit(tau_det_b)) {
        throw ConfigError("beamsplitter transmissions must lie in [0, 1]");
    }
    if (!in_unit(visibility)) throw ConfigError("visibility must lie in [0, 1]");
    if (!in_unit(lambda_meas)) throw ConfigError("lambda_meas must lie in [0, 1]");
    switch (decoherence_kind) {
        case DecoherenceKind::kLambda:
            if (!in_unit(decoherence_value)) throw ConfigError("lambda must lie in [0, 1]");
            break;
        case DecoherenceKind::kSigma:
            if (decoherence_value < 0.0) throw ConfigError("sigma must be non-negative");
            break;
        case DecoherenceKind::kPurity: {
            const double floor = purity_floor(BeamsplitterSpec::from_transmission(tau_test));
            if (decoherence_value < floor - kLinAlgTol || decoherence_value > 1.0 + kLinAlgTol) {
                throw ConfigError("purity must lie in [T^2 + R^2, 1] = [" + format_double(floor) + ", 1]");
            }
            break;
        }
    }
    if (instances_per_setting <= 0) throw ConfigError("instances_per_setting must be positive");
    if (instances != 4 * instances_per_setting) {
        throw ConfigError("instances must equal 4 * instances_per_setting");
    }
    if (!(mean_counts > 0.0)) throw ConfigError("mean_counts must be positive");
    for (double v : eta) {
        if (!(v > 0.0)) throw ConfigError("eta entries must be positive");
    }
    for (double v : calib_eta) {
        if (!(v > 0.0)) throw ConfigError("calib_eta entries must be positive");
    }
    if (hom_points < 6) throw ConfigError("hom_points must be at least 6");
    if (!(hom_range_um > 0.0) || !(hom_integration_s > 0.0) || !(hom_rate_cps > 0.0) ||
        !(hom_coherence_um > 0.0)) {
        throw ConfigError("HOM scan parameters must be positive");
    }
    if (phase_points < 8 || eff_points < 8) throw ConfigError("scan point counts must be at least 8");
    if (!(phase_integration_s > 0.0) || !(phase_rate_cps > 0.0) || !(eff_integration_s > 0.0) ||
        !(eff_rate_cps > 0.0) || !(volts_per_radian > 0.0)) {
        throw ConfigError("scan parameters must be positive");
    }
    if (!purity_grid.empty()) {
        const double floor = purity_floor(BeamsplitterSpec::from_transmission(tau_test));
        for (double p : purity_grid) {
            if (p < floor - kLinAlgTol || p > 1.0 + kLinAlgTol) {
                throw ConfigError("purity_grid entry outside [" + format_double(floor) + ", 1]");
            }
        }
    }
    if (repetitions < 2) throw ConfigError("repetitions must be at least 2");
    if (confidence_horizon < 1) throw ConfigError("confidence_horizon must be positive");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

InterferometerConfig RunConfig::optics() const {
    InterferometerConfig cfg;
    cfg.prep_test = BeamsplitterSpec::from_transmission(tau_test);
    cfg.prep_meas = BeamsplitterSpec::from_transmission(tau_meas);
    cfg.det_alice = BeamsplitterSpec::from_transmission(tau_det_a);
    cfg.det_bob = BeamsplitterSpec::from_transmission(tau_det_b);
    return cfg;
}

DecoherenceSpec RunConfig::decoherence() const {
    const BeamsplitterSpec bs = BeamsplitterSpec::from_transmission(tau_test);
    switch (decoherence_kind) {
        case DecoherenceKind::kSigma:
            return DecoherenceSpec::from_sigma(decoherence_value, bs);
        case DecoherenceKind::kPurity:
            return DecoherenceSpec::from_purity(decoherence_value, bs);
        case DecoherenceKind::kLambda:
        default:
            return DecoherenceSpec::from_lambda(decoherence_value, bs);
    }
}

ExperimentParams RunConfig::experiment() const {
    ExperimentParams params;
    params.optics = optics();
    params.visibility = visibility;
    params.sigma = decoherence().sigma;
    params.lambda_meas = lambda_meas;
    params.instances_per_setting = instances_per_setting;
    params.mean_counts = mean_counts;
    params.poisson_counts = !fixed_counts;
    params.master_seed = seed;
    params.workers = workers;
    return params;
}

EfficiencyMap RunConfig::efficiency_map() const { return EfficiencyMap::normalized(eta); }

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("key '" + key + "': trailing junk in '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return i;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse unsigned integer from '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
    std::vector<double> grid;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto begin = item.find_first_not_of(" \t");
        const auto end = item.find_last_not_of(" \t");
        if (begin == std::string::npos) continue;
        grid.push_back(parse_double(key, item.substr(begin, end - begin + 1)));
    }
    return grid;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    int decoherence_keys = 0;
    std::stringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_number) + ": empty key or value");
        }

        if (key == "tau_test") config.tau_test = parse_double(key, value);
        else if (key == "tau_meas") config.tau_meas = parse_double(key, value);
        else if (key == "tau_det_a") config.tau_det_a = parse_double(key, value);
        else if (key == "tau_det_b") config.tau_det_b = parse_double(key, value);
        else if (key == "visibility") config.visibility = parse_double(key, value);
        else if (key == "lambda" || key == "sigma" || key == "purity") {
            if (++decoherence_keys > 1) {
                throw ConfigError("at most one of lambda/sigma/purity may be set");
            }
            config.decoherence_value = parse_double(key, value);
            config.decoherence_kind = key == "lambda"  ? DecoherenceKind::kLambda
                                      : key == "sigma" ? DecoherenceKind::kSigma
                                                       : DecoherenceKind::kPurity;
        } else if (key == "lambda_meas") config.lambda_meas = parse_double(key, value);
        else if (key == "instances") config.instances = parse_int(key, value);
        else if (key == "instances_per_setting") config.instances_per_setting = parse_int(key, value);
        else if (key == "mean_counts") config.mean_counts = parse_double(key, value);
        else if (key == "fixed_counts") config.fixed_counts = parse_bool(key, value);
        else if (key == "eta_00") config.eta[0] = parse_double(key, value);
        else if (key == "eta_01") config.eta[1] = parse_double(key, value);
        else if (key == "eta_10") config.eta[2] = parse_double(key, value);
        else if (key == "eta_11") config.eta[3] = parse_double(key, value);
        else if (key == "hom_points") config.hom_points = parse_int(key, value);
        else if (key == "hom_range_um") config.hom_range_um = parse_double(key, value);
        else if (key == "hom_integration_s") config.hom_integration_s = parse_double(key, value);
        else if (key == "hom_rate_cps") config.hom_rate_cps = parse_double(key, value);
        else if (key == "hom_coherence_um") config.hom_coherence_um = parse_double(key, value);
        else if (key == "phase_points") config.phase_points = parse_int(key, value);
        else if (key == "phase_integration_s") config.phase_integration_s = parse_double(key, value);
        else if (key == "phase_rate_cps") config.phase_rate_cps = parse_double(key, value);
        else if (key == "eff_points") config.eff_points = parse_int(key, value);
        else if (key == "eff_integration_s") config.eff_integration_s = parse_double(key, value);
        else if (key == "eff_rate_cps") config.eff_rate_cps = parse_double(key, value);
        else if (key == "volts_per_radian") config.volts_per_radian = parse_double(key, value);
        else if (key == "calib_eta_00") config.calib_eta[0] = parse_double(key, value);
        else if (key == "calib_eta_01") config.calib_eta[1] = parse_double(key, value);
        else if (key == "calib_eta_10") config.calib_eta[2] = parse_double(key, value);
        else if (key == "calib_eta_11") config.calib_eta[3] = parse_double(key, value);
        else if (key == "purity_grid") config.purity_grid = parse_grid(key, value);
        else if (key == "repetitions") config.repetitions = parse_int(key, value);
        else if (key == "confidence_horizon") config.confidence_horizon = parse_int(key, value);
        else if (key == "seed") config.seed = parse_u64(key, value);
        else if (key == "workers") config.workers = parse_int(key, value);
        else if (key == "out_dir") config.out_dir = value;
        else throw ConfigError("unknown config key '" + key + "'");
    }
    config.validate();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

std::string config_to_text(const RunConfig& config) {
    std::ostringstream out;
    out << "# " << kArtifactName << " configuration\n";
    out << "tau_test = " << format_double(config.tau_test) << "\n";
    out << "tau_meas = " << format_double(config.tau_meas) << "\n";
    out << "tau_det_a = " << format_double(config.tau_det_a) << "\n";
    out << "tau_det_b = " << format_double(config.tau_det_b) << "\n";
    out << "visibility = " << format_double(config.visibility) << "\n";
    switch (config.decoherence_kind) {
        case DecoherenceKind::kLambda: out << "lambda = "; break;
        case DecoherenceKind::kSigma: out << "sigma = "; break;
        case DecoherenceKind::kPurity: out << "purity = "; break;
    }
    out << format_double(config.decoherence_value) << "\n";
    out << "lambda_meas = " << format_double(config.lambda_meas) << "\n";
    out << "instances = " << config.instances << "\n";
    out << "instances_per_setting = " << config.instances_per_setting << "\n";
    out << "mean_counts = " << format_double(config.mean_counts) << "\n";
    out << "fixed_counts = " << (config.fixed_counts ? "true" : "false") << "\n";
    const char* eta_keys[4] = {"eta_00", "eta_01", "eta_10", "eta_11"};
    for (int i = 0; i < 4; ++i) {
        out << eta_keys[i] << " = " << format_double(config.eta[i]) << "\n";
    }
    out << "hom_points = " << config.hom_points << "\n";
    out << "hom_range_um = " << format_double(config.hom_range_um) << "\n";
    out << "hom_integration_s = " << format_double(config.hom_integration_s) << "\n";
    out << "hom_rate_cps = " << format_double(config.hom_rate_cps) << "\n";
    out << "hom_coherence_um = " << format_double(config.hom_coherence_um) << "\n";
    out << "phase_points = " << config.phase_points << "\n";
    out << "phase_integration_s = " << format_double(config.phase_integration_s) << "\n";
    out << "phase_rate_cps = " << format_double(config.phase_rate_cps) << "\n";
    out << "eff_points = " << config.eff_points << "\n";
    out << "eff_integration_s = " << format_double(config.eff_integration_s) << "\n";
    out << "eff_rate_cps = " << format_double(config.eff_rate_cps) << "\n";
    out << "volts_per_radian = " << format_double(config.volts_per_radian) << "\n";
    const char* calib_keys[4] = {"calib_eta_00", "calib_eta_01", "calib_eta_10", "calib_eta_11"};
    for (int i = 0; i < 4; ++i) {
        out << calib_keys[i] << " = " << format_double(config.calib_eta[i]) << "\n";
    }
    if (!config.purity_grid.empty()) {
        out << "purity_grid = ";
        for (std::size_t i = 0; i < config.purity_grid.size(); ++i) {
            if (i > 0) out << ",";
            out << format_double(config.purity_grid[i]);
        }
        out << "\n";
    }
    out << "repetitions = " << config.repetitions << "\n";
    out << "confidence_horizon = " << config.confidence_horizon << "\n";
    out << "seed = " << config.seed << "\n";
    out << "workers = " << config.workers << "\n";
    out << "out_dir = " << config.out_dir << "\n";
    return out.str();
}

std::vector<std::pair<std::string, std::string>> config_metadata(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("artifact", std::string(kArtifactName) + " " + kArtifactVersion);
    meta.emplace_back("tau_test", format_double(config.tau_test));
    meta.emplace_back("tau_meas", format_double(config.tau_meas));
    meta.emplace_back("tau_det_a", format_double(config.tau_det_a));
    meta.emplace_back("tau_det_b", format_double(config.tau_det_b));
    meta.emplace_back("visibility", format_double(config.visibility));
    const DecoherenceSpec spec = config.decoherence();
    meta.emplace_back("lambda", format_double(spec.lambda));
    meta.emplace_back("sigma", format_double(spec.sigma));
    meta.emplace_back("purity", format_double(spec.purity));
    meta.emplace_back("lambda_meas", format_double(config.lambda_meas));
    meta.emplace_back("instances", std::to_string(config.instances));
    meta.emplace_back("instances_per_setting", std::to_string(config.instances_per_setting));
    meta.emplace_back("mean_counts", format_double(config.mean_counts));
    meta.emplace_back("fixed_counts", config.fixed_counts ? "true" : "false");
    meta.emplace_back("seed", std::to_string(config.seed));
    return meta;
}

void CsvTable::add_metadata(const std::string& key, const std::string& value) {
    metadata_.emplace_back(key, value);
}

void CsvTable::set_header(const std::vector<std::string>& columns) { header_ = columns; }

void CsvTable::add_row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (const auto& [key, value] : metadata_) {
        out << "# " << key << " = " << value << "\n";
    }
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i > 0) out << ",";
        out << header_[i];
    }
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }

std::string run_record_to_json(const RunRecord& record, const RunConfig& config) {
    nlohmann::ordered_json root;
    root["artifact"] = kArtifactName;
    root["version"] = kArtifactVersion;

    nlohmann::ordered_json config_json;
    for (const auto& [key, value] : config_metadata(config)) {
        if (key == "artifact") continue;
        config_json[key] = value;
    }
    root["config"] = config_json;
    root["master_seed"] = record.params.master_seed;

    nlohmann::ordered_json schedule = nlohmann::ordered_json::array();
    for (const auto& [x, y] : record.schedule.settings) {
        schedule.push_back({x, y});
    }
    root["schedule"] = schedule;

    const EfficiencyMap eta = config.efficiency_map();
    const InterferometerConfig optics = config.optics();

    nlohmann::ordered_json instances = nlohmann::ordered_json::array();
    double sum_rate = 0.0;
    double sum_rate_sq = 0.0;
    std::size_t rated = 0;
    std::uint64_t total_rounds = 0;
    for (const InstanceRecord& inst : record.instances) {
        nlohmann::ordered_json j;
        j["index"] = inst.index;
        j["x"] = inst.x;
        j["y"] = inst.y;
        j["phi_x_applied"] = inst.phi_x_applied;
        j["t_start_s"] = inst.t_start_s;
        j["rounds"] = inst.rounds;
        j["c00"] = inst.cross[0];
        j["c01"] = inst.cross[1];
        j["c10"] = inst.cross[2];
        j["c11"] = inst.cross[3];
        j["inlab_alice"] = inst.inlab_alice;
        j["inlab_bob"] = inst.inlab_bob;
        // Not observable with non-photon-number-resolving detectors; kept
        // out of every analysis path.
        j["simulation_truth"] = {{"unobservable", true},
                                 {"double_a0", inst.doubles_truth[0]},
                                 {"double_a1", inst.doubles_truth[1]},
                                 {"double_b0", inst.doubles_truth[2]},
                                 {"double_b1", inst.doubles_truth[3]}};
        if (inst.cross_total() > 0) {
            const double rate = normalized_win_rate(inst, eta, optics);
            j["win_rate"] = rate;
            sum_rate += rate;
            sum_rate_sq += rate * rate;
            ++rated;
        }
        total_rounds += inst.rounds;
        instances.push_back(j);
    }
    root["instances"] = instances;

    nlohmann::ordered_json summary;
    summary["instances"] = record.instances.size();
    summary["total_rounds"] = total_rounds;
    if (rated > 0) {
        const double mean = sum_rate / static_cast<double>(rated);
        summary["mean_win_rate"] = mean;
        if (rated > 1) {
            const double var =
                (sum_rate_sq - sum_rate * mean) / (static_cast<double>(rated) - 1.0);
            summary["std_win_rate"] = var > 0.0 ? std::sqrt(var) : 0.0;
        }
    }
    const DecoherenceSpec spec = config.decoherence();
    summary["pwin_model"] = pwin_lambda(spec.lambda, config.visibility, optics);
    root["summary"] = summary;

    return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path);
    }
    return ss.str();
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) {
        throw IoError("cannot create directory: " + path + " (" + ec.message() + ")");
    }
}

}  // namespace xorgame
