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

#include <cstdlib>
#include <json.hpp>

#include "xorgame/io.hpp"
#include "xorgame/rng.hpp"

using namespace xorgame;

TEST_CASE("config round-trips losslessly through its text form") {
    RunConfig config;
    config.tau_test = 0.337751234567891;
    config.tau_meas = 0.35;
    config.visibility = 0.9412345678901234;
    config.decoherence_kind = DecoherenceKind::kPurity;
    config.decoherence_value = 0.71234567890123456;
    config.instances_per_setting = 15;
    config.instances = 60;
    config.mean_counts = 333.25;
    config.fixed_counts = true;
    config.eta = {1.0, 0.93, 0.81234567890123456, 0.99};
    config.purity_grid = {0.545, 0.7123456789012345, 1.0};
    config.seed = 918273645;
    config.workers = 3;
    config.out_dir = "results/run-a";

    const std::string text = config_to_text(config);
    const RunConfig parsed = parse_config_text(text);
    CHECK(config_to_text(parsed) == text);
    CHECK(parsed.tau_test == config.tau_test);
    CHECK(parsed.decoherence_value == config.decoherence_value);
    CHECK(parsed.purity_grid == config.purity_grid);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.out_dir == config.out_dir);
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_AS(parse_config_text("lambda = 0.5\nsigma = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("unknown_knob = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("instances = 100\n"), ConfigError);  // not 4 * 60
    CHECK_THROWS_AS(parse_config_text("visibility = 1.4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("purity = 0.3\n"), ConfigError);  // below the 0.545 floor
    CHECK_THROWS_AS(parse_config_text("lambda 0.5\n"), ConfigError);    // missing '='
    CHECK_NOTHROW(parse_config_text("# comment only\n\n"));
}

TEST_CASE("derived decoherence trio is echoed consistently") {
    RunConfig config;
    config.decoherence_kind = DecoherenceKind::kSigma;
    config.decoherence_value = 1.0;
    const auto meta = config_metadata(config);
    double lambda = -1.0, sigma = -1.0, purity = -1.0;
    for (const auto& [key, value] : meta) {
        if (key == "lambda") lambda = std::strtod(value.c_str(), nullptr);
        if (key == "sigma") sigma = std::strtod(value.c_str(), nullptr);
        if (key == "purity") purity = std::strtod(value.c_str(), nullptr);
    }
    CHECK(sigma == 1.0);
    CHECK(lambda == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(purity == doctest::Approx(purity_from_lambda(BeamsplitterSpec::from_transmission(0.35), lambda))
                        .epsilon(1e-12));
}

TEST_CASE("double formatting is bit-faithful") {
    Rng rng(1001);
    for (int i = 0; i < 1000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("csv table renders metadata, header and rows") {
    CsvTable table;
    table.add_metadata("artifact", "xorgame 0.1.0");
    table.add_metadata("seed", "42");
    table.set_header({"a", "b"});
    table.add_row({cell(1), cell(0.5)});
    table.add_row({cell(std::uint64_t{123456789012345ull}), cell(2.0)});
    const std::string expected =
        "# artifact = xorgame 0.1.0\n"
        "# seed = 42\n"
        "a,b\n"
        "1,0.5\n"
        "123456789012345,2\n";
    CHECK(table.to_string() == expected);
}

TEST_CASE("run record serialization") {
    RunConfig config;
    config.instances_per_setting = 5;
    config.instances = 20;
    config.mean_counts = 120.0;
    config.seed = 7;

    const RunRecord record = run_experiment(config.experiment());
    const std::string json_text = run_record_to_json(record, config);

    const auto parsed = nlohmann::json::parse(json_text);
    CHECK(parsed.at("artifact") == "xorgame");
    CHECK(parsed.at("master_seed") == 7);
    CHECK(parsed.at("schedule").size() == 20);
    CHECK(parsed.at("instances").size() == 20);
    const auto& first = parsed.at("instances").at(0);
    CHECK(first.contains("c00"));
    CHECK(first.contains("win_rate"));
    CHECK(first.at("simulation_truth").at("unobservable") == true);
    CHECK(parsed.at("summary").contains("mean_win_rate"));

    SUBCASE("byte-identical regardless of worker count") {
        RunConfig quad = config;
        quad.workers = 4;
        const RunRecord parallel = run_experiment(quad.experiment());
        CHECK(run_record_to_json(parallel, quad) == json_text);
    }
}

TEST_CASE("text file io") {
    const std::string path = "/tmp/xorgame_io_test.txt";
    write_text_file(path, "hello\n");
    CHECK(read_text_file(path) == "hello\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("/nonexistent_dir_xyz/file"), IoError);
    CHECK_THROWS_AS(write_text_file("/nonexistent_dir_xyz/file", "x"), IoError);
}
