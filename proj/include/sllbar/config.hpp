#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sllbar/ensemble.hpp"
#include "sllbar/initial.hpp"
#include "sllbar/integrator.hpp"
#include "sllbar/noise.hpp"

namespace sllbar {

struct GridSpec {
    int dim = 1;
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    std::array<int, 3> modes{1, 1, 1};
    double pad_factor = 2.0;

    Grid make() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ExperimentConfig {
    int paths = 1;
    std::vector<Observable> observables;
    double burn_in = 0.0;
    std::vector<Window> windows;
    std::vector<double> tightness_R;
    std::vector<double> moment_powers;
    std::vector<double> transition_times;
    int dt_halvings = 3;
    std::vector<int> refinement_modes;
    int identity_samples = 20;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct RunConfig {
    GridSpec grid;
    ModelParams params;
    NoiseDescriptor noise;
    SolverConfig solver;  // includes the truncation block
    InitialData initial;
    ExperimentConfig experiment;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the sectioned `key = value` format documented in
/// configs/example.ini. Every default is materialised in the result.
/// Syntax errors carry the line number, semantic errors the key path.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "config");
RunConfig parse_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace sllbar
