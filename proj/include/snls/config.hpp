#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/strichartz.hpp"

namespace snls {

// Named preset studies the command-line driver can run.
enum class ExperimentKind {
    MassCheck,
    DissipationCheck,
    DispersiveCheck,
    DuhamelCheck,
    GammaSweep,
    ScatteringStudy,
    BurkholderCheck,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

// A full experiment description in flat key=value form. Every field has a
// default, so the empty text is a valid config; parsing is strict (unknown
// and duplicate keys are errors) and parse(print(c)) == c.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::MassCheck;

    int dimension = 1;
    double extent = 64.0;
    std::size_t points = 256;

    double dt = 1e-3;
    double horizon = 10.0;
    std::vector<double> checkpoints; // resolved; empty means uniform:10
    bool dealias = false;

    double data_mass = 1.0;
    double data_width = 2.0;

    double noise_amplitude = 1.0;
    double noise_gamma = 0.1;
    double noise_width = 2.0;

    double damping_amplitude = 0.1;
    double damping_width = 2.0;
    double damping_exponent = 0.5;

    std::size_t paths = 8;
    std::uint64_t master_seed = 1;
    std::vector<double> rho_list = {1.5, 2.0};
    std::size_t workers = 1;

    StrichartzPair pair = default_pair(1); // re-resolved from the dimension

    std::vector<double> sweep_gammas = {2.0, 0.5, 0.1, 0.0};
    std::vector<double> sweep_horizons = {5.0, 10.0, 20.0};

    std::size_t halt_checkpoint = std::numeric_limits<std::size_t>::max();
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig& o) const;
    bool operator!=(const ExperimentConfig& o) const { return !(*this == o); }
};

// Configuration errors carry the offending key (or file) in the message.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The frozen defaults of each preset study. mass-check coincides with the
// global defaults; every other preset overrides grid, horizon, data, or
// noise to its published configuration.
ExperimentConfig preset_config(ExperimentKind kind);

// Parses `key = value` lines ('#' comments, blank lines allowed). The
// `experiment` key selects a preset whose defaults seed every other field;
// explicit keys override them. Unknown keys, duplicate keys, malformed
// values, and constraint violations all throw ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);

// Canonical text form: every key on its own line, numbers with 17
// significant digits. parse_config(print_config(c)) == c.
std::string print_config(const ExperimentConfig& config);

// Re-checks every cross-field constraint (also called by parse_config).
void validate_config(const ExperimentConfig& config);

// {0, T/K, 2T/K, ..., T}.
std::vector<double> uniform_checkpoints(double horizon, std::size_t intervals);

} // namespace snls
