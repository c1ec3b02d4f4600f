#pragma once

#include "vsg/energy_models.hpp"
#include "vsg/evolution.hpp"
#include "vsg/initial_data.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace vsg {

/// [study] section. Lists are comma separated in the file.
struct StudyConfig {
    std::vector<double> values;        // swept delta or nu, strictly decreasing
    std::vector<double> r;             // error norm exponents
    std::vector<double> sample_times;
    double roughening = 0.0;           // rho of the high-mode tail, 0 = off
    double roughening_eps = 0.1;
    std::vector<int> cutoffs;          // Galerkin refinement
    std::vector<double> dt_list;       // manufactured-solution temporal sweep
    std::vector<int> n_list;           // manufactured-solution spatial sweep

    bool operator==(const StudyConfig&) const = default;
};

/// Everything a run or study reads from a configuration file.
struct RunConfig {
    int d = 2;
    int n = 64;
    int cutoff = -1;  // -1: floor(n/3)
    EnergyKind model = EnergyKind::double_well;
    double nu = 1.0;
    double delta = 0.01;
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_cnab2;
    DealiasRule dealias = DealiasRule::two_thirds;
    InitialSpec initial;
    int record_every = 1;
    int snapshot_every = 0;
    std::string out_dir = "out";
    std::vector<double> lr_norms;
    bool has_study = false;
    StudyConfig study;

    bool operator==(const RunConfig&) const = default;

    SpectralGrid grid() const;
    EnergyModel energy_model() const;
    SolverConfig solver() const;
};

/// Parses the sectioned key = value format. Unknown sections or keys, type
/// mismatches and range violations throw ConfigError with the line number.
RunConfig parse_config(const std::filesystem::path& path);
/// Relative file paths in [initial] resolve against `base_dir`.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

/// Text form accepted by parse_config_text, values at full precision.
std::string serialize(const RunConfig& config);

}  // namespace vsg
