#pragma once

// Subcommand implementations shared by the CLI and the tests.
//
// Each command reads its tables from a validated Config, writes its files
// into the output directory and returns a one-line summary. On failure every
// file it created is removed before the exception propagates.

#include <string>
#include <vector>

#include "fishnet/config.hpp"

namespace fishnet {

struct CommandResult {
    std::string summary;
    std::vector<std::string> files;
    int exit_code = 0;
};

/// outputs.directory, else "out".
std::string output_directory(const Config& cfg);

/// sampling.threads, else FISHNET_THREADS, else the hardware count.
int thread_count(const Config& cfg);

CommandResult cmd_simulate(const Config& cfg);
CommandResult cmd_models(const Config& cfg);
CommandResult cmd_eta(const Config& cfg);
CommandResult cmd_shape_sweep(const Config& cfg);
CommandResult cmd_sample_dist(const Config& cfg);
/// Renders each CSV to an .svg next to it, or into `out_dir` when given.
CommandResult cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir);

/// Damage links for a pattern: "none", "center", "slit:k".
std::vector<int> damage_pattern(const FishnetMesh& mesh, const std::string& pattern);

/// Model constants for N links: calibrated on [models] calibration_rows x
/// calibration_cols (64 x 64 by default) unless models.calibrate = false,
/// then overridden by any explicit eta_a / nu1 / eta_b / nu2 / eta2.
ModelParams model_params(const Config& cfg, const Distribution& d, int N);

}  // namespace fishnet
