#pragma once

// JSON experiment configs for the `sweep` subcommand.
//
// Top-level keys mirror TrialSpec (matrix, sources, errors, error_scale,
// noise_sigma, decoder, block_weights, greedy, solver, success_tolerance,
// trials, seed) plus `sweep` (mode, source, total, and either `values` or
// from/to/step), `label` and `figure`. An optional `curves` array holds
// per-curve objects merged over the top level.

#include <filesystem>
#include <string>
#include <vector>

#include "lgg/figures.hpp"

namespace lgg {

struct SweepConfig {
    std::string figure = "custom";
    int workers = 1;
    std::vector<FigureCurve> curves;
};

/// Throws DomainError on unknown keys, bad enum names or an invalid spec.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Writes <figure>_<label>.csv per curve into out_dir.
std::vector<std::filesystem::path> run_sweep_config(const SweepConfig& config,
                                                    const std::filesystem::path& out_dir);

}  // namespace lgg
