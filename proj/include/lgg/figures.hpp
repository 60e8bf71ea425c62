#pragma once

// Bundled experiment recipes for the seven success-rate figures.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgg/harness.hpp"

namespace lgg {

enum class Scale { full, desk };

std::string to_string(Scale scale);
Scale scale_from_string(const std::string& name);

struct FigureCurve {
    std::string label;
    TrialSpec spec;
    SweepAxis axis;
    std::vector<Index> values;
};

struct FigurePlan {
    int figure = 0;
    std::vector<FigureCurve> curves;
};

/// Integers lo, lo + step, ..., always ending at hi.
std::vector<Index> k_grid(Index lo, Index hi, Index step);

struct ReproduceOptions {
    int workers = 1;
    /// Overrides the scale's trials per point.
    std::optional<int> trials;
    /// Overrides the scale's grid step.
    std::optional<Index> step;
};

/// Curve recipes for figure 1..7. Throws DomainError for other ids.
FigurePlan figure_plan(int figure, Scale scale, std::uint64_t seed, const ReproduceOptions& options = {});

/// Runs every curve of the plan and writes fig<N>_<label>.csv files into
/// `out_dir` (created if needed). Returns the written paths.
std::vector<std::filesystem::path> reproduce_figure(int figure, Scale scale, std::uint64_t seed,
                                                    const std::filesystem::path& out_dir,
                                                    const ReproduceOptions& options = {});

}  // namespace lgg
