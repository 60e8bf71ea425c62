#include "lgg/figures.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "lgg/errors.hpp"

namespace lgg {
namespace {

struct ScaleDefaults {
    int trials;
    Index step;
};

ScaleDefaults defaults_for(Scale scale) {
    return scale == Scale::desk ? ScaleDefaults{50, 4} : ScaleDefaults{200, 1};
}

TrialSpec gaussian_lga(Index cols, std::uint64_t seed, int trials) {
    TrialSpec spec;
    spec.matrix.cols = cols;
    spec.sources = {SourceSpec{cols, 0, 1.0}};
    spec.decoder = DecoderKind::lga;
    spec.trials = trials;
    spec.seed = seed;
    return spec;
}

// Unit columns put the identity block on the data columns' scale; raw
// N(0,1) columns (norm ~ sqrt(n)) make every error cheaper to explain with
// data columns and error correction never engages.
TrialSpec extended(std::uint64_t seed, int trials) {
    TrialSpec spec = gaussian_lga(256, seed, trials);
    spec.matrix.kind = MatrixKind::extended;
    spec.matrix.normalize = true;
    return spec;
}

TrialSpec two_block(std::uint64_t seed, int trials, Index k2) {
    TrialSpec spec = gaussian_lga(256, seed, trials);
    spec.sources = {SourceSpec{128, 0, 1.0}, SourceSpec{128, k2, 1.0}};
    return spec;
}

std::string weight_label(double w) {
    std::string s = std::to_string(w);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') {
        s += '0';
    }
    return s;
}

}  // namespace

std::string to_string(Scale scale) {
    return scale == Scale::desk ? "desk" : "full";
}

Scale scale_from_string(const std::string& name) {
    if (name == "desk") return Scale::desk;
    if (name == "full") return Scale::full;
    throw DomainError("unknown scale: " + name);
}

std::vector<Index> k_grid(Index lo, Index hi, Index step) {
    if (step < 1 || hi < lo) {
        throw DomainError("grid needs step >= 1 and lo <= hi");
    }
    std::vector<Index> values;
    for (Index k = lo; k < hi; k += step) {
        values.push_back(k);
    }
    values.push_back(hi);
    return values;
}

FigurePlan figure_plan(int figure, Scale scale, std::uint64_t seed, const ReproduceOptions& options) {
    const auto d = defaults_for(scale);
    const int trials = options.trials.value_or(d.trials);
    const Index step = options.step.value_or(d.step);
    const SweepAxis first_source{};

    FigurePlan plan;
    plan.figure = figure;
    switch (figure) {
        case 1: {
            const TrialSpec spec = extended(seed, trials);
            const SweepAxis axis{SweepAxis::Mode::complement_errors, 0, 57};
            plan.curves.push_back({"lga_extended_total57", spec, axis, k_grid(1, 57, step)});
            break;
        }
        case 2:
            plan.curves.push_back({"lga_N256", gaussian_lga(256, seed, trials), first_source, k_grid(40, 96, step)});
            plan.curves.push_back({"lga_N384", gaussian_lga(384, seed, trials), first_source, k_grid(30, 86, step)});
            break;
        case 3: {
            const std::vector<std::pair<Index, double>> curves{
                {0, 2.0}, {1, 2.0}, {5, 1.7}, {15, 1.5}, {45, 0.7}, {90, 0.55}};
            for (const auto& [r, lambda] : curves) {
                TrialSpec spec = extended(seed, trials);
                spec.errors = r;
                spec.decoder = DecoderKind::lgga;
                spec.block_weights = {1.0, lambda};
                const Index hi = std::max<Index>(96 - r, 16);
                plan.curves.push_back({"lgga_r" + std::to_string(r) + "_lambda" + weight_label(lambda), spec,
                                       first_source, k_grid(std::max<Index>(1, hi - 56), hi, step)});
            }
            plan.curves.push_back({"lga_N384", gaussian_lga(384, seed, trials), first_source, k_grid(30, 86, step)});
            break;
        }
        case 4: {
            TrialSpec spec = gaussian_lga(256, seed, trials);
            spec.sources = {SourceSpec{64, 0, 1.0}, SourceSpec{64, 64, 1.0}, SourceSpec{64, 5, 1.0},
                            SourceSpec{64, 3, 1.0}};
            TrialSpec weighted = spec;
            weighted.decoder = DecoderKind::lgga;
            weighted.block_weights = {3.0, 1.0, 3.6, 4.0};
            const auto values = k_grid(0, 64, step);
            plan.curves.push_back({"lgga_weights_3_1_3.6_4", weighted, first_source, values});
            plan.curves.push_back({"lga_uniform", spec, first_source, values});
            break;
        }
        case 5: {
            TrialSpec spec = gaussian_lga(256, seed, trials);
            spec.matrix.kind = MatrixKind::compound;
            spec.matrix.delta = 0.1;
            spec.decoder = DecoderKind::lgga;
            // Block-2 weight delta makes the first solve plain l1 in the scaled coefficients.
            spec.block_weights = {1.0, spec.matrix.delta};
            plan.curves.push_back({"lgga_compound_delta0.1", spec, first_source, k_grid(40, 128, step)});
            plan.curves.push_back({"lga_N256", gaussian_lga(256, seed, trials), first_source, k_grid(40, 128, step)});
            break;
        }
        case 6: {
            const std::vector<std::pair<Index, double>> pairs{{37, 1.0}, {15, 1.7}, {5, 2.5}, {1, 6.5}};
            for (const auto& [k2, w2] : pairs) {
                const auto values = k_grid(40 - std::min<Index>(k2, 39), 120 - k2, step);
                TrialSpec adaptive = two_block(seed, trials, k2);
                adaptive.decoder = DecoderKind::algga;
                plan.curves.push_back({"algga_k2_" + std::to_string(k2), adaptive, first_source, values});
                TrialSpec known = two_block(seed, trials, k2);
                known.decoder = DecoderKind::lgga;
                known.block_weights = {1.0, w2};
                plan.curves.push_back({"lgga_k2_" + std::to_string(k2) + "_W2_" + weight_label(w2), known,
                                       first_source, values});
            }
            break;
        }
        case 7:
            for (const Index k2 : {Index{37}, Index{5}}) {
                for (const double sigma : {0.0, 0.01, 0.03}) {
                    TrialSpec spec = two_block(seed, trials, k2);
                    spec.matrix.normalize = true;
                    spec.decoder = DecoderKind::algga;
                    spec.noise_sigma = sigma;
                    plan.curves.push_back({"algga_k2_" + std::to_string(k2) + "_sigma" + weight_label(sigma), spec,
                                           first_source, k_grid(40 - std::min<Index>(k2, 39), 120 - k2, step)});
                }
            }
            break;
        default:
            throw DomainError("unknown figure id " + std::to_string(figure) + " (expected 1..7)");
    }
    return plan;
}

std::vector<std::filesystem::path> reproduce_figure(int figure, Scale scale, std::uint64_t seed,
                                                    const std::filesystem::path& out_dir,
                                                    const ReproduceOptions& options) {
    const auto plan = figure_plan(figure, scale, seed, options);
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    const std::string fig = std::to_string(figure);
    for (const auto& curve : plan.curves) {
        const auto points = sweep_curve(curve.spec, curve.axis, curve.values, SweepOptions{options.workers});
        const auto path = out_dir / ("fig" + fig + "_" + curve.label + ".csv");
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        write_curve_csv(out, fig, curve.label, points);
        written.push_back(path);
    }
    return written;
}

}  // namespace lgg
