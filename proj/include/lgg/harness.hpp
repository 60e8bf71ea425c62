#pragma once

// Monte-Carlo trials and success-rate sweeps.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "lgg/adaptive.hpp"
#include "lgg/decoders.hpp"

namespace lgg {

/// -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0.
double binary_entropy(double p);

/// 1.5 * 2^{N H(k/N) / n} * sqrt(n) * sigma. Requires 0 < k < N, sigma >= 0.
double noisy_success_threshold(Index n, Index N, Index k, double sigma);

/// Relative l2 error at most `tolerance` (absolute when the truth is zero).
struct NoiselessRule {
    double tolerance = 1e-4;
};

/// Absolute l2 error strictly below the entropy threshold.
struct NoisySuccessRule {
    double sigma = 0.0;
    double factor = 1.5;
    double threshold = 0.0;

    static NoisySuccessRule make(Index n, Index N, Index k, double sigma);
};

using SuccessRule = std::variant<NoiselessRule, NoisySuccessRule>;

bool judge_success(const Vector& estimate, const Vector& truth, const SuccessRule& rule);

enum class DecoderKind { lga, lgga, algga };

std::string to_string(DecoderKind kind);
DecoderKind decoder_kind_from_string(const std::string& name);

struct MatrixRecipe {
    Index rows = 128;
    /// Data columns N (the identity block of an extended matrix is extra).
    Index cols = 256;
    MatrixKind kind = MatrixKind::gaussian;
    bool normalize = false;
    /// Compound scale; the split is at cols / 2.
    double delta = 0.1;
    /// Draw Phi once from the base seed instead of once per trial.
    bool fixed = false;
};

struct SourceSpec {
    Index length = 256;
    Index k = 0;
    double scale = 1.0;
};

struct TrialSpec {
    MatrixRecipe matrix;
    std::vector<SourceSpec> sources{SourceSpec{}};
    /// Sparse channel errors r (extended matrices only).
    Index errors = 0;
    double error_scale = 1.0;
    /// Std. deviation of dense Gaussian noise added to every measurement.
    double noise_sigma = 0.0;
    DecoderKind decoder = DecoderKind::lga;
    /// lgga only: one weight per decoding block. Gaussian: one per source;
    /// extended: one per source then the error block; compound: two.
    std::vector<double> block_weights;
    GreedyParams greedy;
    SolverParams solver;
    double success_tolerance = 1e-4;
    int trials = 50;
    std::uint64_t seed = 0;
    /// Mixed into every trial seed; sweeps set it to the point's k.
    std::uint64_t point_key = 0;

    Index total_k() const;
    void validate() const;
};

struct TrialResult {
    int trial_index = 0;
    std::uint64_t seed = 0;
    /// Data part of the estimate and the truth it is judged against.
    Vector estimate;
    Vector truth;
    double error_norm = 0.0;
    double relative_error = 0.0;
    bool success = false;
    int outer_iterations = 0;
    std::size_t club_size = 0;
    Termination termination = Termination::max_iters;
    std::string failure;
    double runtime_seconds = 0.0;
};

std::uint64_t trial_seed(const TrialSpec& spec, int trial_index);

/// Runs trial `trial_index` of the spec. Decoder failures are reported in
/// the result, never thrown.
TrialResult run_trial(const TrialSpec& spec, int trial_index);

/// Re-runs a trial from its recorded seed.
TrialResult replay_trial(const TrialSpec& spec, std::uint64_t seed, int trial_index = 0);

struct CurvePoint {
    Index k = 0;
    int successes = 0;
    int trials = 0;
    double rate = 0.0;
    /// Mean relative error over successful trials (0 if none).
    double mean_relative_error = 0.0;
    double mean_runtime_seconds = 0.0;
};

/// Which field the sweep value drives.
struct SweepAxis {
    enum class Mode {
        /// sources[source].k = value
        source_k,
        /// sources[source].k = value, errors = total - value
        complement_errors,
    };
    Mode mode = Mode::source_k;
    std::size_t source = 0;
    Index total = 0;

    TrialSpec apply(const TrialSpec& base, Index value) const;
};

struct SweepOptions {
    int workers = 1;
};

/// Runs spec.trials trials per value. Results do not depend on the worker count.
std::vector<CurvePoint> sweep_curve(const TrialSpec& base, const SweepAxis& axis,
                                    const std::vector<Index>& values, const SweepOptions& options = {});

/// Aggregates a batch of results (in trial order) into a point.
CurvePoint aggregate(Index k, const std::vector<TrialResult>& results);

/// Runs `trials` trials of a spec, distributed over workers.
std::vector<TrialResult> run_trials(const TrialSpec& spec, int workers);

/// Header: figure,curve_label,k,trials,successes,rate
void write_curve_csv(std::ostream& out, const std::string& figure, const std::string& label,
                     const std::vector<CurvePoint>& points);

}  // namespace lgg
