#include "lgg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <thread>

#include "lgg/csv_io.hpp"
#include "lgg/errors.hpp"

namespace lgg {
namespace {

constexpr std::uint64_t kFixedMatrixTag = 0x6d6174726978ULL;

enum StreamTag : std::uint64_t { matrix_stream = 1, signal_stream, error_stream, noise_stream };

PartitionedMatrix build_matrix(const MatrixRecipe& recipe, const RngSpec& spec) {
    switch (recipe.kind) {
        case MatrixKind::gaussian: {
            auto phi = make_gaussian_matrix(recipe.rows, recipe.cols, recipe.normalize, spec);
            return {std::move(phi), BlockPartition::single(recipe.cols)};
        }
        case MatrixKind::extended:
            return extend_with_identity(
                make_gaussian_matrix(recipe.rows, recipe.cols, recipe.normalize, spec));
        case MatrixKind::compound: {
            const Index first = recipe.cols / 2;
            const auto phi1 = make_gaussian_matrix(recipe.rows, first, recipe.normalize,
                                                   derive_spec(spec, {1}));
            const auto phi2 = make_gaussian_matrix(recipe.rows, recipe.cols - first, recipe.normalize,
                                                   derive_spec(spec, {2}));
            return make_compound(phi1, phi2, recipe.delta);
        }
    }
    throw DomainError("unknown matrix kind");
}

std::vector<Index> source_lengths(const TrialSpec& spec) {
    std::vector<Index> lengths;
    for (const auto& s : spec.sources) {
        lengths.push_back(s.length);
    }
    return lengths;
}

/// The partition the lgga weights refer to.
BlockPartition decoding_partition(const TrialSpec& spec, const PartitionedMatrix& built) {
    switch (spec.matrix.kind) {
        case MatrixKind::gaussian:
            return BlockPartition::sources(source_lengths(spec));
        case MatrixKind::extended: {
            auto blocks = BlockPartition::sources(source_lengths(spec)).blocks();
            blocks.push_back(Block{spec.matrix.cols, spec.matrix.rows, BlockRole::error, 0});
            return BlockPartition(std::move(blocks));
        }
        case MatrixKind::compound:
            return built.partition;
    }
    throw DomainError("unknown matrix kind");
}

std::size_t decoding_blocks(const TrialSpec& spec) {
    switch (spec.matrix.kind) {
        case MatrixKind::gaussian: return spec.sources.size();
        case MatrixKind::extended: return spec.sources.size() + 1;
        case MatrixKind::compound: return 2;
    }
    return 0;
}

}  // namespace

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("binary entropy needs p in [0, 1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double noisy_success_threshold(Index n, Index N, Index k, double sigma) {
    if (n < 1 || N < 1) {
        throw DimensionError("threshold needs positive dimensions");
    }
    if (k <= 0 || k >= N) {
        throw DomainError("threshold needs 0 < k < N");
    }
    if (!(sigma >= 0.0)) {
        throw DomainError("sigma must be non-negative");
    }
    if (sigma == 0.0) {
        return 0.0;
    }
    const double bits = static_cast<double>(N) * binary_entropy(static_cast<double>(k) / N) / n;
    return 1.5 * std::exp2(bits) * std::sqrt(static_cast<double>(n)) * sigma;
}

NoisySuccessRule NoisySuccessRule::make(Index n, Index N, Index k, double sigma) {
    NoisySuccessRule rule;
    rule.sigma = sigma;
    rule.threshold = noisy_success_threshold(n, N, k, sigma);
    return rule;
}

bool judge_success(const Vector& estimate, const Vector& truth, const SuccessRule& rule) {
    if (estimate.size() != truth.size()) {
        throw DimensionError("estimate and truth differ in length");
    }
    const double error = (estimate - truth).norm();
    if (const auto* noiseless = std::get_if<NoiselessRule>(&rule)) {
        const double scale = truth.norm();
        return scale > 0.0 ? error <= noiseless->tolerance * scale : error <= noiseless->tolerance;
    }
    const auto& noisy = std::get<NoisySuccessRule>(rule);
    return error < noisy.threshold;
}

std::string to_string(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::lga: return "lga";
        case DecoderKind::lgga: return "lgga";
        case DecoderKind::algga: return "algga";
    }
    return "unknown";
}

DecoderKind decoder_kind_from_string(const std::string& name) {
    if (name == "lga") return DecoderKind::lga;
    if (name == "lgga") return DecoderKind::lgga;
    if (name == "algga") return DecoderKind::algga;
    throw DomainError("unknown decoder: " + name);
}

Index TrialSpec::total_k() const {
    return std::accumulate(sources.begin(), sources.end(), Index{0},
                           [](Index acc, const SourceSpec& s) { return acc + s.k; });
}

void TrialSpec::validate() const {
    if (matrix.rows < 1 || matrix.cols < matrix.rows) {
        throw DimensionError("matrix recipe needs 1 <= rows <= cols");
    }
    if (sources.empty()) {
        throw DomainError("at least one source block is required");
    }
    Index covered = 0;
    for (const auto& s : sources) {
        if (s.length < 1 || s.k < 0 || s.k > s.length) {
            throw DomainError("source sparsity must lie in [0, length]");
        }
        if (!(s.scale > 0.0)) {
            throw DomainError("source scale must be positive");
        }
        covered += s.length;
    }
    if (covered != matrix.cols) {
        throw DimensionError("source lengths must sum to the data column count");
    }
    if (errors < 0 || errors > matrix.rows) {
        throw DomainError("error count must lie in [0, rows]");
    }
    if (errors > 0 && matrix.kind != MatrixKind::extended) {
        throw DomainError("sparse errors need an extended matrix");
    }
    if (!(error_scale > 0.0) || !(noise_sigma >= 0.0)) {
        throw DomainError("error scale must be positive and noise sigma non-negative");
    }
    if (matrix.kind == MatrixKind::compound &&
        (matrix.cols / 2 < matrix.rows || !(matrix.delta > 0.0))) {
        throw DomainError("compound recipe needs cols/2 >= rows and delta > 0");
    }
    if (decoder == DecoderKind::lgga && block_weights.size() != decoding_blocks(*this)) {
        throw DomainError("lgga needs " + std::to_string(decoding_blocks(*this)) + " block weights");
    }
    if (decoder == DecoderKind::algga &&
        (matrix.kind == MatrixKind::extended || matrix.cols % 2 != 0)) {
        throw DomainError("algga needs a non-extended matrix with an even column count");
    }
    if (trials < 1) {
        throw DomainError("trials must be at least 1");
    }
    greedy.validate();
    solver.validate();
}

std::uint64_t trial_seed(const TrialSpec& spec, int trial_index) {
    return derive_seed(spec.seed, {spec.point_key, static_cast<std::uint64_t>(trial_index)});
}

TrialResult run_trial(const TrialSpec& spec, int trial_index) {
    return replay_trial(spec, trial_seed(spec, trial_index), trial_index);
}

TrialResult replay_trial(const TrialSpec& spec, std::uint64_t seed, int trial_index) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    TrialResult result;
    result.trial_index = trial_index;
    result.seed = seed;

    const RngSpec trial_rng{"mt19937_64", seed};
    const RngSpec matrix_rng = spec.matrix.fixed ? RngSpec{"mt19937_64", derive_seed(spec.seed, {kFixedMatrixTag})}
                                                 : derive_spec(trial_rng, {matrix_stream});
    const auto built = build_matrix(spec.matrix, matrix_rng);
    const Index cols = spec.matrix.cols;

    std::vector<SparseSignal> parts;
    for (std::size_t b = 0; b < spec.sources.size(); ++b) {
        const auto& s = spec.sources[b];
        parts.push_back(sample_sparse_signal(s.length, s.k, s.scale,
                                             derive_spec(trial_rng, {signal_stream, b})));
    }
    const Vector x = embed_signals(parts, BlockPartition::sources(source_lengths(spec))).dense();
    result.truth = x;

    Vector y = built.matrix.entries().leftCols(cols) * x;
    if (spec.matrix.kind == MatrixKind::extended) {
        y += sample_sparse_signal(spec.matrix.rows, spec.errors, spec.error_scale,
                                  derive_spec(trial_rng, {error_stream}))
                 .dense();
    }
    if (spec.noise_sigma > 0.0) {
        Rng noise(derive_spec(trial_rng, {noise_stream}));
        for (Index i = 0; i < y.size(); ++i) {
            y[i] += spec.noise_sigma * noise.normal();
        }
    }

    DecodeOutcome outcome;
    try {
        switch (spec.decoder) {
            case DecoderKind::lga:
                outcome = lga_decode(built.matrix, y, spec.greedy, spec.solver);
                break;
            case DecoderKind::lgga: {
                const auto partition = decoding_partition(spec, built);
                const GenerousWeights gw{spec.block_weights};
                outcome = spec.matrix.kind == MatrixKind::compound
                              ? lgga_decode_compound(built.matrix, y, partition, gw, spec.greedy, spec.solver)
                              : lgga_decode(built.matrix, y, partition, gw, spec.greedy, spec.solver);
                break;
            }
            case DecoderKind::algga:
                outcome = algga_decode(built.matrix, y, spec.greedy, spec.solver).decode;
                break;
        }
    } catch (const std::exception& e) {
        outcome = DecodeOutcome{};
        outcome.estimate = Vector::Zero(built.matrix.cols());
        outcome.termination = Termination::solver_failure;
        outcome.failure = e.what();
    }

    result.estimate = outcome.estimate.head(cols);
    result.outer_iterations = outcome.iterations;
    result.club_size = outcome.final_club_size;
    result.termination = outcome.termination;
    result.failure = outcome.failure;
    result.error_norm = (result.estimate - x).norm();
    result.relative_error = x.norm() > 0.0 ? result.error_norm / x.norm() : result.error_norm;

    SuccessRule rule = NoiselessRule{spec.success_tolerance};
    if (spec.noise_sigma > 0.0) {
        const Index k = spec.total_k();
        if (k > 0 && k < cols) {
            rule = NoisySuccessRule::make(spec.matrix.rows, cols, k, spec.noise_sigma);
        } else {
            // No index information to budget: H = 0.
            NoisySuccessRule flat;
            flat.sigma = spec.noise_sigma;
            flat.threshold = 1.5 * std::sqrt(static_cast<double>(spec.matrix.rows)) * spec.noise_sigma;
            rule = flat;
        }
    }
    result.success = outcome.termination != Termination::solver_failure &&
                     judge_success(result.estimate, x, rule);
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

TrialSpec SweepAxis::apply(const TrialSpec& base, Index value) const {
    TrialSpec spec = base;
    if (source >= spec.sources.size()) {
        throw DomainError("sweep axis refers to a missing source");
    }
    spec.sources[source].k = value;
    if (mode == Mode::complement_errors) {
        spec.errors = total - value;
    }
    spec.point_key = static_cast<std::uint64_t>(spec.total_k());
    return spec;
}

std::vector<TrialResult> run_trials(const TrialSpec& spec, int workers) {
    spec.validate();
    std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
    std::atomic<int> next{0};
    const auto work = [&] {
        for (int i = next++; i < spec.trials; i = next++) {
            results[static_cast<std::size_t>(i)] = run_trial(spec, i);
        }
    };
    const int threads = std::clamp(workers, 1, spec.trials);
    if (threads == 1) {
        work();
        return results;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(work);
    }
    pool.clear();
    return results;
}

CurvePoint aggregate(Index k, const std::vector<TrialResult>& results) {
    CurvePoint point;
    point.k = k;
    point.trials = static_cast<int>(results.size());
    double error_sum = 0.0;
    double runtime_sum = 0.0;
    for (const auto& r : results) {
        runtime_sum += r.runtime_seconds;
        if (r.success) {
            ++point.successes;
            error_sum += r.relative_error;
        }
    }
    if (point.trials > 0) {
        point.rate = static_cast<double>(point.successes) / point.trials;
        point.mean_runtime_seconds = runtime_sum / point.trials;
    }
    if (point.successes > 0) {
        point.mean_relative_error = error_sum / point.successes;
    }
    return point;
}

std::vector<CurvePoint> sweep_curve(const TrialSpec& base, const SweepAxis& axis,
                                    const std::vector<Index>& values, const SweepOptions& options) {
    if (values.empty()) {
        throw DomainError("sweep needs at least one value");
    }
    std::vector<CurvePoint> points;
    for (const Index value : values) {
        const TrialSpec spec = axis.apply(base, value);
        points.push_back(aggregate(spec.total_k(), run_trials(spec, options.workers)));
    }
    return points;
}

void write_curve_csv(std::ostream& out, const std::string& figure, const std::string& label,
                     const std::vector<CurvePoint>& points) {
    out << "figure,curve_label,k,trials,successes,rate\n";
    for (const auto& p : points) {
        out << figure << ',' << label << ',' << p.k << ',' << p.trials << ',' << p.successes << ','
            << csv::format_double(p.rate) << '\n';
    }
}

}  // namespace lgg
