// lggdec: reweighted l1 decoding and success-rate experiments.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgg/adaptive.hpp"
#include "lgg/config.hpp"
#include "lgg/csv_io.hpp"
#include "lgg/decoders.hpp"
#include "lgg/errors.hpp"
#include "lgg/figures.hpp"
#include "lgg/selftest.hpp"

namespace {

struct DecodeArgs {
    std::string matrix;
    std::string measurements;
    std::string out = "-";
    std::string algorithm = "lga";
    std::optional<double> lambda;
    std::vector<double> block_weights;
    std::vector<lgg::Index> block_lengths;
    std::optional<double> compound_delta;
    double alpha = 0.85;
    double epsilon = 0.001;
    int max_iters = 30;
    std::string solver = "interior_point";
    std::string trace;
    std::string errors_out;
};

struct ReproduceArgs {
    int figure = 0;
    std::string scale = "desk";
    std::uint64_t seed = 1;
    std::string out = "results";
    int workers = 1;
    std::optional<int> trials;
    std::optional<lgg::Index> step;
};

struct SweepArgs {
    std::string config;
    std::string out = "results";
    std::optional<int> workers;
};

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::runtime_error("cannot write " + path);
    }
    body(file);
}

lgg::BlockPartition block_partition(lgg::Index cols, const DecodeArgs& a) {
    std::vector<lgg::Index> lengths = a.block_lengths;
    if (lengths.empty()) {
        const auto blocks = static_cast<lgg::Index>(a.block_weights.size());
        if (cols % blocks != 0) {
            throw lgg::DimensionError("column count is not divisible by the number of block weights; "
                                      "pass --block-lengths");
        }
        lengths.assign(a.block_weights.size(), cols / blocks);
    }
    if (lengths.size() != a.block_weights.size()) {
        throw lgg::DimensionError("--block-lengths and --block-weights differ in count");
    }
    return lgg::BlockPartition::sources(lengths);
}

int run_decode(const DecodeArgs& a) {
    const lgg::Matrix entries = lgg::csv::read_matrix_file(a.matrix);
    const lgg::Vector y = lgg::csv::read_vector_file(a.measurements);
    if (y.size() != entries.rows()) {
        throw lgg::DimensionError("measurement count does not match the matrix rows");
    }

    lgg::GreedyParams gp;
    gp.alpha = a.alpha;
    gp.epsilon = a.epsilon;
    gp.max_iterations = a.max_iters;
    lgg::SolverParams sp;
    sp.kind = lgg::solver_kind_from_string(a.solver);

    const auto kind = lgg::decoder_kind_from_string(a.algorithm);
    if (kind != lgg::DecoderKind::lgga && (a.lambda || !a.block_weights.empty() || a.compound_delta)) {
        throw lgg::DomainError("--lambda, --block-weights and --compound-delta need --algorithm lgga");
    }
    lgg::DecodeOutcome outcome;
    std::optional<lgg::Vector> errors;
    std::string adaptive_trace;
    switch (kind) {
        case lgg::DecoderKind::lga:
            outcome = lgg::lga_decode(lgg::SensingMatrix(entries, lgg::MatrixKind::gaussian), y, gp, sp);
            break;
        case lgg::DecoderKind::lgga:
            if (a.lambda.has_value() == !a.block_weights.empty()) {
                throw lgg::DomainError("lgga needs exactly one of --lambda or --block-weights");
            }
            if (a.lambda) {
                auto corrected = lgg::correct_errors(lgg::SensingMatrix(entries, lgg::MatrixKind::gaussian), y,
                                                     *a.lambda, gp, sp);
                outcome = std::move(corrected.outcome);
                outcome.estimate = corrected.data;
                errors = corrected.errors;
            } else if (a.compound_delta) {
                const lgg::Index split = entries.cols() / 2;
                const lgg::SensingMatrix psi(entries, lgg::MatrixKind::compound, std::nullopt,
                                             lgg::CompoundLayout{split, *a.compound_delta});
                outcome = lgg::lgga_decode_compound(psi, y, block_partition(entries.cols(), a),
                                                    lgg::GenerousWeights{a.block_weights}, gp, sp);
            } else {
                outcome = lgg::lgga_decode(lgg::SensingMatrix(entries, lgg::MatrixKind::gaussian), y,
                                           block_partition(entries.cols(), a),
                                           lgg::GenerousWeights{a.block_weights}, gp, sp);
            }
            break;
        case lgg::DecoderKind::algga: {
            auto adaptive = lgg::algga_decode(lgg::SensingMatrix(entries, lgg::MatrixKind::gaussian), y, gp, sp);
            outcome = std::move(adaptive.decode);
            adaptive_trace = lgg::to_json_lines(adaptive.state);
            break;
        }
    }

    with_output(a.out, [&](std::ostream& out) { lgg::csv::write_dense_signal(out, outcome.estimate); });
    if (errors && !a.errors_out.empty()) {
        with_output(a.errors_out, [&](std::ostream& out) { lgg::csv::write_dense_signal(out, *errors); });
    }
    if (!a.trace.empty()) {
        with_output(a.trace, [&](std::ostream& out) { out << lgg::to_json_lines(outcome) << adaptive_trace; });
    }
    std::cerr << "termination=" << lgg::to_string(outcome.termination) << " iterations=" << outcome.iterations
              << " club=" << outcome.final_club_size;
    if (!outcome.failure.empty()) {
        std::cerr << " failure=\"" << outcome.failure << '"';
    }
    std::cerr << '\n';
    return outcome.termination == lgg::Termination::solver_failure ? 3 : 0;
}

int run_reproduce(const ReproduceArgs& a) {
    lgg::ReproduceOptions options;
    options.workers = a.workers;
    options.trials = a.trials;
    options.step = a.step;
    const auto paths = lgg::reproduce_figure(a.figure, lgg::scale_from_string(a.scale), a.seed, a.out, options);
    for (const auto& p : paths) {
        std::cout << p.string() << '\n';
    }
    return 0;
}

int run_sweep(const SweepArgs& a) {
    auto config = lgg::load_sweep_config(a.config);
    if (a.workers) {
        config.workers = *a.workers;
    }
    for (const auto& p : lgg::run_sweep_config(config, a.out)) {
        std::cout << p.string() << '\n';
    }
    return 0;
}

int run_selftest_command() {
    int failed = 0;
    for (const auto& r : lgg::run_selftest()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.passed) {
            std::cout << ": " << r.detail;
            ++failed;
        }
        std::cout << '\n';
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reweighted l1 (greedy / generous / adaptive) sparse decoding"};
    app.require_subcommand(1);

    DecodeArgs d;
    auto* decode = app.add_subcommand("decode", "Decode one measurement vector");
    decode->add_option("--matrix", d.matrix, "Sensing matrix CSV (one row per line)")->required()->check(CLI::ExistingFile);
    decode->add_option("--measurements", d.measurements, "Measurement vector CSV")->required()->check(CLI::ExistingFile);
    decode->add_option("--out", d.out, "Estimate CSV (index,value), '-' for stdout");
    decode->add_option("--algorithm", d.algorithm)->check(CLI::IsMember({"lga", "lgga", "algga"}));
    decode->add_option("--lambda", d.lambda, "lgga error correction: generous weight of the error block");
    decode->add_option("--block-weights", d.block_weights, "lgga generous weight per block")->delimiter(',');
    decode->add_option("--block-lengths", d.block_lengths, "lgga block lengths (default: equal)")->delimiter(',');
    decode->add_option("--compound-delta", d.compound_delta, "lgga: matrix is (Phi1, delta Phi2) split at N/2");
    decode->add_option("--alpha", d.alpha);
    decode->add_option("--epsilon", d.epsilon);
    decode->add_option("--max-iters", d.max_iters);
    decode->add_option("--solver", d.solver)->check(CLI::IsMember({"first_order", "interior_point", "reference_lp"}));
    decode->add_option("--trace", d.trace, "Write JSON-lines iteration trace");
    decode->add_option("--errors-out", d.errors_out, "With --lambda: write the estimated error vector");

    SweepArgs s;
    auto* sweep = app.add_subcommand("sweep", "Run success-rate sweeps from a JSON config");
    sweep->add_option("--config", s.config)->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", s.out, "Output directory");
    sweep->add_option("--workers", s.workers);

    ReproduceArgs r;
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure's success curves as CSV");
    reproduce->add_option("--figure", r.figure)->required()->check(CLI::Range(1, 7));
    reproduce->add_option("--scale", r.scale)->check(CLI::IsMember({"full", "desk"}));
    reproduce->add_option("--seed", r.seed);
    reproduce->add_option("--out", r.out, "Output directory");
    reproduce->add_option("--workers", r.workers);
    reproduce->add_option("--trials", r.trials, "Override trials per point");
    reproduce->add_option("--step", r.step, "Override the k grid step");

    app.add_subcommand("selftest", "Run the built-in oracle and property checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decode->parsed()) return run_decode(d);
        if (sweep->parsed()) return run_sweep(s);
        if (reproduce->parsed()) return run_reproduce(r);
        return run_selftest_command();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
