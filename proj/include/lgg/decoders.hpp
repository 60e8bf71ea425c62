#pragma once

// Reweighted l1 decoders.
//
// All decoders share one outer loop. Starting from a uniform-weight solve
// x_0 and M_0 = max_i |x_0,i|, step j sets M_j = alpha * M_{j-1}, puts every
// index with |x_{j-1,i}| > tau_i * M_j into the "club" (weight epsilon), gives
// every other index the generous weight of its block, and re-solves. tau_i is
// 1 except for the second block of a compound matrix, where it is 1/delta.
// The loop stops after max_iterations steps, or before solving a step whose
// club has reached club_cap members.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgg/core_model.hpp"
#include "lgg/l1_solver.hpp"

namespace lgg {

struct GreedyParams {
    double alpha = 0.85;
    double epsilon = 0.001;
    int max_iterations = 30;
    /// Defaults to the row count n.
    std::optional<Index> club_cap;

    void validate() const;
};

/// One positive weight per partition block, applied to non-club entries.
struct GenerousWeights {
    std::vector<double> per_block;

    static GenerousWeights uniform(std::size_t blocks) { return {std::vector<double>(blocks, 1.0)}; }
    void validate(const BlockPartition& partition) const;
};

enum class Termination { max_iters, club_cap, solver_failure };

std::string to_string(Termination t);

struct IterationRecord {
    /// M_j (M_0 for the initial solve).
    double threshold = 0.0;
    std::size_t club_size = 0;
    double objective = 0.0;
    int solver_iterations = 0;
    /// Weights equal to the previous step's; the previous solution was reused.
    bool reused = false;
};

struct DecodeOutcome {
    Vector estimate;
    /// Number of completed general steps (solves after the initial one).
    int iterations = 0;
    std::size_t final_club_size = 0;
    std::vector<std::size_t> club_trace;
    Termination termination = Termination::max_iters;
    std::string failure;
    /// Entry 0 is the initial solve; entry j the j-th general step.
    std::vector<IterationRecord> trace;
    /// Filled when DecodeOptions::record_iterates is set; same indexing as trace.
    std::vector<Vector> weights;
    std::vector<Vector> iterates;
};

struct DecodeOptions {
    bool record_iterates = false;
    /// Reuse the previous solution when a step's weights are unchanged.
    /// Exact for the deterministic backends; ignored for first_order.
    bool reuse_identical_steps = true;
};

/// Per-step weight assignment: given x_{j-1}, M_j and step j, fill the
/// weight vector and return the club size.
using WeightRule = std::function<std::size_t(const Vector& previous, double threshold, int step,
                                             Vector& weights)>;

/// The shared outer loop. Exposed for the adaptive decoder and for tests.
DecodeOutcome reweighted_decode(const SensingMatrix& phi, const Vector& y, const WeightRule& rule,
                                const GreedyParams& gp, const SolverParams& sp,
                                const DecodeOptions& options = {});

/// Greedy rule with per-block generous weights and per-block threshold scales.
std::size_t assign_block_weights(const Vector& previous, double threshold,
                                 const BlockPartition& partition, std::span<const double> block_weights,
                                 std::span<const double> threshold_scales, double epsilon,
                                 Vector& weights);

/// l1-greedy algorithm (uniform non-club weight 1).
DecodeOutcome lga_decode(const SensingMatrix& phi, const Vector& y, const GreedyParams& gp,
                         const SolverParams& sp, const DecodeOptions& options = {});

/// l1-greedy-generous algorithm: non-club entries of block b get gw.per_block[b].
DecodeOutcome lgga_decode(const SensingMatrix& phi, const Vector& y, const BlockPartition& partition,
                          const GenerousWeights& gw, const GreedyParams& gp, const SolverParams& sp,
                          const DecodeOptions& options = {});

struct ErrorCorrection {
    Vector data;
    Vector errors;
    DecodeOutcome outcome;
};

/// Decodes y = Phi x + e on (Phi I_n): data weight 1, error-block weight lambda.
ErrorCorrection correct_errors(const SensingMatrix& phi, const Vector& y_corrupt, double lambda,
                               const GreedyParams& gp, const SolverParams& sp,
                               const DecodeOptions& options = {});

/// LGGA on a compound matrix: the club threshold of block 2 is M_j / delta.
DecodeOutcome lgga_decode_compound(const SensingMatrix& psi, const Vector& y,
                                   const BlockPartition& partition, const GenerousWeights& gw,
                                   const GreedyParams& gp, const SolverParams& sp,
                                   const DecodeOptions& options = {});

/// One JSON object per line: summary then one line per trace entry.
std::string to_json_lines(const DecodeOutcome& outcome);

}  // namespace lgg
