#pragma once

// Adaptive greedy-generous decoding for two equal blocks.
//
// Block density is estimated with s(x) = ||x||_{1/2} / ||x||_2, where
// ||x||_{1/2} = (sum_i sqrt|x_i|)^2. s is scale invariant, equals 1 on
// 1-sparse vectors and m^{3/2} on m equal-magnitude entries.
//
// The statistic S compares how much each block sparsified between the
// least-norm solution x_p and the current iterate x_c:
//   S = s(x_c^1) s(x_p^2) / (s(x_c^2) s(x_p^1)).
// Block 2 then receives the generous weight W2(S); block 1 keeps weight 1.

#include <optional>
#include <string>
#include <vector>

#include "lgg/decoders.hpp"

namespace lgg {

/// (sum sqrt|x_i|)^2 / ||x||_2; 0 for the zero vector.
double sparsity_measure(const Vector& x);

/// S for blocks [0, split) and [split, n). Returns 1 when any factor is 0.
double adaptation_statistic(const Vector& current, const Vector& pseudoinverse, Index split);

/// For S >= 1 returns g(S) = 0.65 S^{1/2} + 0.35 S^{1/4}; for S < 1 returns 1 / g(S).
/// Throws DomainError for S <= 0.
double generous_weight(double S);

struct AdaptiveStep {
    double s_current_1 = 0.0;
    double s_current_2 = 0.0;
    double statistic = 1.0;
    double w2 = 1.0;
};

struct AdaptiveState {
    double s_pseudo_1 = 0.0;
    double s_pseudo_2 = 0.0;
    /// One entry per general step that computed weights (step j at index j-1).
    std::vector<AdaptiveStep> steps;
};

struct AdaptiveOptions {
    /// Replace S by a constant (S = 1 reproduces the l1-greedy subproblems).
    std::optional<double> fixed_statistic;
};

struct AdaptiveOutcome {
    DecodeOutcome decode;
    AdaptiveState state;
};

/// Adaptive l1-greedy-generous decoder for blocks [0, N/2) and [N/2, N).
AdaptiveOutcome algga_decode(const SensingMatrix& phi, const Vector& y, const GreedyParams& gp,
                             const SolverParams& sp, const AdaptiveOptions& adaptive = {},
                             const DecodeOptions& options = {});

/// One JSON object per step with S and W2.
std::string to_json_lines(const AdaptiveState& state);

}  // namespace lgg
