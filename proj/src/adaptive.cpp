#include "lgg/adaptive.hpp"

#include <cmath>

#include <json.hpp>

#include "lgg/errors.hpp"

namespace lgg {

double sparsity_measure(const Vector& x) {
    const double l2 = x.norm();
    if (l2 == 0.0) {
        return 0.0;
    }
    const double root_sum = x.cwiseAbs().cwiseSqrt().sum();
    return root_sum * root_sum / l2;
}

double adaptation_statistic(const Vector& current, const Vector& pseudoinverse, Index split) {
    if (current.size() != pseudoinverse.size()) {
        throw DimensionError("adaptation statistic needs equal-length vectors");
    }
    if (split <= 0 || split >= current.size()) {
        throw DimensionError("split must leave both blocks non-empty");
    }
    const Index tail = current.size() - split;
    const double c1 = sparsity_measure(current.head(split));
    const double c2 = sparsity_measure(current.tail(tail));
    const double p1 = sparsity_measure(pseudoinverse.head(split));
    const double p2 = sparsity_measure(pseudoinverse.tail(tail));
    if (c1 == 0.0 || c2 == 0.0 || p1 == 0.0 || p2 == 0.0) {
        return 1.0;
    }
    return (c1 * p2) / (c2 * p1);
}

double generous_weight(double S) {
    if (!(S > 0.0) || !std::isfinite(S)) {
        throw DomainError("generous_weight needs S > 0");
    }
    const double g = 0.65 * std::sqrt(S) + 0.35 * std::sqrt(std::sqrt(S));
    return S >= 1.0 ? g : 1.0 / g;
}

AdaptiveOutcome algga_decode(const SensingMatrix& phi, const Vector& y, const GreedyParams& gp,
                             const SolverParams& sp, const AdaptiveOptions& adaptive,
                             const DecodeOptions& options) {
    const Index N = phi.cols();
    if (N % 2 != 0) {
        throw DomainError("adaptive decoding needs an even column count");
    }
    if (adaptive.fixed_statistic && !(*adaptive.fixed_statistic > 0.0)) {
        throw DomainError("fixed statistic must be positive");
    }
    const Index half = N / 2;
    const auto partition = BlockPartition::sources(std::vector<Index>{half, half});

    AdaptiveOutcome result;
    const Vector pseudo = least_norm_solution(phi, y);
    const double p1 = sparsity_measure(pseudo.head(half));
    const double p2 = sparsity_measure(pseudo.tail(half));
    result.state.s_pseudo_1 = p1;
    result.state.s_pseudo_2 = p2;

    const std::vector<double> scales{1.0, 1.0};
    const WeightRule rule = [&](const Vector& previous, double threshold, int, Vector& weights) {
        AdaptiveStep step;
        step.s_current_1 = sparsity_measure(previous.head(half));
        step.s_current_2 = sparsity_measure(previous.tail(half));
        if (adaptive.fixed_statistic) {
            step.statistic = *adaptive.fixed_statistic;
        } else {
            step.statistic = adaptation_statistic(previous, pseudo, half);
        }
        step.w2 = generous_weight(step.statistic);
        result.state.steps.push_back(step);
        const double block_weights[] = {1.0, step.w2};
        return assign_block_weights(previous, threshold, partition, block_weights, scales, gp.epsilon,
                                    weights);
    };
    result.decode = reweighted_decode(phi, y, rule, gp, sp, options);
    return result;
}

std::string to_json_lines(const AdaptiveState& state) {
    using nlohmann::json;
    std::string out = json{{"type", "pseudoinverse"},
                           {"s_block_1", state.s_pseudo_1},
                           {"s_block_2", state.s_pseudo_2}}
                          .dump() +
                      '\n';
    for (std::size_t j = 0; j < state.steps.size(); ++j) {
        const auto& s = state.steps[j];
        out += json{{"type", "step"},
                    {"step", j + 1},
                    {"s_current_1", s.s_current_1},
                    {"s_current_2", s.s_current_2},
                    {"S", s.statistic},
                    {"W2", s.w2}}
                   .dump() +
               '\n';
    }
    return out;
}

}  // namespace lgg
