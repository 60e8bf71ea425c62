#include "lgg/decoders.hpp"

#include <cmath>
#include <exception>

#include <json.hpp>

#include "lgg/errors.hpp"

namespace lgg {

void GreedyParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    if (max_iterations < 0) {
        throw DomainError("max_iterations must be non-negative");
    }
    if (club_cap && *club_cap < 1) {
        throw DomainError("club cap must be positive");
    }
}

void GenerousWeights::validate(const BlockPartition& partition) const {
    if (per_block.size() != partition.size()) {
        throw DomainError("need one generous weight per block (" + std::to_string(partition.size()) +
                          "), got " + std::to_string(per_block.size()));
    }
    for (const double w : per_block) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("generous weights must be positive and finite");
        }
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::max_iters: return "max_iters";
        case Termination::club_cap: return "club_cap";
        case Termination::solver_failure: return "solver_failure";
    }
    return "unknown";
}

std::size_t assign_block_weights(const Vector& previous, double threshold,
                                 const BlockPartition& partition, std::span<const double> block_weights,
                                 std::span<const double> threshold_scales, double epsilon,
                                 Vector& weights) {
    weights.resize(previous.size());
    std::size_t club = 0;
    for (std::size_t b = 0; b < partition.size(); ++b) {
        const auto& block = partition[b];
        const double cut = threshold * threshold_scales[b];
        for (Index i = block.start; i < block.end(); ++i) {
            // Strict inequality: ties stay outside the club.
            if (std::abs(previous[i]) > cut) {
                weights[i] = epsilon;
                ++club;
            } else {
                weights[i] = block_weights[b];
            }
        }
    }
    return club;
}

DecodeOutcome reweighted_decode(const SensingMatrix& phi, const Vector& y, const WeightRule& rule,
                                const GreedyParams& gp, const SolverParams& sp,
                                const DecodeOptions& options) {
    gp.validate();
    sp.validate();
    if (y.size() != phi.rows()) {
        throw DimensionError("measurement length must equal the row count");
    }
    const Index N = phi.cols();
    const Index cap = gp.club_cap.value_or(phi.rows());
    const bool may_reuse = options.reuse_identical_steps && sp.kind != SolverKind::first_order;

    DecodeOutcome outcome;
    WeightedL1Solver solver(phi, sp);

    const auto solve = [&](const Vector& w, const Vector* warm) -> std::optional<SolveReport> {
        try {
            auto report = solver.solve(y, WeightVector(w), warm);
            if (!report.acceptable(sp)) {
                outcome.failure = "solver did not converge (residual " + std::to_string(report.residual) +
                                  ", gap " + std::to_string(report.gap) + ")";
                return std::nullopt;
            }
            return report;
        } catch (const std::exception& e) {
            outcome.failure = e.what();
            return std::nullopt;
        }
    };
    const auto record = [&](const Vector& w, const Vector& x, IterationRecord entry) {
        outcome.trace.push_back(entry);
        outcome.club_trace.push_back(entry.club_size);
        if (options.record_iterates) {
            outcome.weights.push_back(w);
            outcome.iterates.push_back(x);
        }
    };

    Vector weights = Vector::Ones(N);
    auto initial = solve(weights, nullptr);
    if (!initial) {
        outcome.termination = Termination::solver_failure;
        outcome.estimate = Vector::Zero(N);
        return outcome;
    }
    Vector x = std::move(initial->x);
    double threshold = x.cwiseAbs().maxCoeff();
    record(weights, x, {threshold, 0, initial->objective, initial->iterations, false});

    for (int step = 1; step <= gp.max_iterations; ++step) {
        threshold *= gp.alpha;
        Vector next_weights(N);
        const std::size_t club = rule(x, threshold, step, next_weights);
        if (static_cast<Index>(club) >= cap) {
            outcome.termination = Termination::club_cap;
            break;
        }
        IterationRecord entry{threshold, club, 0.0, 0, false};
        if (may_reuse && next_weights == weights) {
            entry.reused = true;
            entry.objective = next_weights.dot(x.cwiseAbs());
        } else {
            auto report = solve(next_weights, &x);
            if (!report) {
                outcome.termination = Termination::solver_failure;
                break;
            }
            x = std::move(report->x);
            entry.objective = report->objective;
            entry.solver_iterations = report->iterations;
        }
        weights = std::move(next_weights);
        record(weights, x, entry);
        outcome.iterations = step;
        outcome.final_club_size = club;
    }

    outcome.estimate = std::move(x);
    return outcome;
}

DecodeOutcome lga_decode(const SensingMatrix& phi, const Vector& y, const GreedyParams& gp,
                         const SolverParams& sp, const DecodeOptions& options) {
    const auto partition = BlockPartition::single(phi.cols());
    return lgga_decode(phi, y, partition, GenerousWeights::uniform(1), gp, sp, options);
}

DecodeOutcome lgga_decode(const SensingMatrix& phi, const Vector& y, const BlockPartition& partition,
                          const GenerousWeights& gw, const GreedyParams& gp, const SolverParams& sp,
                          const DecodeOptions& options) {
    if (partition.total() != phi.cols()) {
        throw DimensionError("partition must cover every column");
    }
    gw.validate(partition);
    const std::vector<double> scales(partition.size(), 1.0);
    const WeightRule rule = [&](const Vector& previous, double threshold, int, Vector& weights) {
        return assign_block_weights(previous, threshold, partition, gw.per_block, scales, gp.epsilon,
                                    weights);
    };
    return reweighted_decode(phi, y, rule, gp, sp, options);
}

ErrorCorrection correct_errors(const SensingMatrix& phi, const Vector& y_corrupt, double lambda,
                               const GreedyParams& gp, const SolverParams& sp,
                               const DecodeOptions& options) {
    auto [extended, partition] = extend_with_identity(phi);
    auto outcome = lgga_decode(extended, y_corrupt, partition, GenerousWeights{{1.0, lambda}}, gp, sp,
                               options);
    ErrorCorrection result;
    result.data = outcome.estimate.head(phi.cols());
    result.errors = outcome.estimate.tail(phi.rows());
    result.outcome = std::move(outcome);
    return result;
}

DecodeOutcome lgga_decode_compound(const SensingMatrix& psi, const Vector& y,
                                   const BlockPartition& partition, const GenerousWeights& gw,
                                   const GreedyParams& gp, const SolverParams& sp,
                                   const DecodeOptions& options) {
    if (psi.kind() != MatrixKind::compound || !psi.compound()) {
        throw DomainError("lgga_decode_compound needs a compound matrix");
    }
    if (partition.total() != psi.cols()) {
        throw DimensionError("partition must cover every column");
    }
    gw.validate(partition);
    const auto layout = *psi.compound();
    std::vector<double> scales;
    for (const auto& block : partition.blocks()) {
        if (block.start < layout.split && block.end() > layout.split) {
            throw DomainError("block " + block.label() + " straddles the compound split");
        }
        scales.push_back(block.start >= layout.split ? 1.0 / layout.delta : 1.0);
    }
    const WeightRule rule = [&](const Vector& previous, double threshold, int, Vector& weights) {
        return assign_block_weights(previous, threshold, partition, gw.per_block, scales, gp.epsilon,
                                    weights);
    };
    return reweighted_decode(psi, y, rule, gp, sp, options);
}

std::string to_json_lines(const DecodeOutcome& outcome) {
    using nlohmann::json;
    std::string out;
    json summary{{"type", "summary"},
                 {"iterations", outcome.iterations},
                 {"final_club_size", outcome.final_club_size},
                 {"termination", to_string(outcome.termination)},
                 {"club_trace", outcome.club_trace}};
    if (!outcome.failure.empty()) {
        summary["failure"] = outcome.failure;
    }
    out += summary.dump() + '\n';
    for (std::size_t j = 0; j < outcome.trace.size(); ++j) {
        const auto& t = outcome.trace[j];
        out += json{{"type", "iteration"},
                    {"step", j},
                    {"threshold", t.threshold},
                    {"club_size", t.club_size},
                    {"objective", t.objective},
                    {"solver_iterations", t.solver_iterations},
                    {"reused", t.reused}}
                   .dump() +
               '\n';
    }
    return out;
}

}  // namespace lgg
