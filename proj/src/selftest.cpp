#include "lgg/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>

#include "lgg/adaptive.hpp"
#include "lgg/harness.hpp"

namespace lgg {
namespace {

using Check = std::function<std::string(std::uint64_t)>;

// A check returns an empty string on success, otherwise what went wrong.

std::string solver_oracle(std::uint64_t seed) {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 30; ++t) {
        Rng rng(RngSpec{"mt19937_64", derive_seed(seed, {1, t})});
        const Index n = 4 + static_cast<Index>(rng.below(13));
        const Index N = n + static_cast<Index>(rng.below(static_cast<std::uint64_t>(33 - n)));
        const auto phi = make_gaussian_matrix(n, N, false, RngSpec{"mt19937_64", derive_seed(seed, {2, t})});
        Vector y(n);
        for (auto& v : y) v = rng.normal();
        Vector w(N);
        for (auto& v : w) v = 0.1 + 2.9 * rng.uniform();
        const WeightVector weights(w);
        const double exact = weighted_l1_norm(solve_reference_lp(phi, y, weights), weights);
        for (const auto kind : {SolverKind::first_order, SolverKind::interior_point}) {
            SolverParams p;
            p.kind = kind;
            const auto report = solve_weighted_l1(phi, y, weights, p);
            worst = std::max(worst, std::abs(report.objective - exact) / std::max(1.0, std::abs(exact)));
        }
    }
    if (worst > 1e-6) {
        return "objective mismatch " + std::to_string(worst);
    }
    return {};
}

std::string least_norm(std::uint64_t seed) {
    const auto phi = make_gaussian_matrix(20, 50, false, RngSpec{"mt19937_64", seed});
    Rng rng(RngSpec{"mt19937_64", seed + 1});
    Vector y(20);
    for (auto& v : y) v = rng.normal();
    const Vector xp = least_norm_solution(phi, y);
    const Matrix& a = phi.entries();
    if (relative_residual(a, xp, y) > 1e-10) {
        return "residual too large";
    }
    // Row space: x_p equals its projection onto range(Phi^T).
    const Vector coef = (a * a.transpose()).ldlt().solve(a * xp);
    if ((a.transpose() * coef - xp).norm() > 1e-9 * xp.norm()) {
        return "not in the row space";
    }
    const Vector other = solve_weighted_l1(phi, y, WeightVector::uniform(50)).x;
    if (other.norm() < xp.norm() - 1e-9) {
        return "another feasible point has smaller norm";
    }
    return {};
}

std::string entropy_threshold(std::uint64_t) {
    if (std::abs(binary_entropy(0.25) - 0.8112781244591328) > 1e-12) {
        return "H(0.25) mismatch";
    }
    if (std::abs(noisy_success_threshold(128, 256, 64, 0.01) - 0.5228) > 5e-4) {
        return "threshold mismatch";
    }
    return {};
}

std::string weight_identities(std::uint64_t seed) {
    Rng rng(RngSpec{"mt19937_64", seed});
    if (std::abs(generous_weight(1.0) - 1.0) > 1e-15) {
        return "W2(1) != 1";
    }
    if (std::abs(generous_weight(1.0 / 16.0) - 1.0 / 0.3375) > 1e-12) {
        return "W2(1/16) != 1/0.3375";
    }
    for (int i = 0; i < 200; ++i) {
        const double s = std::exp(8.0 * rng.uniform() - 4.0);
        if (s != 1.0 && generous_weight(s) <= 1.0) {
            return "W2(S) <= 1 away from S = 1";
        }
        // Moving S further from 1 never lowers W2.
        const double further = s >= 1.0 ? s * 1.1 : s / 1.1;
        if (generous_weight(further) < generous_weight(s)) {
            return "W2 not monotone in the distance from S = 1";
        }
    }
    return {};
}

std::string sparsity_bounds(std::uint64_t seed) {
    Rng rng(RngSpec{"mt19937_64", seed});
    for (int t = 0; t < 100; ++t) {
        const Index m = 1 + static_cast<Index>(rng.below(40));
        Vector x(m);
        for (auto& v : x) v = rng.normal();
        const double s = sparsity_measure(x);
        const double cap = std::pow(static_cast<double>(m), 1.5);
        if (s < 1.0 - 1e-12 || s > cap * (1.0 + 1e-12)) {
            return "s(x) outside [1, m^1.5]";
        }
        if (std::abs(sparsity_measure(-3.7 * x) - s) > 1e-12 * s) {
            return "s(x) not scale invariant";
        }
    }
    return {};
}

std::string statistic_reciprocity(std::uint64_t seed) {
    Rng rng(RngSpec{"mt19937_64", seed});
    for (int t = 0; t < 50; ++t) {
        Vector c(40), p(40);
        for (auto& v : c) v = rng.uniform() < 0.3 ? rng.normal() : 0.0;
        for (auto& v : p) v = rng.normal();
        c[0] = 1.0;
        c[25] = -2.0;
        Vector cs(40), ps(40);
        cs << c.tail(20), c.head(20);
        ps << p.tail(20), p.head(20);
        const double s = adaptation_statistic(c, p, 20);
        if (std::abs(s * adaptation_statistic(cs, ps, 20) - 1.0) > 1e-12) {
            return "block swap does not invert S";
        }
    }
    return {};
}

std::string threshold_decay(std::uint64_t seed) {
    const auto phi = make_gaussian_matrix(40, 80, false, RngSpec{"mt19937_64", seed});
    const auto x = sample_sparse_signal(80, 8, 1.0, RngSpec{"mt19937_64", seed + 1}).dense();
    GreedyParams gp;
    gp.max_iterations = 10;
    const auto out = lga_decode(phi, phi.apply(x), gp, SolverParams{});
    for (std::size_t j = 1; j < out.trace.size(); ++j) {
        const double expected = out.trace[0].threshold * std::pow(gp.alpha, static_cast<double>(j));
        if (std::abs(out.trace[j].threshold - expected) > 1e-12 * expected) {
            return "M_j is not alpha^j M_0";
        }
    }
    if ((out.estimate - x).norm() > 1e-6 * x.norm()) {
        return "8-sparse signal not recovered on 40x80";
    }
    return {};
}

std::string worker_determinism(std::uint64_t seed) {
    TrialSpec spec;
    spec.matrix.rows = 24;
    spec.matrix.cols = 48;
    spec.sources = {SourceSpec{24, 3, 1.0}, SourceSpec{24, 2, 1.0}};
    spec.decoder = DecoderKind::algga;
    spec.trials = 6;
    spec.seed = seed;
    spec.point_key = 5;
    const auto one = run_trials(spec, 1);
    const auto three = run_trials(spec, 3);
    for (std::size_t i = 0; i < one.size(); ++i) {
        if (one[i].seed != three[i].seed || one[i].success != three[i].success ||
            one[i].estimate != three[i].estimate) {
            return "trial " + std::to_string(i) + " differs between 1 and 3 workers";
        }
        const auto replay = replay_trial(spec, one[i].seed, static_cast<int>(i));
        if (replay.estimate != one[i].estimate) {
            return "trial " + std::to_string(i) + " does not replay";
        }
    }
    return {};
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
    const std::vector<std::pair<std::string, Check>> checks{
        {"solver_oracle", solver_oracle},
        {"least_norm", least_norm},
        {"entropy_threshold", entropy_threshold},
        {"weight_identities", weight_identities},
        {"sparsity_bounds", sparsity_bounds},
        {"statistic_reciprocity", statistic_reciprocity},
        {"threshold_decay", threshold_decay},
        {"worker_determinism", worker_determinism},
    };
    std::vector<CheckResult> results;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        CheckResult r;
        r.name = checks[i].first;
        try {
            r.detail = checks[i].second(derive_seed(seed, {i}));
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("threw: ") + e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace lgg
