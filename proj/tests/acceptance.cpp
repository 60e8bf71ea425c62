// Acceptance run: one PASS/FAIL line per criterion 1..8.
//
// Monte-Carlo criteria use 50 trials per point (standard error <= 0.071);
// tolerances are +-0.12 unless a criterion states otherwise. Every sweep
// point is seeded from (kSeed, total k, trial), so curves compared at the
// same k see the same matrices and signals where their recipes coincide.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lgg/adaptive.hpp"
#include "lgg/figures.hpp"
#include "lgg/harness.hpp"
#include "lgg/selftest.hpp"

using namespace lgg;

namespace {

constexpr std::uint64_t kSeed = 20260916;
constexpr int kTrials = 50;
constexpr double kTol = 0.12;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures += " [failed: " + what + "]";
        }
    }
};

double rate_at(const TrialSpec& base, const SweepAxis& axis, Index value) {
    return sweep_curve(base, axis, {value}).front().rate;
}

double se_diff(double p, double q) {
    return std::sqrt((p * (1.0 - p) + q * (1.0 - q)) / kTrials);
}

TrialSpec lga(Index cols) {
    TrialSpec spec;
    spec.matrix.cols = cols;
    spec.sources = {SourceSpec{cols, 0, 1.0}};
    spec.trials = kTrials;
    spec.seed = kSeed;
    return spec;
}

TrialSpec two_block(Index k2) {
    TrialSpec spec = lga(256);
    spec.sources = {SourceSpec{128, 0, 1.0}, SourceSpec{128, k2, 1.0}};
    return spec;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void c1(Verdict& v) {
    double worst = 0.0;
    int unconverged = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        Rng rng(RngSpec{"mt19937_64", derive_seed(kSeed, {101, t})});
        const Index n = 2 + static_cast<Index>(rng.below(15));
        const Index N = n + static_cast<Index>(rng.below(static_cast<std::uint64_t>(33 - n)));
        const auto phi = make_gaussian_matrix(n, N, false, RngSpec{"mt19937_64", derive_seed(kSeed, {102, t})});
        Vector y(n), w(N);
        for (auto& e : y) e = rng.normal();
        for (auto& e : w) e = 0.05 + 4.95 * rng.uniform();
        const WeightVector weights(w);
        const double exact = weighted_l1_norm(solve_reference_lp(phi, y, weights), weights);
        SolverParams p;
        p.kind = SolverKind::first_order;
        const auto r = solve_weighted_l1(phi, y, weights, p);
        unconverged += r.converged ? 0 : 1;
        worst = std::max(worst, std::abs(r.objective - exact) / std::max(1.0, std::abs(exact)));
    }
    v.detail << "worst relative objective gap " << worst << ", unconverged " << unconverged;
    v.require(worst <= 1e-6, "objective gap <= 1e-6");
}

void c2(Verdict& v) {
    const SweepAxis axis{};
    const double r57 = rate_at(lga(256), axis, 57);
    const double r68 = rate_at(lga(256), axis, 68);
    const double r384 = rate_at(lga(384), axis, 57);
    v.detail << "N=256 k=57 " << fmt(r57) << ", N=256 k=68 " << fmt(r68) << ", N=384 k=57 " << fmt(r384);
    v.require(r57 >= 0.9, "N=256 k=57 >= 0.9");
    v.require(std::abs(r68 - 0.82) <= kTol, "N=256 k=68 in 0.82+-0.12");
    v.require(std::abs(r384 - 0.82) <= kTol, "N=384 k=57 in 0.82+-0.12");
}

void c3(Verdict& v) {
    const auto plan = figure_plan(1, Scale::desk, kSeed, ReproduceOptions{1, kTrials, {}});
    const auto& curve = plan.curves.front();
    std::vector<double> rates;
    for (const Index k : {5, 20, 35, 50}) {
        rates.push_back(rate_at(curve.spec, curve.axis, k));
        v.detail << "k=" << k << " " << fmt(rates.back()) << " ";
    }
    for (const double r : rates) v.require(r >= 0.70 && r <= 1.0, "all rates in [0.70, 1.0]");
    v.require(rates.front() >= rates.back() - 2.0 * se_diff(rates.front(), rates.back()),
              "k=5 >= k=50 - 2SE");
}

void c4(Verdict& v) {
    const auto plan = figure_plan(3, Scale::desk, kSeed, ReproduceOptions{1, kTrials, {}});
    const FigureCurve* r5 = nullptr;
    for (const auto& c : plan.curves) {
        if (c.spec.errors == 5) r5 = &c;
    }
    for (const Index k : {50, 57, 64}) {
        const double b = rate_at(r5->spec, r5->axis, k);
        const double a = rate_at(lga(384), SweepAxis{}, k);
        v.detail << "k=" << k << " r5/lambda1.7 " << fmt(b) << " vs LGA N=384 " << fmt(a) << "; ";
        v.require(std::abs(a - b) <= kTol, "pointwise within 0.12 at k=" + std::to_string(k));
    }
}

void c5(Verdict& v) {
    const auto plan = figure_plan(4, Scale::desk, kSeed, ReproduceOptions{1, kTrials, {}});
    const auto& weighted = plan.curves[0];
    const auto& uniform = plan.curves[1];
    std::optional<Index> chosen;
    double ua = 0.0;
    for (Index K = 0; K <= 16 && !chosen; K += 4) {
        ua = rate_at(uniform.spec, uniform.axis, K);
        v.detail << "uniform K=" << K << " " << fmt(ua) << "; ";
        if (ua >= 0.3 && ua <= 0.6) chosen = K;
    }
    v.require(chosen.has_value(), "a K with uniform rate in [0.3, 0.6]");
    if (chosen) {
        const double wb = rate_at(weighted.spec, weighted.axis, *chosen);
        v.detail << "weighted K=" << *chosen << " " << fmt(wb) << ", gap " << fmt(wb - ua);
        v.require(wb - ua >= 0.15, "gap >= 0.15");
    }
}

void c6(Verdict& v) {
    const SweepAxis axis{};
    const auto compare = [&](Index k2, double w2, std::initializer_list<Index> totals) {
        TrialSpec adaptive = two_block(k2);
        adaptive.decoder = DecoderKind::algga;
        TrialSpec known = two_block(k2);
        known.decoder = DecoderKind::lgga;
        known.block_weights = {1.0, w2};
        for (const Index k : totals) {
            const double a = rate_at(adaptive, axis, k - k2);
            const double b = rate_at(known, axis, k - k2);
            v.detail << "k2=" << k2 << " k=" << k << " ALGGA " << fmt(a) << " LGGA(W2=" << w2 << ") " << fmt(b)
                     << "; ";
            v.require(std::abs(a - b) <= kTol, "k2=" + std::to_string(k2) + " within 0.12 at k=" + std::to_string(k));
        }
    };
    compare(37, 1.0, {64, 72, 80});
    compare(15, 1.7, {72, 80, 88});

    const Index k = 100;
    TrialSpec adaptive = two_block(1);
    adaptive.decoder = DecoderKind::algga;
    TrialSpec known = two_block(1);
    known.decoder = DecoderKind::lgga;
    known.block_weights = {1.0, 6.5};
    TrialSpec uniform = two_block(1);
    const double a = rate_at(adaptive, axis, k - 1);
    const double b = rate_at(known, axis, k - 1);
    const double u = rate_at(uniform, axis, k - 1);
    v.detail << "k2=1 k=" << k << " LGA " << fmt(u) << " < ALGGA " << fmt(a) << " < LGGA(W2=6.5) " << fmt(b);
    v.require(a - u >= 2.0 * se_diff(a, u), "ALGGA above LGA by 2SE");
    v.require(b - a >= 2.0 * se_diff(a, b), "ALGGA below LGGA(6.5) by 2SE");
}

void c7(Verdict& v) {
    const auto plan = figure_plan(7, Scale::desk, kSeed, ReproduceOptions{1, kTrials, {}});
    const FigureCurve* clean = nullptr;
    const FigureCurve* noisy = nullptr;
    for (const auto& c : plan.curves) {
        if (c.spec.sources[1].k != 5) continue;
        if (c.spec.noise_sigma == 0.0) clean = &c;
        if (c.spec.noise_sigma == 0.01) noisy = &c;
    }
    for (const Index k : {80, 88, 96}) {
        const double a = rate_at(clean->spec, clean->axis, k - 5);
        const double b = rate_at(noisy->spec, noisy->axis, k - 5);
        v.detail << "k=" << k << " sigma=0 " << fmt(a) << " sigma=0.01 " << fmt(b) << "; ";
        v.require(std::abs(a - b) <= 0.15, "within 0.15 at k=" + std::to_string(k));
    }
}

void c8(Verdict& v) {
    int failed = 0;
    for (const auto& r : run_selftest(kSeed)) {
        if (!r.passed) {
            ++failed;
            v.require(false, r.name + ": " + r.detail);
        }
    }
    v.detail << "selftest failures " << failed << "; ";

    // Determinism: identical CSV for 1 and 4 workers.
    TrialSpec small;
    small.matrix.rows = 32;
    small.matrix.cols = 64;
    small.sources = {SourceSpec{32, 0, 1.0}, SourceSpec{32, 3, 1.0}};
    small.decoder = DecoderKind::algga;
    small.trials = 12;
    small.seed = kSeed;
    const std::vector<Index> values{4, 8, 12};
    std::ostringstream one, four;
    write_curve_csv(one, "p", "c", sweep_curve(small, SweepAxis{}, values, SweepOptions{1}));
    write_curve_csv(four, "p", "c", sweep_curve(small, SweepAxis{}, values, SweepOptions{4}));
    v.require(one.str() == four.str(), "CSV identical for 1 and 4 workers");

    // Monotone sanity: no rise above 3 SE between adjacent grid points.
    TrialSpec mono = lga(128);
    mono.matrix.rows = 64;
    mono.trials = 40;
    const auto points = sweep_curve(mono, SweepAxis{}, k_grid(16, 40, 4));
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double p = points[i - 1].rate, q = points[i].rate;
        const double se = std::sqrt((p * (1 - p) + q * (1 - q)) / mono.trials);
        v.require(q - p <= 3.0 * se + 1e-12, "success rate nonincreasing up to 3SE");
    }

    // S pinned at 1 reproduces the LGA subproblems.
    const auto phi = make_gaussian_matrix(48, 96, false, RngSpec{"mt19937_64", kSeed});
    const Vector x = sample_sparse_signal(96, 18, 1.0, RngSpec{"mt19937_64", kSeed + 1}).dense();
    const Vector y = phi.apply(x);
    const auto plain = lga_decode(phi, y, GreedyParams{}, SolverParams{});
    AdaptiveOptions pinned;
    pinned.fixed_statistic = 1.0;
    const auto adapt = algga_decode(phi, y, GreedyParams{}, SolverParams{}, pinned).decode;
    bool same = plain.trace.size() == adapt.trace.size();
    for (std::size_t j = 0; same && j < plain.trace.size(); ++j) {
        same = std::abs(plain.trace[j].objective - adapt.trace[j].objective) <=
               1e-10 * std::max(1.0, plain.trace[j].objective);
    }
    v.require(same, "S = 1 reproduces LGA objectives");
    v.detail << "determinism, monotonicity, S=1 reduction checked";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Verdict&)> run;
        double time_limit;
    };
    const std::vector<Criterion> criteria{
        {1, "solver oracle equivalence", c1, 60.0},
        {2, "LGA baseline", c2, 0.0},
        {3, "error-correction plateau", c3, 0.0},
        {4, "LGGA r=5 matches error-free N=384", c4, 0.0},
        {5, "multisource gain", c5, 0.0},
        {6, "adaptive coincidence", c6, 0.0},
        {7, "noise stability", c7, 0.0},
        {8, "property suites", c8, 300.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("threw: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0) {
            v.require(seconds < c.time_limit, "runtime < " + std::to_string(static_cast<int>(c.time_limit)) + " s");
        }
        failures += v.pass ? 0 : 1;
        std::printf("criterion %d (%s): %s (%.1f s) %s\n", c.id, c.title, v.pass ? "PASS" : "FAIL", seconds,
                    (v.detail.str() + v.failures).c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
