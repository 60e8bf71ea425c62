#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgg/errors.hpp"
#include "lgg/l1_solver.hpp"
#include "test_support.hpp"

using namespace lgg;
using lgg::testing::brute_force_l1;
using lgg::testing::random_vector;
using lgg::testing::random_weights;
using lgg::testing::spec_of;

namespace {

const SolverKind kAllKinds[] = {SolverKind::first_order, SolverKind::interior_point, SolverKind::reference_lp};

SolveReport solve_with(SolverKind kind, const SensingMatrix& phi, const Vector& y, const Vector& w) {
    SolverParams p;
    p.kind = kind;
    return solve_weighted_l1(phi, y, WeightVector(w), p);
}

struct SmallInstance {
    SensingMatrix phi;
    Vector y;
    Vector w;
};

SmallInstance small_instance(std::uint64_t seed, Index max_rows = 16, Index max_cols = 32) {
    Rng rng(spec_of(seed));
    const Index n = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_rows - 1)));
    const Index N = n + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_cols - n + 1)));
    return {make_gaussian_matrix(n, N, false, spec_of(seed + 7777)), random_vector(n, seed + 1),
            random_weights(N, seed + 2)};
}

}  // namespace

TEST_CASE("parameter and weight validation") {
    SolverParams p;
    CHECK_NOTHROW(p.validate());
    p.optimality_tol = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SolverParams{};
    p.feasibility_tol = 1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SolverParams{};
    p.max_iterations = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);

    Vector w = Vector::Ones(3);
    w[1] = 0.0;
    CHECK_THROWS(WeightVector(w));
    w[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS(WeightVector(w));
    CHECK(solver_kind_from_string(to_string(SolverKind::first_order)) == SolverKind::first_order);
    CHECK_THROWS(solver_kind_from_string("simplex2"));
}

TEST_CASE("identity system returns y") {
    const SensingMatrix eye(Matrix::Identity(4, 4), MatrixKind::gaussian);
    const Vector y = random_vector(4, 5);
    for (const auto kind : kAllKinds) {
        const auto r = solve_with(kind, eye, y, Vector::Ones(4));
        CHECK((r.x - y).norm() <= 1e-9 * y.norm());
        CHECK(r.converged);
    }
}

TEST_CASE("zero measurements give the zero vector") {
    const auto phi = make_gaussian_matrix(5, 9, false, spec_of(3));
    for (const auto kind : kAllKinds) {
        const auto r = solve_with(kind, phi, Vector::Zero(5), Vector::Ones(9));
        CHECK(r.x.isZero());
        CHECK(r.objective == 0.0);
    }
}

TEST_CASE("1-sparse planted signal is recovered (3x5)") {
    int checked = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto phi = make_gaussian_matrix(3, 5, false, spec_of(100 + s));
        Vector x = Vector::Zero(5);
        x[static_cast<Index>(s % 5)] = 1.0 + static_cast<double>(s) / 10.0;
        const Vector y = phi.apply(x);
        const double oracle = brute_force_l1(phi.entries(), y, Vector::Ones(5));
        // Recovery claim only where the oracle's optimum is the planted vector.
        if (std::abs(oracle - x.lpNorm<1>()) > 1e-9) continue;
        ++checked;
        for (const auto kind : kAllKinds) {
            const auto r = solve_with(kind, phi, y, Vector::Ones(5));
            CHECK((r.x - x).norm() <= 1e-6);
        }
    }
    CHECK(checked > 5);
}

TEST_CASE("objectives match basic-solution enumeration") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto inst = small_instance(500 + s, 5, 10);
        const double oracle = brute_force_l1(inst.phi.entries(), inst.y, inst.w);
        for (const auto kind : kAllKinds) {
            const auto r = solve_with(kind, inst.phi, inst.y, inst.w);
            CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("backends agree with the reference LP on 100 small instances") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto inst = small_instance(1000 + s);
        const WeightVector w(inst.w);
        const Vector exact = solve_reference_lp(inst.phi, inst.y, w);
        const double reference = weighted_l1_norm(exact, w);
        CHECK(relative_residual(inst.phi.entries(), exact, inst.y) < 1e-9);
        for (const auto kind : {SolverKind::first_order, SolverKind::interior_point}) {
            const auto r = solve_with(kind, inst.phi, inst.y, inst.w);
            CHECK(r.converged);
            CHECK(r.residual <= 1e-9);
            CHECK(std::abs(r.objective - reference) <= 1e-8 * std::max(1.0, reference));
        }
    }
}

TEST_CASE("weight scaling and measurement homogeneity") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto inst = small_instance(2000 + s);
        for (const auto kind : kAllKinds) {
            const auto base = solve_with(kind, inst.phi, inst.y, inst.w);
            const auto doubled = solve_with(kind, inst.phi, inst.y, 2.0 * inst.w);
            CHECK(doubled.objective == doctest::Approx(2.0 * base.objective).epsilon(1e-8));
            // The minimizer under 3.5 w is a minimizer under w.
            const auto scaled = solve_with(kind, inst.phi, inst.y, 3.5 * inst.w);
            CHECK(weighted_l1_norm(scaled.x, WeightVector(inst.w)) ==
                  doctest::Approx(base.objective).epsilon(1e-8));
            const auto tripled_y = solve_with(kind, inst.phi, 3.0 * inst.y, inst.w);
            CHECK(tripled_y.objective == doctest::Approx(3.0 * base.objective).epsilon(1e-8));
        }
    }
}

TEST_CASE("degenerate tie keeps the optimal objective") {
    const SensingMatrix phi(Matrix::Ones(1, 2), MatrixKind::gaussian);
    const Vector y = Vector::Ones(1);
    for (const auto kind : kAllKinds) {
        const auto r = solve_with(kind, phi, y, Vector::Ones(2));
        CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.x.minCoeff() >= -1e-9);
    }
}

TEST_CASE("converged reports honor the feasibility tolerance at decoder size") {
    const auto phi = make_gaussian_matrix(128, 384, false, spec_of(77));
    const auto planted = sample_sparse_signal(384, 50, 1.0, spec_of(78)).dense();
    const Vector y = phi.apply(planted);
    WeightedL1Solver solver(phi, SolverParams{});
    for (int t = 0; t < 5; ++t) {
        const auto r = solver.solve(y, WeightVector(random_weights(384, 80 + t, 0.001, 1.0)));
        CHECK(r.converged);
        CHECK(r.residual <= 1e-9);
    }
}

TEST_CASE("reference LP limits and infeasibility") {
    const auto big = make_gaussian_matrix(40, 80, false, spec_of(1));
    CHECK_THROWS_AS(solve_reference_lp(big, Vector::Ones(40), WeightVector::uniform(80)), DomainError);

    Matrix rank1(2, 3);
    rank1 << 1, 2, 3, 2, 4, 6;
    const SensingMatrix phi(rank1, MatrixKind::gaussian);
    Vector y(2);
    y << 1, 0;
    CHECK_THROWS_AS(solve_reference_lp(phi, y, WeightVector::uniform(3)), InfeasibleError);
    for (const auto kind : {SolverKind::first_order, SolverKind::interior_point}) {
        SolverParams p;
        p.kind = kind;
        CHECK_THROWS_AS(solve_weighted_l1(phi, y, WeightVector::uniform(3), p), InfeasibleError);
    }
}

TEST_CASE("least-norm solution") {
    const SensingMatrix eye(Matrix::Identity(3, 3), MatrixKind::gaussian);
    const Vector y = random_vector(3, 4);
    CHECK((least_norm_solution(eye, y) - y).norm() < 1e-14);

    const SensingMatrix ones(Matrix::Ones(1, 2), MatrixKind::gaussian);
    const Vector xp2 = least_norm_solution(ones, Vector::Constant(1, 2.0));
    CHECK(xp2[0] == doctest::Approx(1.0));
    CHECK(xp2[1] == doctest::Approx(1.0));

    const auto phi = make_gaussian_matrix(8, 16, false, spec_of(31));
    const Vector b = random_vector(8, 32);
    const Vector xp = least_norm_solution(phi, b);
    const Matrix& a = phi.entries();
    CHECK(relative_residual(a, xp, b) <= 1e-10);
    const Matrix projector = Matrix::Identity(16, 16) - a.transpose() * (a * a.transpose()).inverse() * a;
    CHECK((projector * xp).norm() <= 1e-8 * xp.norm());
    // Null-space perturbations only add length.
    const Eigen::FullPivLU<Matrix> lu(a);
    const Matrix kernel = lu.kernel();
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Vector other = xp + kernel * random_vector(kernel.cols(), 40 + s);
        CHECK(relative_residual(a, other, b) < 1e-9);
        CHECK(xp.norm() <= other.norm() + 1e-12);
    }

    Matrix singular = Matrix::Zero(2, 4);
    singular.row(0) << 1, 2, 3, 4;
    singular.row(1) = 2.0 * singular.row(0);
    CHECK_THROWS_AS(least_norm_solution(SensingMatrix(singular, MatrixKind::gaussian), Vector::Ones(2)),
                    ConditioningError);
}
