#pragma once

// Weighted basis pursuit:  minimize sum_i w_i |x_i|  subject to  Phi x = y.
//
// Three backends share one report type:
//   first_order    ADMM on the split x = z with an exactly feasible x-step,
//                  periodically polished on the identified support and
//                  stopped on a certified duality gap.
//   interior_point Mehrotra predictor-corrector on the standard-form LP
//                  x = u - v, u, v >= 0 (normal equations, n x n Cholesky).
//   reference_lp   dense tableau simplex with Bland's rule. Exact but only
//                  for small instances; used as the optimality oracle.

#include <limits>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "lgg/core_model.hpp"

namespace lgg {

/// Strictly positive, finite per-column weights.
class WeightVector {
public:
    explicit WeightVector(Vector weights);
    static WeightVector uniform(Index length, double value = 1.0);

    const Vector& values() const { return weights_; }
    Index size() const { return weights_.size(); }
    double operator[](Index i) const { return weights_[i]; }

private:
    Vector weights_;
};

enum class SolverKind { first_order, interior_point, reference_lp };

std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& name);

struct SolverParams {
    /// Relative feasibility target on ||Phi x - y|| / ||y||.
    double feasibility_tol = 1e-9;
    /// Relative duality gap target.
    double optimality_tol = 1e-7;
    int max_iterations = 5000;
    /// Decoders keep going after a feasible solve that stalled within this gap.
    double acceptance_gap = 1e-4;
    SolverKind kind = SolverKind::interior_point;

    void validate() const;
};

struct SolveReport {
    Vector x;
    /// ||Phi x - y|| / ||y|| (absolute when y = 0).
    double residual = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Certified relative duality gap of x.
    double gap = std::numeric_limits<double>::infinity();

    bool acceptable(const SolverParams& params) const;
};

double weighted_l1_norm(const Vector& x, const WeightVector& w);
double relative_residual(const Matrix& phi, const Vector& x, const Vector& y);

/// Factorization of Phi Phi^T: Cholesky, with a pivoted LDL^T fallback
/// when Cholesky fails or the reciprocal condition estimate is tiny.
class RowGram {
public:
    explicit RowGram(const Matrix& phi);

    /// Solves (Phi Phi^T) q = rhs.
    Vector solve(const Vector& rhs) const;
    /// Reciprocal condition estimate of Phi Phi^T (1-norm).
    double rcond() const { return rcond_; }
    bool used_fallback() const { return use_ldlt_; }

private:
    Eigen::LLT<Matrix> llt_;
    Eigen::LDLT<Matrix> ldlt_;
    double rcond_ = 0.0;
    bool use_ldlt_ = false;
};

/// Solver bound to one matrix. Caches the Gram factorization so repeated
/// reweighted solves on the same Phi pay for it once. Not thread-safe; use
/// one instance per worker.
class WeightedL1Solver {
public:
    WeightedL1Solver(const SensingMatrix& phi, SolverParams params);

    /// warm_start is honored by first_order only; the other backends are
    /// pure functions of (Phi, y, w).
    SolveReport solve(const Vector& y, const WeightVector& w,
                      const Vector* warm_start = nullptr);

    const SolverParams& params() const { return params_; }
    const RowGram& gram() const { return *gram_; }

private:
    struct AdmmWarmState;

    const Matrix& phi_;
    SolverParams params_;
    std::shared_ptr<const RowGram> gram_;
    std::shared_ptr<AdmmWarmState> admm_state_;
};

SolveReport solve_weighted_l1(const SensingMatrix& phi, const Vector& y, const WeightVector& w,
                              const SolverParams& params = {});

struct ReferenceLpLimits {
    Index max_rows = 32;
    Index max_cols = 64;
};

/// Exact LP solution by simplex. Throws DomainError above the size limits,
/// SolverError when the LP is infeasible.
Vector solve_reference_lp(const SensingMatrix& phi, const Vector& y, const WeightVector& w,
                          ReferenceLpLimits limits = {});

/// x_p = Phi^T (Phi Phi^T)^{-1} y. Throws ConditioningError when Phi Phi^T is
/// numerically singular.
Vector least_norm_solution(const SensingMatrix& phi, const Vector& y);

}  // namespace lgg
