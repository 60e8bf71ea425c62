#include "lgg/l1_solver.hpp"

#include <cmath>

#include "lgg/errors.hpp"
#include "solver_backends.hpp"

namespace lgg {

WeightVector::WeightVector(Vector weights) : weights_(std::move(weights)) {
    for (Index i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw DomainError("weights must be positive and finite");
        }
    }
}

WeightVector WeightVector::uniform(Index length, double value) {
    return WeightVector(Vector::Constant(length, value));
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::first_order: return "first_order";
        case SolverKind::interior_point: return "interior_point";
        case SolverKind::reference_lp: return "reference_lp";
    }
    return "unknown";
}

SolverKind solver_kind_from_string(const std::string& name) {
    if (name == "first_order") return SolverKind::first_order;
    if (name == "interior_point") return SolverKind::interior_point;
    if (name == "reference_lp") return SolverKind::reference_lp;
    throw DomainError("unknown solver kind: " + name);
}

void SolverParams::validate() const {
    const auto in_unit = [](double t) { return t > 0.0 && t < 1.0; };
    if (!in_unit(feasibility_tol) || !in_unit(optimality_tol)) {
        throw DomainError("solver tolerances must lie in (0, 1)");
    }
    if (max_iterations < 1) {
        throw DomainError("solver needs at least one iteration");
    }
    if (!(acceptance_gap >= optimality_tol && acceptance_gap < 1.0)) {
        throw DomainError("acceptance gap must lie in [optimality_tol, 1)");
    }
}

bool SolveReport::acceptable(const SolverParams& params) const {
    return converged || (residual <= params.feasibility_tol && gap <= params.acceptance_gap);
}

double weighted_l1_norm(const Vector& x, const WeightVector& w) {
    return w.values().dot(x.cwiseAbs());
}

double relative_residual(const Matrix& phi, const Vector& x, const Vector& y) {
    const double r = (phi * x - y).norm();
    const double scale = y.norm();
    return scale > 0.0 ? r / scale : r;
}

RowGram::RowGram(const Matrix& phi) {
    Matrix gram = Matrix::Zero(phi.rows(), phi.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    gram = gram.selfadjointView<Eigen::Lower>();
    llt_.compute(gram);
    if (llt_.info() == Eigen::Success) {
        rcond_ = llt_.rcond();
    }
    if (llt_.info() != Eigen::Success || rcond_ < 1e-14) {
        use_ldlt_ = true;
        ldlt_.compute(gram);
        rcond_ = ldlt_.info() == Eigen::Success ? ldlt_.rcond() : 0.0;
    }
}

Vector RowGram::solve(const Vector& rhs) const {
    return use_ldlt_ ? Vector(ldlt_.solve(rhs)) : Vector(llt_.solve(rhs));
}

struct WeightedL1Solver::AdmmWarmState : detail::AdmmState {};

WeightedL1Solver::WeightedL1Solver(const SensingMatrix& phi, SolverParams params)
    : phi_(phi.entries()), params_(params) {
    params_.validate();
    if (params_.kind != SolverKind::reference_lp) {
        gram_ = std::make_shared<const RowGram>(phi_);
    }
}

SolveReport WeightedL1Solver::solve(const Vector& y, const WeightVector& w, const Vector* warm_start) {
    if (y.size() != phi_.rows()) {
        throw DimensionError("measurement length must equal the row count");
    }
    if (w.size() != phi_.cols()) {
        throw DimensionError("weight length must equal the column count");
    }
    if (y.isZero(0.0)) {
        return SolveReport{Vector::Zero(phi_.cols()), 0.0, 0.0, 0, true, 0.0};
    }

    if (params_.kind == SolverKind::reference_lp) {
        SolveReport report;
        report.x = detail::simplex_solve(phi_, y, w.values());
        report.residual = relative_residual(phi_, report.x, y);
        report.objective = weighted_l1_norm(report.x, w);
        report.converged = report.residual <= params_.feasibility_tol;
        report.gap = 0.0;
        report.iterations = 1;
        return report;
    }

    if (gram_->used_fallback()) {
        // Rank-deficient Phi: the constraint set may be empty.
        const Vector xp = phi_.transpose() * gram_->solve(y);
        if (relative_residual(phi_, xp, y) > 1e-8) {
            throw InfeasibleError("Phi x = y has no solution (y outside the range of Phi)");
        }
    }

    if (params_.kind == SolverKind::interior_point) {
        return detail::interior_point_solve(phi_, y, w.values(), params_, *gram_);
    }

    if (!admm_state_) {
        admm_state_ = std::make_shared<AdmmWarmState>();
    }
    if (warm_start != nullptr) {
        if (warm_start->size() != phi_.cols()) {
            throw DimensionError("warm start length must equal the column count");
        }
        if (admm_state_->x.size() != phi_.cols() || !admm_state_->x.isApprox(*warm_start)) {
            // Foreign warm start: keep primal guess, drop the dual.
            admm_state_->x = *warm_start;
            admm_state_->z = *warm_start;
            admm_state_->u = Vector::Zero(phi_.cols());
            admm_state_->weights = w.values();
            admm_state_->rho = 0.0;
        }
        return detail::admm_solve(phi_, y, w.values(), params_, *gram_, admm_state_.get());
    }
    return detail::admm_solve(phi_, y, w.values(), params_, *gram_, nullptr);
}

SolveReport solve_weighted_l1(const SensingMatrix& phi, const Vector& y, const WeightVector& w,
                              const SolverParams& params) {
    WeightedL1Solver solver(phi, params);
    return solver.solve(y, w);
}

Vector solve_reference_lp(const SensingMatrix& phi, const Vector& y, const WeightVector& w,
                          ReferenceLpLimits limits) {
    if (phi.rows() > limits.max_rows || phi.cols() > limits.max_cols) {
        throw DomainError("reference LP is limited to small instances");
    }
    if (y.size() != phi.rows() || w.size() != phi.cols()) {
        throw DimensionError("reference LP dimension mismatch");
    }
    if (y.isZero(0.0)) {
        return Vector::Zero(phi.cols());
    }
    return detail::simplex_solve(phi.entries(), y, w.values());
}

Vector least_norm_solution(const SensingMatrix& phi, const Vector& y) {
    if (y.size() != phi.rows()) {
        throw DimensionError("measurement length must equal the row count");
    }
    const RowGram gram(phi.entries());
    if (gram.used_fallback()) {
        throw ConditioningError("Phi Phi^T is numerically singular (rcond " +
                                std::to_string(gram.rcond()) + ")");
    }
    return phi.entries().transpose() * gram.solve(y);
}

namespace detail {

double dual_lower_bound(const Matrix& phi, const Vector& y, const Vector& w, const Vector& pi) {
    const Vector g = phi.transpose() * pi;
    const double violation = g.cwiseAbs().cwiseQuotient(w).maxCoeff();
    return y.dot(pi) / std::max(1.0, violation);
}

std::optional<Candidate> polish_on_support(const Matrix& phi, const Vector& y, const Vector& w,
                                           const std::vector<Index>& support, const Vector& sign_hint,
                                           const Vector& pi0, double feas_tol) {
    const auto k = static_cast<Index>(support.size());
    if (k == 0 || k > phi.rows()) {
        return std::nullopt;
    }
    Matrix sub(phi.rows(), k);
    for (Index j = 0; j < k; ++j) {
        sub.col(j) = phi.col(support[j]);
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    if (qr.rank() < k) {
        return std::nullopt;
    }
    const Vector coef = qr.solve(y);
    if ((sub * coef - y).norm() > feas_tol * y.norm()) {
        return std::nullopt;
    }
    Candidate c;
    c.x = Vector::Zero(phi.cols());
    Vector signed_w(k);
    for (Index j = 0; j < k; ++j) {
        c.x[support[j]] = coef[j];
        const double s = coef[j] != 0.0 ? coef[j] : sign_hint[support[j]];
        signed_w[j] = std::copysign(w[support[j]], s);
    }
    c.upper = w.dot(c.x.cwiseAbs());
    const Vector gap = signed_w - sub.transpose() * pi0;
    const Vector correction = sub * (sub.transpose() * sub).ldlt().solve(gap);
    c.lower = dual_lower_bound(phi, y, w, pi0 + correction);
    return c;
}

}  // namespace detail
}  // namespace lgg
