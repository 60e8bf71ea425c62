#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "lgg/l1_solver.hpp"

namespace lgg::detail {

struct AdmmState {
    Vector x;
    Vector z;
    Vector u;
    Vector weights;
    double rho = 0.0;
};

SolveReport admm_solve(const Matrix& phi, const Vector& y, const Vector& w,
                       const SolverParams& params, const RowGram& gram, AdmmState* warm);

SolveReport interior_point_solve(const Matrix& phi, const Vector& y, const Vector& w,
                                 const SolverParams& params, const RowGram& gram);

Vector simplex_solve(const Matrix& phi, const Vector& y, const Vector& w);

struct Candidate {
    Vector x;
    double upper = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
};

/// Least-squares solve on a candidate support (|support| <= n, full column
/// rank), paired with the dual point closest to pi0 that satisfies the
/// support's complementary slackness equations. sign_hint breaks sign ties
/// for coefficients that come out exactly zero. Returns nullopt when the
/// support cannot reproduce y to feas_tol.
std::optional<Candidate> polish_on_support(const Matrix& phi, const Vector& y, const Vector& w,
                                           const std::vector<Index>& support, const Vector& sign_hint,
                                           const Vector& pi0, double feas_tol);

/// Largest dual scaling certificate: given any pi, returns the lower bound
/// y^T pi / max(1, max_i |phi_i^T pi| / w_i) on the weighted-l1 optimum.
double dual_lower_bound(const Matrix& phi, const Vector& y, const Vector& w, const Vector& pi);

}  // namespace lgg::detail
