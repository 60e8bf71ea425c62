// ADMM for  min sum w_i |z_i|  s.t.  Phi x = y,  x = z  (scaled dual u).
//
//   x <- projection of (z - u) onto {Phi x = y}
//   z <- soft-threshold(x + u, w / rho)
//   u <- u + x - z
//
// The x-iterate is feasible to rounding, so only optimality needs
// certifying. Every few iterations a dual point is built from rho * u,
// optionally refined on the support of z, and scaled into the dual
// feasible set; its objective is a lower bound. A least-squares polish on
// the support of z gives a second primal candidate. Stop once the best
// primal/dual pair closes the relative gap.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lgg/errors.hpp"
#include "solver_backends.hpp"

namespace lgg::detail {
namespace {

constexpr int kCheckInterval = 10;
constexpr double kBalanceRatio = 10.0;

}  // namespace

SolveReport admm_solve(const Matrix& phi, const Vector& y, const Vector& w,
                       const SolverParams& params, const RowGram& gram, AdmmState* warm) {
    const Index N = phi.cols();
    const auto project = [&](const Vector& v) -> Vector {
        return v - phi.transpose() * gram.solve(phi * v - y);
    };

    Vector x, z, u;
    double rho = 0.0;
    if (warm != nullptr && warm->x.size() == N && warm->rho > 0.0) {
        x = warm->x;
        z = warm->z;
        // Keep rho * u aligned with the subgradient under the new weights.
        u = warm->u.cwiseProduct(w).cwiseQuotient(warm->weights);
        rho = warm->rho;
    } else {
        x = (warm != nullptr && warm->x.size() == N) ? project(warm->x) : project(Vector::Zero(N));
        z = x;
        u = Vector::Zero(N);
        const double rms = x.norm() / std::sqrt(static_cast<double>(N));
        rho = w.mean() / std::max(rms, 1e-300);
    }

    SolveReport report;
    Candidate best;
    best.upper = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= params.max_iterations; ++iter) {
        x = project(z - u);
        const Vector z_prev = z;
        const Vector v = x + u;
        const Vector threshold = w / rho;
        z = (v.array().abs() - threshold.array()).max(0.0) * v.array().sign();
        u += x - z;
        report.iterations = iter;

        if (iter % kCheckInterval != 0 && iter != params.max_iterations) {
            continue;
        }

        const Vector pi0 = gram.solve(phi * (rho * u));
        Candidate plain{x, w.dot(x.cwiseAbs()), dual_lower_bound(phi, y, w, pi0)};
        best = plain;
        // Rank by |x + u| / w: z is nonzero exactly on a prefix of this order.
        std::vector<Index> order(static_cast<std::size_t>(N));
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(v[a]) / w[a] > std::abs(v[b]) / w[b]; });
        const auto nonzero = std::count_if(order.begin(), order.end(), [&](Index i) { return z[i] != 0.0; });
        auto try_top = [&](std::ptrdiff_t count) {
            std::vector<Index> support(order.begin(), order.begin() + count);
            std::sort(support.begin(), support.end());
            return polish_on_support(phi, y, w, support, v, pi0, params.feasibility_tol);
        };
        auto polished = nonzero <= phi.rows() ? try_top(nonzero) : std::nullopt;
        if (!polished && iter % (4 * kCheckInterval) == 0) {
            polished = try_top(std::min<std::ptrdiff_t>(phi.rows(), N));
        }
        if (polished) {
            if (polished->upper < best.upper) {
                best.x = polished->x;
                best.upper = polished->upper;
            }
            best.lower = std::max(best.lower, polished->lower);
        }
        if (best.upper - best.lower <= params.optimality_tol * std::abs(best.upper)) {
            report.converged = true;
            break;
        }

        const double r_norm = (x - z).norm();
        const double s_norm = rho * (z - z_prev).norm();
        if (r_norm > kBalanceRatio * s_norm) {
            rho *= 2.0;
            u /= 2.0;
        } else if (s_norm > kBalanceRatio * r_norm) {
            rho /= 2.0;
            u *= 2.0;
        }
    }

    if (warm != nullptr) {
        warm->x = best.x;
        warm->z = z;
        warm->u = u;
        warm->weights = w;
        warm->rho = rho;
    }
    if (std::isfinite(best.upper)) {
        report.gap = (best.upper - best.lower) / std::max(std::abs(best.upper), 1e-300);
    }
    report.x = std::move(best.x);
    report.residual = relative_residual(phi, report.x, y);
    report.objective = w.dot(report.x.cwiseAbs());
    report.converged = report.converged && report.residual <= params.feasibility_tol;
    return report;
}

}  // namespace lgg::detail
