// Mehrotra predictor-corrector for
//   min w^T (u + v)  s.t.  Phi (u - v) = y,  u, v >= 0
// with dual  Phi^T pi + su = w,  -Phi^T pi + sv = w,  su, sv >= 0.
// Each step eliminates to the normal equations Phi diag(u/su + v/sv) Phi^T.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>
#include <limits>

#include "lgg/errors.hpp"
#include "solver_backends.hpp"

namespace lgg::detail {
namespace {

constexpr int kIterationCap = 200;
constexpr double kStepFraction = 0.995;
constexpr int kStallLimit = 8;
constexpr double kPolishFeasibility = 1e-11;

double max_step(const Vector& value, const Vector& step) {
    double alpha = 1.0;
    for (Index i = 0; i < value.size(); ++i) {
        if (step[i] < 0.0) {
            alpha = std::min(alpha, -value[i] / step[i]);
        }
    }
    return alpha;
}

struct Direction {
    Vector du, dv, dpi, dsu, dsv;
};

class NormalSystem {
public:
    explicit NormalSystem(const Matrix& phi) : phi_(phi), scaled_(phi.rows(), phi.cols()) {}

    bool factor(const Vector& d) {
        scaled_ = phi_ * d.cwiseSqrt().asDiagonal();
        normal_.setZero(phi_.rows(), phi_.rows());
        normal_.selfadjointView<Eigen::Lower>().rankUpdate(scaled_);
        // Tiny diagonal shift keeps the factorization alive once d spans
        // many orders of magnitude near the optimum.
        const double shift = 1e-14 * std::max(1.0, normal_.diagonal().maxCoeff());
        normal_.diagonal().array() += shift;
        llt_.compute(normal_);
        if (llt_.info() == Eigen::Success) {
            use_ldlt_ = false;
            return true;
        }
        ldlt_.compute(normal_.selfadjointView<Eigen::Lower>());
        use_ldlt_ = true;
        return ldlt_.info() == Eigen::Success;
    }

    Vector solve(const Vector& rhs) const {
        return use_ldlt_ ? Vector(ldlt_.solve(rhs)) : Vector(llt_.solve(rhs));
    }

private:
    const Matrix& phi_;
    Matrix scaled_;
    Matrix normal_;
    Eigen::LLT<Matrix, Eigen::Lower> llt_;
    Eigen::LDLT<Matrix> ldlt_;
    bool use_ldlt_ = false;
};

}  // namespace

SolveReport interior_point_solve(const Matrix& phi, const Vector& y, const Vector& w,
                                 const SolverParams& params, const RowGram& gram) {
    const Index N = phi.cols();

    // Starting point after Mehrotra: least-norm primal split into u, v,
    // zero multipliers, then shifted into the interior.
    const Vector xp = phi.transpose() * gram.solve(y);
    Vector u = 0.5 * xp;
    Vector v = -0.5 * xp;
    Vector pi = Vector::Zero(phi.rows());
    Vector su = w;
    Vector sv = w;
    const double shift = std::max(0.0, -1.5 * std::min(u.minCoeff(), v.minCoeff()));
    u.array() += shift;
    v.array() += shift;
    {
        const double xs = u.dot(su) + v.dot(sv);
        const double primal_shift = 0.5 * xs / (su.sum() + sv.sum());
        const double dual_shift = 0.5 * xs / std::max(u.sum() + v.sum(), 1e-300);
        u.array() += primal_shift;
        v.array() += primal_shift;
        su.array() += dual_shift;
        sv.array() += dual_shift;
    }

    NormalSystem system(phi);
    SolveReport report;
    Vector best;
    double best_gap = std::numeric_limits<double>::infinity();
    int stalled = 0;
    const double mu_start = (u.dot(su) + v.dot(sv)) / static_cast<double>(2 * N);
    const int cap = std::min(params.max_iterations, kIterationCap);

    for (int iter = 0; iter < cap; ++iter) {
        const Vector g = phi.transpose() * pi;
        const Vector rp = y - phi * (u - v);
        const Vector rdu = w - g - su;
        const Vector rdv = w + g - sv;
        const double mu = (u.dot(su) + v.dot(sv)) / static_cast<double>(2 * N);
        const double primal_obj = w.dot(u + v);
        const double dual_obj = y.dot(pi);

        report.iterations = iter;
        const double gap = std::abs(primal_obj - dual_obj) / std::max(std::abs(primal_obj), 1e-300);
        if (gap <= 10.0 * params.optimality_tol) {
            // Certify: exactly feasible primal candidates vs. scaled dual-feasible bounds.
            const double lower = dual_lower_bound(phi, y, w, pi);
            Candidate plain;
            plain.x = u - v;
            plain.x += phi.transpose() * gram.solve(y - phi * plain.x);
            plain.upper = w.dot(plain.x.cwiseAbs());
            plain.lower = lower;
            // Tapia indicator: primal dominates its slack on the optimal support.
            Vector ratio(N);
            for (Index i = 0; i < N; ++i) {
                ratio[i] = std::max(u[i] / su[i], v[i] / sv[i]);
            }
            std::vector<Index> order(static_cast<std::size_t>(N));
            std::iota(order.begin(), order.end(), Index{0});
            std::sort(order.begin(), order.end(), [&](Index a, Index b) { return ratio[a] > ratio[b]; });
            const auto on_support = std::count_if(order.begin(), order.end(), [&](Index i) { return ratio[i] > 1.0; });
            const Vector signs = u - v;
            auto try_top = [&](std::ptrdiff_t count) {
                std::vector<Index> support(order.begin(), order.begin() + count);
                std::sort(support.begin(), support.end());
                return polish_on_support(phi, y, w, support, signs, pi, kPolishFeasibility);
            };
            auto polished = try_top(on_support);
            if (!polished && on_support < phi.rows()) {
                // Degenerate vertex: complete the basis with the next strongest columns.
                polished = try_top(phi.rows());
            }
            Candidate& pick = (polished && polished->upper <= plain.upper) ? *polished : plain;
            const double lower_bound = polished ? std::max(lower, polished->lower) : lower;
            const double certified = (pick.upper - lower_bound) / pick.upper;
            if (certified < best_gap) {
                best_gap = certified;
                best = pick.x;
                stalled = 0;
            } else {
                ++stalled;
            }
            if (certified <= params.optimality_tol || stalled >= kStallLimit) {
                report.converged = certified <= params.optimality_tol;
                break;
            }
        }
        if (mu <= 1e-30 * mu_start) {
            break;
        }

        const Vector du_scale = u.cwiseQuotient(su);
        const Vector dv_scale = v.cwiseQuotient(sv);
        if (!system.factor(du_scale + dv_scale)) {
            break;
        }

        const auto direction = [&](const Vector& rcu, const Vector& rcv) {
            Direction d;
            const Vector inner = -du_scale.cwiseProduct(rdu) + dv_scale.cwiseProduct(rdv) +
                                 rcu.cwiseQuotient(su) - rcv.cwiseQuotient(sv);
            d.dpi = system.solve(rp - phi * inner);
            const Vector gp = phi.transpose() * d.dpi;
            d.du = du_scale.cwiseProduct(gp - rdu) + rcu.cwiseQuotient(su);
            d.dv = -dv_scale.cwiseProduct(gp + rdv) + rcv.cwiseQuotient(sv);
            d.dsu = rdu - gp;
            d.dsv = rdv + gp;
            return d;
        };

        // Predictor.
        const Vector rcu_aff = -u.cwiseProduct(su);
        const Vector rcv_aff = -v.cwiseProduct(sv);
        const Direction aff = direction(rcu_aff, rcv_aff);
        const double ap_aff = std::min(max_step(u, aff.du), max_step(v, aff.dv));
        const double ad_aff = std::min(max_step(su, aff.dsu), max_step(sv, aff.dsv));
        const double mu_aff = ((u + ap_aff * aff.du).dot(su + ad_aff * aff.dsu) +
                               (v + ap_aff * aff.dv).dot(sv + ad_aff * aff.dsv)) /
                              static_cast<double>(2 * N);
        const double sigma = std::pow(mu_aff / mu, 3);

        // Corrector.
        const Vector rcu = (sigma * mu - (u.cwiseProduct(su) + aff.du.cwiseProduct(aff.dsu)).array()).matrix();
        const Vector rcv = (sigma * mu - (v.cwiseProduct(sv) + aff.dv.cwiseProduct(aff.dsv)).array()).matrix();
        const Direction step = direction(rcu, rcv);
        const double ap = std::min(1.0, kStepFraction * std::min(max_step(u, step.du), max_step(v, step.dv)));
        const double ad =
            std::min(1.0, kStepFraction * std::min(max_step(su, step.dsu), max_step(sv, step.dsv)));

        u += ap * step.du;
        v += ap * step.dv;
        pi += ad * step.dpi;
        su += ad * step.dsu;
        sv += ad * step.dsv;
        report.iterations = iter + 1;
    }

    if (best.size() == 0) {
        best = u - v;
        best += phi.transpose() * gram.solve(y - phi * best);
    }
    report.x = std::move(best);
    report.residual = relative_residual(phi, report.x, y);
    report.objective = w.dot(report.x.cwiseAbs());
    report.gap = best_gap;
    report.converged = report.converged && report.residual <= params.feasibility_tol;
    return report;
}

}  // namespace lgg::detail
