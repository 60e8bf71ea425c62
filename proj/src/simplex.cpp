// Two-phase dense tableau simplex with Bland's rule (no cycling).
// Standard form:  min w^T (u + v)  s.t.  [Phi, -Phi] (u; v) = y,  u, v >= 0.

#include <cmath>
#include <limits>
#include <vector>

#include "lgg/errors.hpp"
#include "solver_backends.hpp"

namespace lgg::detail {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;
constexpr int kPivotCap = 100000;

class Tableau {
public:
    Tableau(const Matrix& a, const Vector& b)
        : rows_(a.rows()), structural_(a.cols()), table_(a.rows() + 1, a.cols() + a.rows() + 1),
          basis_(static_cast<std::size_t>(a.rows())) {
        table_.setZero();
        for (Index i = 0; i < rows_; ++i) {
            const double sign = b[i] < 0.0 ? -1.0 : 1.0;
            table_.row(i).head(structural_) = sign * a.row(i);
            table_(i, structural_ + i) = 1.0;
            table_(i, rhs()) = sign * b[i];
            basis_[i] = structural_ + i;
        }
    }

    Index rhs() const { return structural_ + rows_; }
    Index cost_row() const { return rows_; }
    bool is_artificial(Index j) const { return j >= structural_; }

    void set_costs(const Vector& costs) {
        table_.row(cost_row()).setZero();
        table_.row(cost_row()).head(costs.size()) = costs.transpose();
        for (Index i = 0; i < rows_; ++i) {
            const double cb = table_(cost_row(), basis_[i]);
            if (cb != 0.0) {
                table_.row(cost_row()) -= cb * table_.row(i);
            }
        }
    }

    void pivot(Index r, Index c) {
        table_.row(r) /= table_(r, c);
        for (Index i = 0; i <= rows_; ++i) {
            if (i != r && table_(i, c) != 0.0) {
                table_.row(i) -= table_(i, c) * table_.row(r);
            }
        }
        basis_[r] = c;
    }

    /// Runs Bland-rule pivots until optimal. Artificial columns never enter.
    void optimize(int& pivots) {
        const double scale = std::max(1.0, table_.row(cost_row()).head(structural_).cwiseAbs().maxCoeff());
        while (true) {
            Index entering = -1;
            for (Index j = 0; j < structural_; ++j) {
                const double column = std::max(1.0, table_.col(j).head(rows_).cwiseAbs().maxCoeff());
                if (table_(cost_row(), j) < -kCostTol * scale * column) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                return;
            }
            Index leaving = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < rows_; ++i) {
                const double a = table_(i, entering);
                if (a > kPivotTol) {
                    const double ratio = table_(i, rhs()) / a;
                    if (ratio < best_ratio - 1e-15 ||
                        (leaving >= 0 && std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leaving])) {
                        best_ratio = ratio;
                        leaving = i;
                    }
                }
            }
            if (leaving < 0) {
                throw SolverError("reference LP is unbounded");
            }
            pivot(leaving, entering);
            if (++pivots > kPivotCap) {
                throw SolverError("reference LP exceeded pivot cap");
            }
        }
    }

    /// Pivots artificial variables out of the basis where possible.
    void expel_artificials() {
        for (Index i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) {
                continue;
            }
            for (Index j = 0; j < structural_; ++j) {
                if (std::abs(table_(i, j)) > 1e-9) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    double objective() const { return -table_(cost_row(), rhs()); }

    Vector solution() const {
        Vector z = Vector::Zero(structural_);
        for (Index i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) {
                z[basis_[i]] = table_(i, rhs());
            }
        }
        return z;
    }

private:
    Index rows_;
    Index structural_;
    Matrix table_;
    std::vector<Index> basis_;
};

}  // namespace

Vector simplex_solve(const Matrix& phi, const Vector& y, const Vector& w) {
    const Index N = phi.cols();
    Matrix a(phi.rows(), 2 * N);
    a.leftCols(N) = phi;
    a.rightCols(N) = -phi;
    Tableau tableau(a, y);
    int pivots = 0;

    // Phase 1: minimize the sum of artificials.
    Vector phase1 = Vector::Zero(2 * N + phi.rows());
    phase1.tail(phi.rows()).setOnes();
    tableau.set_costs(phase1);
    // Phase 1 lets artificials leave but never re-enter; Bland over structurals suffices.
    tableau.optimize(pivots);
    if (tableau.objective() > 1e-9 * (1.0 + y.cwiseAbs().sum())) {
        throw InfeasibleError("reference LP: Phi x = y is infeasible");
    }
    tableau.expel_artificials();

    Vector costs(2 * N);
    costs << w, w;
    tableau.set_costs(costs);
    tableau.optimize(pivots);

    const Vector z = tableau.solution();
    return z.head(N) - z.tail(N);
}

}  // namespace lgg::detail
