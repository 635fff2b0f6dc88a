#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace refp {

enum class Relation { LessEq, GreaterEq, Eq };

struct LpConstraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0;
};

/** A linear program in inequality form: maximize objective . x subject to the
 * listed constraints and per-variable lower bounds (default 0).
 */
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;
    std::vector<double> lower_bounds;  // empty means all zero

    void add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
        constraints.push_back({std::move(coeffs), rel, rhs});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0;
};

namespace detail {

constexpr double kLpEps = 1e-7;

/** Dense two-phase tableau simplex with Bland's anti-cycling rule (lowest
 * index entering; ratio ties resolved toward the lowest basic variable
 * index), so identical problems pivot identically and yield bitwise-identical
 * solutions.
 */
class SimplexTableau {
  public:
    explicit SimplexTableau(const LpProblem& problem) : nvars_(problem.objective.size()) {
        shift_ = problem.lower_bounds;
        shift_.resize(nvars_, 0.0);

        size_t rows = problem.constraints.size();
        size_t slack_count = 0;
        for (const auto& c : problem.constraints)
            if (c.rel != Relation::Eq) ++slack_count;

        std::vector<std::vector<double>> body(rows);
        std::vector<double> rhs(rows);
        std::vector<Relation> rel(rows);
        for (size_t r = 0; r < rows; ++r) {
            const auto& c = problem.constraints[r];
            if (c.coeffs.size() != nvars_)
                throw std::invalid_argument("constraint arity does not match objective");
            body[r] = c.coeffs;
            rel[r] = c.rel;
            // Substitute x = y + lower_bound, y >= 0.
            double b = c.rhs;
            for (size_t v = 0; v < nvars_; ++v) b -= c.coeffs[v] * shift_[v];
            rhs[r] = b;
            if (rhs[r] < 0) {
                for (auto& a : body[r]) a = -a;
                rhs[r] = -rhs[r];
                if (rel[r] == Relation::LessEq)
                    rel[r] = Relation::GreaterEq;
                else if (rel[r] == Relation::GreaterEq)
                    rel[r] = Relation::LessEq;
            }
        }

        // Column layout: structural vars, then one slack/surplus per
        // inequality row, then artificials for >= and = rows.
        size_t art_count = 0;
        for (size_t r = 0; r < rows; ++r)
            if (rel[r] != Relation::LessEq) ++art_count;
        ncols_ = nvars_ + slack_count + art_count;
        artificial_.assign(ncols_, false);

        tab_.assign(rows, std::vector<double>(ncols_ + 1, 0.0));
        basis_.assign(rows, 0);
        size_t slack_at = nvars_;
        size_t art_at = nvars_ + slack_count;
        for (size_t r = 0; r < rows; ++r) {
            for (size_t v = 0; v < nvars_; ++v) tab_[r][v] = body[r][v];
            tab_[r][ncols_] = rhs[r];
            if (rel[r] == Relation::LessEq) {
                tab_[r][slack_at] = 1.0;
                basis_[r] = static_cast<int>(slack_at++);
            } else if (rel[r] == Relation::GreaterEq) {
                tab_[r][slack_at++] = -1.0;
                tab_[r][art_at] = 1.0;
                artificial_[art_at] = true;
                basis_[r] = static_cast<int>(art_at++);
            } else {
                tab_[r][art_at] = 1.0;
                artificial_[art_at] = true;
                basis_[r] = static_cast<int>(art_at++);
            }
        }
    }

    LpSolution run(const std::vector<double>& objective) {
        LpSolution sol;
        if (!phase_one()) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        std::vector<double> cost(ncols_, 0.0);
        for (size_t v = 0; v < nvars_; ++v) cost[v] = objective[v];
        load_objective(cost);
        if (!optimize(/*allow_artificial=*/false)) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.x.assign(nvars_, 0.0);
        for (size_t r = 0; r < tab_.size(); ++r)
            if (static_cast<size_t>(basis_[r]) < nvars_) sol.x[basis_[r]] = tab_[r][ncols_];
        sol.objective_value = 0;
        for (size_t v = 0; v < nvars_; ++v) {
            sol.x[v] += shift_[v];
            sol.objective_value += objective[v] * sol.x[v];
        }
        return sol;
    }

  private:
    // Phase one: maximize minus the sum of artificials; feasible iff it
    // reaches zero. Basic artificials left at zero level are pivoted out or
    // their (redundant) rows dropped.
    bool phase_one() {
        bool any_art = false;
        for (size_t c = 0; c < ncols_; ++c)
            if (artificial_[c]) any_art = true;
        if (!any_art) {
            obj_.assign(ncols_ + 1, 0.0);
            return true;
        }
        std::vector<double> cost(ncols_, 0.0);
        for (size_t c = 0; c < ncols_; ++c)
            if (artificial_[c]) cost[c] = -1.0;
        load_objective(cost);
        optimize(/*allow_artificial=*/true);  // bounded above by zero
        if (obj_[ncols_] < -kLpEps) return false;

        for (size_t r = 0; r < tab_.size(); ++r) {
            if (!artificial_[basis_[r]]) continue;
            size_t pivot_col = ncols_;
            for (size_t c = 0; c < ncols_; ++c) {
                if (artificial_[c]) continue;
                if (std::fabs(tab_[r][c]) > kLpEps) {
                    pivot_col = c;
                    break;
                }
            }
            if (pivot_col < ncols_) {
                pivot(r, pivot_col);
            } else {
                // Redundant row: every structural coefficient is zero.
                tab_.erase(tab_.begin() + r);
                basis_.erase(basis_.begin() + r);
                --r;
            }
        }
        return true;
    }

    // Load a fresh objective and canonicalize against the current basis.
    // obj_[c] holds the reduced cost z_c - cost_c; obj_[ncols_] the value.
    void load_objective(const std::vector<double>& cost) {
        obj_.assign(ncols_ + 1, 0.0);
        for (size_t c = 0; c < ncols_; ++c) obj_[c] = -cost[c];
        for (size_t r = 0; r < tab_.size(); ++r) {
            double factor = obj_[basis_[r]];
            if (factor == 0.0) continue;
            for (size_t c = 0; c <= ncols_; ++c) obj_[c] -= factor * tab_[r][c];
        }
    }

    bool optimize(bool allow_artificial) {
        for (;;) {
            size_t entering = ncols_;
            for (size_t c = 0; c < ncols_; ++c) {
                if (artificial_[c] && !allow_artificial) continue;
                if (obj_[c] < -kLpEps) {
                    entering = c;
                    break;
                }
            }
            if (entering == ncols_) return true;
            size_t leaving = tab_.size();
            double best_ratio = 0;
            for (size_t r = 0; r < tab_.size(); ++r) {
                if (tab_[r][entering] <= kLpEps) continue;
                double ratio = tab_[r][ncols_] / tab_[r][entering];
                if (leaving == tab_.size() || ratio < best_ratio - kLpEps ||
                    (ratio < best_ratio + kLpEps && basis_[r] < basis_[leaving])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            if (leaving == tab_.size()) return false;
            pivot(leaving, entering);
        }
    }

    void pivot(size_t row, size_t col) {
        double inv = 1.0 / tab_[row][col];
        for (size_t c = 0; c <= ncols_; ++c) tab_[row][c] *= inv;
        tab_[row][col] = 1.0;
        for (size_t r = 0; r < tab_.size(); ++r) {
            if (r == row) continue;
            double factor = tab_[r][col];
            if (factor == 0.0) continue;
            for (size_t c = 0; c <= ncols_; ++c) tab_[r][c] -= factor * tab_[row][c];
            tab_[r][col] = 0.0;
        }
        double factor = obj_[col];
        if (factor != 0.0) {
            for (size_t c = 0; c <= ncols_; ++c) obj_[c] -= factor * tab_[row][c];
            obj_[col] = 0.0;
        }
        basis_[row] = static_cast<int>(col);
    }

    size_t nvars_;
    size_t ncols_ = 0;
    std::vector<std::vector<double>> tab_;
    std::vector<double> obj_;
    std::vector<int> basis_;
    std::vector<bool> artificial_;
    std::vector<double> shift_;
};

}  // namespace detail

inline LpSolution solve(const LpProblem& problem) {
    detail::SimplexTableau tableau(problem);
    return tableau.run(problem.objective);
}

}  // namespace refp
