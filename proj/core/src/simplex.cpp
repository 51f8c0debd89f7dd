#include "ivb/simplex.hpp"

#include <cassert>

namespace ivb {

SimplexSolver::SimplexSolver(const LinearProgram& lp) {
    const int m = static_cast<int>(lp.eq.size() + lp.le.size());
    n_orig_ = lp.num_vars;
    n_struct_ = lp.num_vars + static_cast<int>(lp.le.size());
    art_begin_ = n_struct_;
    n_cols_ = n_struct_ + m;

    tab_.assign(m, std::vector<Rat>(n_cols_ + 1, Rat(0)));
    basis_.assign(m, 0);
    row_active_.assign(m, true);

    int r = 0;
    for (const auto& row : lp.eq) {
        for (int j = 0; j < n_orig_; ++j) tab_[r][j] = row.a[j];
        tab_[r][n_cols_] = row.b;
        ++r;
    }
    int slack = n_orig_;
    for (const auto& row : lp.le) {
        for (int j = 0; j < n_orig_; ++j) tab_[r][j] = row.a[j];
        tab_[r][slack] = Rat(1);
        tab_[r][n_cols_] = row.b;
        ++slack;
        ++r;
    }
    // sign-normalize so every rhs is nonnegative, then put one artificial
    // per row into the basis
    for (int i = 0; i < m; ++i) {
        if (tab_[i][n_cols_] < Rat(0))
            for (auto& v : tab_[i]) v = -v;
        tab_[i][art_begin_ + i] = Rat(1);
        basis_[i] = art_begin_ + i;
    }

    // phase 1: minimize the sum of artificials
    std::vector<Rat> phase1_cost(n_cols_, Rat(0));
    for (int j = art_begin_; j < n_cols_; ++j) phase1_cost[j] = Rat(1);
    load_objective(phase1_cost);
    if (!run_simplex(n_cols_))
        throw InternalUnbounded("phase 1 cannot be unbounded");
    if (-obj_row_[n_cols_] != Rat(0)) {
        feasible_ = false;
        return;
    }
    feasible_ = true;

    // Drive any artificial still basic (at value zero) out of the basis;
    // rows with no structural pivot left are redundant constraints.
    for (int i = 0; i < m; ++i) {
        if (basis_[i] < art_begin_) continue;
        int col = -1;
        for (int j = 0; j < n_struct_; ++j)
            if (tab_[i][j] != Rat(0)) { col = j; break; }
        if (col < 0)
            row_active_[i] = false;
        else
            pivot(i, col);
    }
}

void SimplexSolver::pivot(int row, int col) {
    const Rat piv = tab_[row][col];
    assert(piv != Rat(0));
    for (auto& v : tab_[row]) v /= piv;
    for (int i = 0; i < static_cast<int>(tab_.size()); ++i) {
        if (i == row) continue;
        const Rat f = tab_[i][col];
        if (f == Rat(0)) continue;
        for (int j = 0; j <= n_cols_; ++j)
            if (tab_[row][j] != Rat(0)) tab_[i][j] -= f * tab_[row][j];
    }
    const Rat f = obj_row_[col];
    if (f != Rat(0))
        for (int j = 0; j <= n_cols_; ++j)
            if (tab_[row][j] != Rat(0)) obj_row_[j] -= f * tab_[row][j];
    basis_[row] = col;
}

void SimplexSolver::load_objective(const std::vector<Rat>& cost) {
    obj_row_.assign(n_cols_ + 1, Rat(0));
    for (int j = 0; j < n_cols_; ++j) obj_row_[j] = cost[j];
    // zero out the reduced costs of the current basis
    for (int i = 0; i < static_cast<int>(tab_.size()); ++i) {
        if (!row_active_[i]) continue;
        const Rat f = obj_row_[basis_[i]];
        if (f == Rat(0)) continue;
        for (int j = 0; j <= n_cols_; ++j)
            if (tab_[i][j] != Rat(0)) obj_row_[j] -= f * tab_[i][j];
    }
}

bool SimplexSolver::run_simplex(int col_limit) {
    const int m = static_cast<int>(tab_.size());
    for (;;) {
        int enter = -1;
        for (int j = 0; j < col_limit; ++j)
            if (obj_row_[j] < Rat(0)) { enter = j; break; }  // Bland
        if (enter < 0) return true;

        int leave = -1;
        Rat best_ratio;
        for (int i = 0; i < m; ++i) {
            if (!row_active_[i]) continue;
            if (!(tab_[i][enter] > Rat(0))) continue;
            Rat ratio = tab_[i][n_cols_] / tab_[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return false;  // unbounded direction
        pivot(leave, enter);
    }
}

std::vector<Rat> SimplexSolver::extract_point() const {
    std::vector<Rat> x(n_orig_, Rat(0));
    for (int i = 0; i < static_cast<int>(tab_.size()); ++i)
        if (row_active_[i] && basis_[i] < n_orig_)
            x[basis_[i]] = tab_[i][n_cols_];
    return x;
}

LpSolution SimplexSolver::optimize(const std::vector<Rat>& objective,
                                   LpSense sense) {
    if (!feasible_) return {LpStatus::Infeasible, Rat(0), {}};
    std::vector<Rat> cost(n_cols_, Rat(0));
    for (int j = 0; j < n_orig_ && j < static_cast<int>(objective.size()); ++j)
        cost[j] = sense == LpSense::Minimize ? objective[j] : -objective[j];
    load_objective(cost);
    // artificials stay out: entering columns are restricted to structurals
    if (!run_simplex(n_struct_)) return {LpStatus::Unbounded, Rat(0), {}};
    Rat value = -obj_row_[n_cols_];
    if (sense == LpSense::Maximize) value = -value;
    return {LpStatus::Optimal, value, extract_point()};
}

LpSolution solve_lp(const LinearProgram& lp, LpSense sense) {
    SimplexSolver solver(lp);
    if (!solver.feasible()) return {LpStatus::Infeasible, Rat(0), {}};
    return solver.optimize(lp.objective, sense);
}

}  // namespace ivb
