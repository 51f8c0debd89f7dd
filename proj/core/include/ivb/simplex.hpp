#pragma once

#include <vector>

#include "ivb/errors.hpp"
#include "ivb/rational.hpp"

namespace ivb {

// One linear row a . x (compared against b as == or <=).
struct LinearRow {
    std::vector<Rat> a;
    Rat b;
};

// minimize / maximize  objective . x
// subject to           eq[i].a . x == eq[i].b
//                      le[i].a . x <= le[i].b
//                      x >= 0
struct LinearProgram {
    int num_vars = 0;
    std::vector<LinearRow> eq;
    std::vector<LinearRow> le;
    std::vector<Rat> objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpSense { Minimize, Maximize };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
    std::vector<Rat> x;  // witness point (structural variables only)
};

// Exact two-phase primal simplex over rationals with Bland's pivoting
// rule (smallest-index entering column; smallest basic index on ratio
// ties), which terminates on the degenerate programs this library builds.
// A solver instance runs phase 1 once and can then optimize any number of
// objectives over the same constraints, reusing the current basis.
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram& lp);

    bool feasible() const { return feasible_; }

    // Requires feasible(). Phase-2 optimization from the current basis.
    LpSolution optimize(const std::vector<Rat>& objective, LpSense sense);

private:
    int n_struct_;               // structural variables (incl. slacks)
    int n_orig_;                 // caller-visible variables
    int art_begin_;              // first artificial column
    int n_cols_;                 // total columns incl. artificials
    bool feasible_ = false;
    std::vector<std::vector<Rat>> tab_;  // m rows, n_cols_+1 (rhs last)
    std::vector<Rat> obj_row_;           // reduced costs, size n_cols_+1
    std::vector<int> basis_;             // basic variable per row
    std::vector<bool> row_active_;       // false for redundant rows

    void pivot(int row, int col);
    // Returns true on optimal, false on unbounded. Columns >= col_limit
    // never enter the basis.
    bool run_simplex(int col_limit);
    void load_objective(const std::vector<Rat>& cost);  // cost over all cols
    std::vector<Rat> extract_point() const;
};

// One-shot convenience wrapper.
LpSolution solve_lp(const LinearProgram& lp, LpSense sense);

}  // namespace ivb
