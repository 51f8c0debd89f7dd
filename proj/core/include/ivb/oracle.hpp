#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ivb/observed.hpp"
#include "ivb/simplex.hpp"
#include "ivb/witness.hpp"

namespace ivb {

// One canonical response type: a compliance function X(z) packed into the
// low K bits of `compliance`, and the potential-outcome pair (y0, y1)
// (NR = 00, HE = 01, HU = 10, AR = 11). There are 4 * 2^K atoms.
struct ResponseAtom {
    std::uint32_t compliance = 0;
    int y0 = 0;
    int y1 = 0;

    int x_at(int z) const { return (compliance >> z) & 1u; }
};

inline constexpr int k_max_oracle = 6;

// Consistency indicator: atom contributes to the observed cell
// P(X=x, Y=y | Z=z) iff it takes treatment x at level z and its potential
// outcome under x equals y.
inline int atom_margin(const ResponseAtom& atom, int z, int x, int y) {
    if (atom.x_at(z) != x) return 0;
    const int outcome = x == 0 ? atom.y0 : atom.y1;
    return outcome == y ? 1 : 0;
}

// Atoms in canonical order: ytype-major (NR, HE, HU, AR), compliance
// pattern minor. Index = (2*y0 + y1) * 2^K + compliance.
std::vector<ResponseAtom> enumerate_atoms(int K);

enum class OracleObjective { Pi0, Pi1, Ace };

struct OracleInterval {
    bool lp_feasible = false;
    Interval<Rat> itv;
};

// Ground-truth linear programs over the atom simplex for one observed law.
// Constraints: weights >= 0, sum to 1, and reproduce every observed cell.
// Redundant per-slice rows (the four cells of a slice already sum to one)
// are dropped. Exact rational arithmetic throughout.
class OracleProblem {
public:
    // Uses the full canonical atom set for law.K.
    explicit OracleProblem(const ObservedLaw<Rat>& law);
    // Restricts the simplex to the given atoms (for containment tests).
    OracleProblem(const ObservedLaw<Rat>& law,
                  std::vector<ResponseAtom> atoms);

    bool feasible() const;
    // min/max of the objective over the constrained simplex.
    // Throws InternalUnbounded if the solver ever reports unboundedness.
    Interval<Rat> bounds(OracleObjective obj);
    // Atom weights attaining the most recent optimize() call.
    const std::vector<Rat>& last_weights() const { return last_weights_; }
    const std::vector<ResponseAtom>& atoms() const { return atoms_; }

private:
    std::vector<ResponseAtom> atoms_;
    std::unique_ptr<SimplexSolver> solver_;
    std::vector<Rat> last_weights_;

    Rat solve_one(const std::vector<Rat>& c, LpSense sense);
};

// The LP encoding of the membership question (used by oracle_membership);
// exposed for tests that want the raw program.
LinearProgram build_oracle_lp(const ObservedLaw<Rat>& law,
                              const std::vector<ResponseAtom>& atoms,
                              const OutcomeJoint<Rat>* fixed_margin = nullptr);

// [min, max] of pi0 / pi1 / ACE over model (i), or lp_feasible = false if
// the observed law is incompatible with every IV model.
OracleInterval oracle_bounds(const ObservedLaw<Rat>& law, OracleObjective obj);

// True iff some model-(i) law maps to (joint, law) under phi.
bool oracle_membership(const OutcomeJoint<Rat>& joint,
                       const ObservedLaw<Rat>& law);

// Expands an atom-weight vector into a FullM1Law (uniform P(Z) unless
// given), so LP witnesses can be pushed through phi.
FullM1Law<Rat> weights_to_m1(const std::vector<ResponseAtom>& atoms,
                             const std::vector<Rat>& weights, int K,
                             const std::vector<Rat>* pz = nullptr);

}  // namespace ivb
