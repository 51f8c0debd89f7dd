#include "ivb/oracle.hpp"

namespace ivb {

std::vector<ResponseAtom> enumerate_atoms(int K) {
    if (K > k_max_oracle)
        throw OracleSizeExceeded("K = " + std::to_string(K) +
                                 " exceeds the oracle limit " +
                                 std::to_string(k_max_oracle));
    std::vector<ResponseAtom> atoms;
    atoms.reserve(std::size_t(4) << K);
    for (int t = 0; t < 4; ++t)
        for (std::uint32_t c = 0; c < (1u << K); ++c)
            atoms.push_back({c, t >> 1, t & 1});
    return atoms;
}

LinearProgram build_oracle_lp(const ObservedLaw<Rat>& law,
                              const std::vector<ResponseAtom>& atoms,
                              const OutcomeJoint<Rat>* fixed_margin) {
    const int n = static_cast<int>(atoms.size());
    LinearProgram lp;
    lp.num_vars = n;
    lp.objective.assign(n, Rat(0));

    LinearRow sum_row;
    sum_row.a.assign(n, Rat(1));
    sum_row.b = Rat(1);
    lp.eq.push_back(std::move(sum_row));

    // one observed cell per (z, x, y), skipping (1,1): given the sum row,
    // each slice's fourth cell is implied
    for (int z = 0; z < law.K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                if (x == 1 && y == 1) continue;
                LinearRow row;
                row.a.assign(n, Rat(0));
                for (int a = 0; a < n; ++a)
                    if (atom_margin(atoms[a], z, x, y)) row.a[a] = Rat(1);
                row.b = law.p(z, x, y);
                lp.eq.push_back(std::move(row));
            }

    if (fixed_margin) {
        // pin the (Y(x0), Y(x1)) margin; the AR cell is implied
        for (int y0 = 0; y0 < 2; ++y0)
            for (int y1 = 0; y1 < 2; ++y1) {
                if (y0 == 1 && y1 == 1) continue;
                LinearRow row;
                row.a.assign(n, Rat(0));
                for (int a = 0; a < n; ++a)
                    if (atoms[a].y0 == y0 && atoms[a].y1 == y1)
                        row.a[a] = Rat(1);
                row.b = fixed_margin->q[y0][y1];
                lp.eq.push_back(std::move(row));
            }
    }
    return lp;
}

OracleProblem::OracleProblem(const ObservedLaw<Rat>& law)
    : OracleProblem(law, enumerate_atoms(law.K)) {}

OracleProblem::OracleProblem(const ObservedLaw<Rat>& law,
                             std::vector<ResponseAtom> atoms)
    : atoms_(std::move(atoms)) {
    LinearProgram lp = build_oracle_lp(law, atoms_, nullptr);
    solver_ = std::make_unique<SimplexSolver>(lp);
}

bool OracleProblem::feasible() const { return solver_->feasible(); }

Rat OracleProblem::solve_one(const std::vector<Rat>& c, LpSense sense) {
    LpSolution sol = solver_->optimize(c, sense);
    if (sol.status == LpStatus::Unbounded)
        throw InternalUnbounded("oracle LP reported unbounded");
    last_weights_ = std::move(sol.x);
    return sol.value;
}

Interval<Rat> OracleProblem::bounds(OracleObjective obj) {
    const int n = static_cast<int>(atoms_.size());
    std::vector<Rat> c(n, Rat(0));
    for (int a = 0; a < n; ++a) {
        switch (obj) {
            case OracleObjective::Pi0: c[a] = Rat(atoms_[a].y0); break;
            case OracleObjective::Pi1: c[a] = Rat(atoms_[a].y1); break;
            case OracleObjective::Ace:
                c[a] = Rat(atoms_[a].y1 - atoms_[a].y0);
                break;
        }
    }
    Rat lo = solve_one(c, LpSense::Minimize);
    Rat hi = solve_one(c, LpSense::Maximize);
    return {lo, hi};
}

OracleInterval oracle_bounds(const ObservedLaw<Rat>& law,
                             OracleObjective obj) {
    OracleProblem prob(law);
    if (!prob.feasible()) return {false, {Rat(1), Rat(0)}};
    return {true, prob.bounds(obj)};
}

bool oracle_membership(const OutcomeJoint<Rat>& joint,
                       const ObservedLaw<Rat>& law) {
    auto atoms = enumerate_atoms(law.K);
    LinearProgram lp = build_oracle_lp(law, atoms, &joint);
    SimplexSolver solver(lp);
    return solver.feasible();
}

FullM1Law<Rat> weights_to_m1(const std::vector<ResponseAtom>& atoms,
                             const std::vector<Rat>& weights, int K,
                             const std::vector<Rat>* pz) {
    FullM1Law<Rat> full;
    full.K = K;
    if (pz)
        full.pz = *pz;
    else
        full.pz.assign(K, Rat(1) / Rat(K));
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (weights[a] == Rat(0)) continue;
        full.atoms.push_back(
            {{atoms[a].compliance, atoms[a].y0, atoms[a].y1}, weights[a]});
    }
    full.sort_atoms();
    return full;
}

}  // namespace ivb
