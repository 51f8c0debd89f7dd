#include "doctest.h"

#include "../helpers.hpp"
#include "ivb/oracle.hpp"
#include "ivb/synthetic.hpp"

using namespace ivb;
using ivbtest::infeasible_witness_law;
using ivbtest::perfect_compliance_law;
using ivbtest::sample_feasible_observed;

TEST_CASE("solve_lp picks the right simplex vertex") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.eq.push_back({{Rat(1), Rat(1)}, Rat(1)});
    lp.objective = {Rat(1), Rat(0)};
    auto sol = solve_lp(lp, LpSense::Maximize);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rat(1));
    CHECK(sol.x[0] == Rat(1));
    CHECK(sol.x[1] == Rat(0));

    auto lo = solve_lp(lp, LpSense::Minimize);
    CHECK(lo.value == Rat(0));
}

TEST_CASE("solve_lp detects contradictory equalities") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.eq.push_back({{Rat(1)}, Rat(1)});
    lp.eq.push_back({{Rat(1)}, Rat(0)});
    lp.objective = {Rat(1)};
    CHECK(solve_lp(lp, LpSense::Minimize).status == LpStatus::Infeasible);
}

TEST_CASE("solve_lp handles inequality rows and redundancy") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.eq.push_back({{Rat(1), Rat(1)}, Rat(1)});
    lp.eq.push_back({{Rat(2), Rat(2)}, Rat(2)});  // redundant copy
    lp.le.push_back({{Rat(1), Rat(0)}, Rat(1, 2)});
    lp.objective = {Rat(1), Rat(0)};
    auto hi = solve_lp(lp, LpSense::Maximize);
    REQUIRE(hi.status == LpStatus::Optimal);
    CHECK(hi.value == Rat(1, 2));
}

TEST_CASE("solve_lp reports unbounded directions") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.le.push_back({{Rat(1), Rat(-1)}, Rat(1)});
    lp.objective = {Rat(1), Rat(0)};
    CHECK(solve_lp(lp, LpSense::Maximize).status == LpStatus::Unbounded);
}

TEST_CASE("atom_margin follows consistency") {
    ResponseAtom always_take_he{0b1, 0, 1};  // K=1, X(z1)=1, helped
    CHECK(atom_margin(always_take_he, 0, 1, 1) == 1);
    CHECK(atom_margin(always_take_he, 0, 1, 0) == 0);
    CHECK(atom_margin(always_take_he, 0, 0, 0) == 0);
    CHECK(atom_margin(always_take_he, 0, 0, 1) == 0);

    ResponseAtom never_take_nr{0b0, 0, 0};
    CHECK(atom_margin(never_take_nr, 0, 0, 0) == 1);
}

TEST_CASE("enumerate_atoms covers the canonical partition") {
    auto atoms = enumerate_atoms(3);
    CHECK(atoms.size() == 4u << 3);
    CHECK_THROWS_AS(enumerate_atoms(k_max_oracle + 1), OracleSizeExceeded);
}

TEST_CASE("oracle pins pi1 under perfect compliance") {
    auto law = perfect_compliance_law<Rat>();
    auto res = oracle_bounds(law, OracleObjective::Pi1);
    REQUIRE(res.lp_feasible);
    CHECK(res.itv.lo == Rat(3, 5));
    CHECK(res.itv.hi == Rat(3, 5));
}

TEST_CASE("oracle matches the closed form on the uniform law") {
    auto law = to_rational(ObservedLaw<double>::uniform(2));
    auto ace = oracle_bounds(law, OracleObjective::Ace);
    REQUIRE(ace.lp_feasible);
    CHECK(ace.itv.lo == Rat(-1, 2));
    CHECK(ace.itv.hi == Rat(1, 2));
}

TEST_CASE("oracle is infeasible on the violating law") {
    auto law = to_rational(infeasible_witness_law<double>());
    CHECK(!oracle_bounds(law, OracleObjective::Pi1).lp_feasible);
}

TEST_CASE("oracle membership examples") {
    auto uniform_law = to_rational(ObservedLaw<double>::uniform(2));
    CHECK(oracle_membership(to_rational(OutcomeJoint<double>::uniform()),
                            uniform_law));

    ObservedLaw<Rat> nr_law;
    nr_law.K = 1;
    nr_law.table.resize(1);
    nr_law.labels = {1};
    nr_law.table[0].p[0][0] = Rat(1);
    OutcomeJoint<Rat> ar;
    ar.q[1][1] = Rat(1);
    CHECK(!oracle_membership(ar, nr_law));
}

TEST_CASE("oracle membership agrees with the closed-form test") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        GeneratorConfig cfg{2, derive_seed(101, seed), 0.8,
                            GenMode::ObservedOnly};
        auto law = sample_observed<Rat>(cfg);
        Rng rng(derive_seed(103, seed));
        auto draws = rng.dirichlet(4, 0.8);
        OutcomeJoint<Rat> joint;
        joint.q = {{{Rat(draws[0]), Rat(draws[1])},
                    {Rat(draws[2]), Rat(draws[3])}}};
        // exact-renormalize so the joint sums to 1
        Rat total = joint.total();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) joint.q[a][b] /= total;
        bool closed = membership_test(joint, law).pass;
        bool lp = oracle_membership(joint, law);
        CHECK(closed == lp);
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("closed form equals the oracle on random feasible laws") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        int K = 2 + static_cast<int>(seed % 2);
        auto law = sample_feasible_observed<Rat>(K, derive_seed(107, seed));
        auto rep = ace_interval(law);
        OracleProblem prob(law);
        REQUIRE(prob.feasible());
        auto pi0 = prob.bounds(OracleObjective::Pi0);
        auto pi1 = prob.bounds(OracleObjective::Pi1);
        auto ace = prob.bounds(OracleObjective::Ace);
        CHECK(pi0.lo == rep.pi0.lo);
        CHECK(pi0.hi == rep.pi0.hi);
        CHECK(pi1.lo == rep.pi1.lo);
        CHECK(pi1.hi == rep.pi1.hi);
        CHECK(ace.lo == rep.ace.lo);
        CHECK(ace.hi == rep.ace.hi);
    }
}

TEST_CASE("optimal weights push forward to the input law") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto law = sample_feasible_observed<Rat>(2, derive_seed(109, seed));
        OracleProblem prob(law);
        REQUIRE(prob.feasible());
        prob.bounds(OracleObjective::Ace);
        auto full = weights_to_m1(prob.atoms(), prob.last_weights(), law.K);
        auto [joint, law2] = phi(full);
        for (int z = 0; z < law.K; ++z)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    CHECK(law2.p(z, x, y) == law.p(z, x, y));
    }
}

TEST_CASE("witness output is LP-feasible as atom weights") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto law = sample_feasible_observed<Rat>(2, derive_seed(113, seed));
        auto joint = pick_outcome_joint(law, JointPick::Midpoint);
        auto full = construct_witness(law, joint);
        // verify the witness satisfies every observed-cell constraint
        auto [joint2, law2] = phi(full);
        for (int z = 0; z < law.K; ++z)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    CHECK(law2.p(z, x, y) == law.p(z, x, y));
        CHECK(oracle_membership(joint, law));
    }
}

TEST_CASE("restricting atoms to constant compliance shrinks the interval") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto law = sample_feasible_observed<Rat>(2, derive_seed(127, seed));
        OracleProblem full(law);
        REQUIRE(full.feasible());
        auto wide = full.bounds(OracleObjective::Ace);

        std::vector<ResponseAtom> constant;
        for (const auto& atom : enumerate_atoms(law.K))
            if (atom.compliance == 0 ||
                atom.compliance == (1u << law.K) - 1)
                constant.push_back(atom);
        OracleProblem restricted(law, constant);
        if (!restricted.feasible()) continue;  // empty is a valid shrink
        auto narrow = restricted.bounds(OracleObjective::Ace);
        CHECK(narrow.lo >= wide.lo);
        CHECK(narrow.hi <= wide.hi);
    }
}
