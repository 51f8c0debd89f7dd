#include "doctest.h"

#include "../helpers.hpp"
#include "ivb/oracle.hpp"
#include "ivb/synthetic.hpp"

using namespace ivb;

TEST_CASE("generators are deterministic given the seed") {
    GeneratorConfig cfg{3, 424242, 1.0, GenMode::ObservedOnly};
    auto a = sample_observed<double>(cfg);
    auto b = sample_observed<double>(cfg);
    for (int z = 0; z < 3; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) CHECK(a.p(z, x, y) == b.p(z, x, y));

    GeneratorConfig m1cfg{2, 11, 1.0, GenMode::FullM1};
    auto fa = sample_full_m1<double>(m1cfg);
    auto fb = sample_full_m1<double>(m1cfg);
    REQUIRE(fa.atoms.size() == fb.atoms.size());
    for (std::size_t i = 0; i < fa.atoms.size(); ++i)
        CHECK(fa.atoms[i].second == fb.atoms[i].second);
}

TEST_CASE("derived seeds give distinct streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("high concentration approaches the uniform law") {
    GeneratorConfig cfg{2, 7, 1000.0, GenMode::ObservedOnly};
    auto law = sample_observed<double>(cfg);
    for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                CHECK(law.p(z, x, y) == doctest::Approx(0.25).epsilon(0.2));
    CHECK(ace_interval(law).feasible);
}

TEST_CASE("feasibility rate is nondegenerate at concentration 1") {
    int feasible = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        GeneratorConfig cfg{2, derive_seed(157, i), 1.0,
                            GenMode::ObservedOnly};
        feasible += ace_interval(sample_observed<double>(cfg)).feasible;
    }
    CHECK(feasible > 0);
    CHECK(feasible < trials);
}

TEST_CASE("true_ace on handcrafted laws") {
    FullM1Law<double> uniform;
    uniform.K = 1;
    uniform.pz = {1.0};
    for (std::uint32_t bits = 0; bits < 2; ++bits)
        for (int y0 = 0; y0 < 2; ++y0)
            for (int y1 = 0; y1 < 2; ++y1)
                uniform.atoms.push_back({AtomKey{bits, y0, y1}, 0.125});
    CHECK(true_ace(uniform) == doctest::Approx(0.0));

    FullM1Law<double> he;
    he.K = 1;
    he.pz = {1.0};
    he.atoms = {{AtomKey{0, 0, 1}, 1.0}};
    CHECK(true_ace(he) == doctest::Approx(1.0));

    FullM1Law<double> hu;
    hu.K = 1;
    hu.pz = {1.0};
    hu.atoms = {{AtomKey{0, 1, 0}, 1.0}};
    CHECK(true_ace(hu) == doctest::Approx(-1.0));
}

TEST_CASE("sampled counterfactual laws project to valid feasible laws") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        GeneratorConfig cfg{1 + static_cast<int>(seed % 4),
                            derive_seed(163, seed), 1.0, GenMode::FullM1};
        auto full = sample_full_m1<double>(cfg);
        auto [joint, law] = phi(full);
        CHECK(validate_law(law).empty());
        CHECK(ace_interval(law).feasible);
        CHECK(membership_test(joint, law).pass);
    }
}

TEST_CASE("true_ace is covered by the closed-form interval") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GeneratorConfig cfg{1 + static_cast<int>(seed % 4),
                            derive_seed(167, seed), 0.8,
                            seed % 2 ? GenMode::BoundaryBiased
                                     : GenMode::FullM1};
        auto full = sample_full_m1<double>(cfg);
        auto law = phi(full).second;
        auto rep = ace_interval(law);
        CHECK(rep.ace.contains(true_ace(full), 1e-12));
    }
}

TEST_CASE("sharpness: witnesses attain the ACE endpoints") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto law = ivbtest::sample_feasible_observed<double>(
            2 + static_cast<int>(seed % 2), derive_seed(173, seed));
        auto rep = ace_interval(law);

        auto hi_joint = pick_outcome_joint(law, JointPick::MaximizeAce);
        auto hi_witness = construct_witness(law, hi_joint);
        CHECK(true_ace(hi_witness) == doctest::Approx(rep.ace.hi).epsilon(1e-9));

        auto lo_joint = pick_outcome_joint(law, JointPick::MinimizeAce);
        auto lo_witness = construct_witness(law, lo_joint);
        CHECK(true_ace(lo_witness) == doctest::Approx(rep.ace.lo).epsilon(1e-9));
    }
}

TEST_CASE("near-boundary laws straddle the feasibility boundary") {
    int feasible = 0, total = 120;
    for (int i = 0; i < total; ++i) {
        GeneratorConfig cfg{2, derive_seed(179, i), 1.0,
                            GenMode::BoundaryBiased};
        auto law = sample_near_boundary_observed<double>(cfg);
        CHECK(validate_law(law).empty());
        feasible += ace_interval(law).feasible;
    }
    CHECK(feasible > 0);
    CHECK(feasible < total);
}
