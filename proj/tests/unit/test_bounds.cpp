#include "doctest.h"

#include <algorithm>

#include "../helpers.hpp"
#include "ivb/bounds.hpp"
#include "ivb/synthetic.hpp"

using namespace ivb;
using ivbtest::infeasible_witness_law;
using ivbtest::perfect_compliance_law;
using ivbtest::sample_feasible_observed;

TEST_CASE("marginal_upper on the uniform K=2 law") {
    auto law = ObservedLaw<double>::uniform(2);
    // family (a): 1/4 + 1/2 = 3/4; every cross term evaluates to 1
    CHECK(marginal_upper(law, 1, 1) == doctest::Approx(0.75));
    CHECK(marginal_upper(law, 0, 0) == doctest::Approx(0.75));
}

TEST_CASE("marginal_upper under perfect compliance") {
    auto law = perfect_compliance_law<double>();
    CHECK(marginal_upper(law, 1, 1) == doctest::Approx(0.6));
    CHECK(marginal_upper(law, 1, 0) == doctest::Approx(0.4));
    CHECK(marginal_upper(law, 0, 1) == doctest::Approx(1.0));
    CHECK(marginal_upper(law, 0, 0) == doctest::Approx(1.0));

    CHECK(marginal_interval(law, 1).lo == doctest::Approx(0.6));
    CHECK(marginal_interval(law, 1).hi == doctest::Approx(0.6));
    CHECK(marginal_interval(law, 0).lo == doctest::Approx(0.0));
    CHECK(marginal_interval(law, 0).hi == doctest::Approx(1.0));
}

TEST_CASE("ace_interval on the uniform K=2 law") {
    auto law = ObservedLaw<double>::uniform(2);
    auto rep = ace_interval(law);
    CHECK(rep.feasible);
    CHECK(rep.pi0.lo == doctest::Approx(0.25));
    CHECK(rep.pi0.hi == doctest::Approx(0.75));
    CHECK(rep.ace.lo == doctest::Approx(-0.5));
    CHECK(rep.ace.hi == doctest::Approx(0.5));
}

TEST_CASE("ace_interval under perfect compliance") {
    auto rep = ace_interval(perfect_compliance_law<double>());
    CHECK(rep.feasible);
    CHECK(rep.ace.lo == doctest::Approx(-0.4));
    CHECK(rep.ace.hi == doctest::Approx(0.6));
}

TEST_CASE("instrumental-inequality violation inverts the interval") {
    auto rep = ace_interval(infeasible_witness_law<double>());
    CHECK(!rep.feasible);
    CHECK(rep.pi1.lo == doctest::Approx(1.0));
    CHECK(rep.pi1.hi == doctest::Approx(0.0));
}

TEST_CASE("membership_test accepts the uniform pair") {
    auto res = membership_test(OutcomeJoint<double>::uniform(),
                               ObservedLaw<double>::uniform(2));
    CHECK(res.pass);
    CHECK(res.violations.empty());
}

TEST_CASE("membership_test certificate on observed never-recovery") {
    ObservedLaw<double> law;
    law.K = 1;
    law.table.resize(1);
    law.labels = {1};
    law.table[0].p[0][0] = 1.0;
    OutcomeJoint<double> ar;
    ar.q[1][1] = 1.0;
    auto res = membership_test(ar, law);
    CHECK(!res.pass);
    bool joint11 = false;
    for (const auto& v : res.violations)
        if (v.family == MembershipViolation<double>::Family::Joint &&
            v.i == 1 && v.y == 1)
            joint11 = true;
    CHECK(joint11);
}

TEST_CASE("active descriptors resolve ties to the lowest levels") {
    auto law = ObservedLaw<double>::uniform(3);
    auto rep = ace_interval(law);
    CHECK(rep.active_pi1_hi.z == 0);
    CHECK(rep.active_pi1_hi.single_level());
}

TEST_CASE("ace endpoints decompose into the marginal endpoints") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorConfig cfg{2 + static_cast<int>(seed % 3),
                            derive_seed(11, seed), 1.0,
                            GenMode::ObservedOnly};
        auto law = sample_observed<double>(cfg);
        auto rep = ace_interval(law);
        CHECK(rep.ace.lo == doctest::Approx(rep.pi1.lo - rep.pi0.hi));
        CHECK(rep.ace.hi == doctest::Approx(rep.pi1.hi - rep.pi0.lo));
        CHECK(rep.ace.width() ==
              doctest::Approx(rep.pi0.width() + rep.pi1.width()));
    }
}

TEST_CASE("bounds are invariant under relabeling of Z") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorConfig cfg{3, derive_seed(13, seed), 1.0,
                            GenMode::ObservedOnly};
        auto law = sample_observed<double>(cfg);
        auto rep = ace_interval(law);
        ObservedLaw<double> rotated = law;
        std::rotate(rotated.table.begin(), rotated.table.begin() + 1,
                    rotated.table.end());
        auto rep2 = ace_interval(rotated);
        CHECK(rep.pi0.lo == rep2.pi0.lo);
        CHECK(rep.pi0.hi == rep2.pi0.hi);
        CHECK(rep.pi1.lo == rep2.pi1.lo);
        CHECK(rep.pi1.hi == rep2.pi1.hi);
    }
}

TEST_CASE("intervals sit inside the pure natural bounds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorConfig cfg{2 + static_cast<int>(seed % 4),
                            derive_seed(17, seed), 1.0,
                            GenMode::ObservedOnly};
        auto law = sample_observed<double>(cfg);
        for (int i = 0; i < 2; ++i) {
            auto itv = marginal_interval(law, i);
            double nat_lo = 0.0, nat_hi = 1.0;
            for (int z = 0; z < law.K; ++z) {
                nat_lo = std::max(nat_lo, law.p(z, i, 1));
                nat_hi = std::min(nat_hi, 1.0 - law.p(z, i, 0));
            }
            CHECK(itv.lo >= nat_lo - 1e-9);
            CHECK(itv.hi <= nat_hi + 1e-9);
        }
    }
}

TEST_CASE("same-level cross terms never tighten the bound") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorConfig cfg{2 + static_cast<int>(seed % 3),
                            derive_seed(19, seed), 1.0,
                            GenMode::ObservedOnly};
        auto law = sample_observed<double>(cfg);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(marginal_upper(law, i, j, true) ==
                      marginal_upper(law, i, j, false));
    }
}

TEST_CASE("same-level redundancy holds exactly in rational mode") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        GeneratorConfig cfg{2, derive_seed(23, seed), 1.0,
                            GenMode::ObservedOnly};
        auto law = sample_observed<Rat>(cfg);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(marginal_upper(law, i, j, true) ==
                      marginal_upper(law, i, j, false));
    }
}
