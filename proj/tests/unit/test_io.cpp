#include "doctest.h"

#include "../helpers.hpp"
#include "ivb/io.hpp"
#include "ivb/synthetic.hpp"

using namespace ivb;

TEST_CASE("observed law JSON round trip") {
    GeneratorConfig cfg{3, 555, 1.0, GenMode::ObservedOnly};
    auto law = sample_observed<double>(cfg);
    law.pz = std::vector<double>{0.2, 0.3, 0.5};
    auto back = law_from_json<double>(law_to_json(law));
    CHECK(back.K == law.K);
    for (int z = 0; z < 3; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                CHECK(back.p(z, x, y) == law.p(z, x, y));
    CHECK((*back.pz)[2] == 0.5);
}

TEST_CASE("rational laws serialize as num/den strings") {
    auto law = ObservedLaw<Rat>::uniform(1);
    json j = law_to_json(law);
    CHECK(j["p"][0][0][0] == "1/4");
    auto back = law_from_json<Rat>(j);
    CHECK(back.p(0, 1, 1) == Rat(1, 4));
}

TEST_CASE("scalar parsing accepts decimals, fractions, and numbers") {
    CHECK(scalar_from_json<Rat>(json("3/8")) == Rat(3, 8));
    CHECK(scalar_from_json<Rat>(json("0.25")) == Rat(1, 4));
    CHECK(scalar_from_json<Rat>(json(1)) == Rat(1));
    CHECK(scalar_from_json<double>(json(0.5)) == 0.5);
    CHECK(scalar_from_json<double>(json("1/2")) == 0.5);
    CHECK_THROWS_AS(scalar_from_json<double>(json::object()), ParseError);
}

TEST_CASE("count table CSV parsing") {
    auto t = counts_from_csv("z,x,y,n\n1,1,1,60\n1,1,0,40\n");
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].z == 1);
    CHECK(t.records[0].n == 60);
    CHECK_THROWS_AS(counts_from_csv("a,b\n"), ParseError);
    CHECK_THROWS_AS(counts_from_csv("z,x,y,n\n1,1,oops,3\n"), ParseError);
}

TEST_CASE("FullM1Law JSON round trip") {
    auto full = construct_witness(ObservedLaw<double>::uniform(2),
                                  OutcomeJoint<double>::uniform());
    auto back = m1_from_json<double>(m1_to_json(full));
    REQUIRE(back.atoms.size() == full.atoms.size());
    for (std::size_t i = 0; i < back.atoms.size(); ++i) {
        CHECK(back.atoms[i].first == full.atoms[i].first);
        CHECK(back.atoms[i].second == full.atoms[i].second);
    }
}

TEST_CASE("canonical dump is deterministic and round-trip safe") {
    json j{{"b", 0.1}, {"a", 1.0 / 3.0}, {"n", 42}, {"s", "x"}};
    std::string a = dump_canonical(j);
    std::string b = dump_canonical(j);
    CHECK(a == b);
    json parsed = json::parse(a);
    CHECK(parsed["a"].get<double>() == 1.0 / 3.0);
    CHECK(parsed["b"].get<double>() == 0.1);
    // 17 significant digits
    CHECK(a.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("content digest is stable") {
    CHECK(content_digest("") == "fnv1a64:cbf29ce484222325");
    CHECK(content_digest("abc") == content_digest("abc"));
    CHECK(content_digest("abc") != content_digest("abd"));
}

TEST_CASE("csv flattening emits sorted key,value rows") {
    json j{{"pi0", {{"lo", 0.25}, {"hi", 0.75}}}, {"feasible", true}};
    std::string csv = json_to_csv(j);
    CHECK(csv.find("key,value\n") == 0);
    CHECK(csv.find("\"/pi0/lo\",0.25") != std::string::npos);
    CHECK(csv.find("\"/feasible\",true") != std::string::npos);
}
