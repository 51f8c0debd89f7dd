#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "ivb/bounds.hpp"
#include "ivb/identities.hpp"
#include "ivb/observed.hpp"
#include "ivb/witness.hpp"

namespace ivb {

using nlohmann::json;

// Deterministic serialization: object keys sorted (nlohmann's default
// object storage), floats rendered with 17 significant digits so values
// round-trip and reports are byte-identical across runs. indent < 0 means
// compact output.
std::string dump_canonical(const json& j, int indent = -1);

// FNV-1a 64-bit content digest, "fnv1a64:<16 hex digits>".
std::string content_digest(std::string_view bytes);

std::string read_file(const std::string& path);

// ---- scalars ----------------------------------------------------------
// double -> JSON number; Rat -> "num/den" string (plain integer if den=1).
inline json scalar_json(double v) { return json(v); }
inline json scalar_json(const Rat& v) { return json(v.str()); }

template <class S>
S scalar_from_json(const json& j);

template <>
inline double scalar_from_json<double>(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return Rat::parse(j.get<std::string>()).to_double();
    throw ParseError("expected a number");
}

template <>
inline Rat scalar_from_json<Rat>(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number()) return Rat(j.get<double>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw ParseError("expected a number or rational string");
}

// ---- ObservedLaw: { "K": k, "p": [[[.,.],[.,.]], ...], "pz": [...]? } --
template <class S>
json law_to_json(const ObservedLaw<S>& law) {
    json p = json::array();
    for (int z = 0; z < law.K; ++z) {
        json slice = json::array();
        for (int x = 0; x < 2; ++x) {
            json row = json::array();
            for (int y = 0; y < 2; ++y) row.push_back(scalar_json(law.p(z, x, y)));
            slice.push_back(std::move(row));
        }
        p.push_back(std::move(slice));
    }
    json out{{"K", law.K}, {"p", std::move(p)}};
    if (law.pz) {
        json pz = json::array();
        for (const auto& v : *law.pz) pz.push_back(scalar_json(v));
        out["pz"] = std::move(pz);
    }
    return out;
}

template <class S>
ObservedLaw<S> law_from_json(const json& j) {
    if (!j.is_object() || !j.contains("K") || !j.contains("p"))
        throw ParseError("observed law needs fields K and p");
    ObservedLaw<S> law;
    law.K = j.at("K").get<int>();
    if (law.K < 1) throw ParseError("K must be >= 1");
    const json& p = j.at("p");
    if (!p.is_array() || static_cast<int>(p.size()) != law.K)
        throw ParseError("p must be an array of K slices");
    law.table.resize(law.K);
    law.labels.resize(law.K);
    for (int z = 0; z < law.K; ++z) {
        law.labels[z] = z + 1;
        const json& slice = p.at(z);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                law.table[z].p[x][y] = scalar_from_json<S>(slice.at(x).at(y));
    }
    if (j.contains("pz")) {
        std::vector<S> pz;
        for (const auto& v : j.at("pz")) pz.push_back(scalar_from_json<S>(v));
        if (static_cast<int>(pz.size()) != law.K)
            throw ParseError("pz must have K entries");
        law.pz = std::move(pz);
    }
    return law;
}

// ---- CountTable: CSV "z,x,y,n" or JSON array of {z,x,y,n} -------------
CountTable counts_from_csv(const std::string& text);
CountTable counts_from_json(const json& j);

// true if the JSON value looks like a count table rather than a law
inline bool looks_like_counts(const json& j) { return j.is_array(); }

// ---- intervals / reports ----------------------------------------------
template <class S>
json interval_json(const Interval<S>& itv) {
    return json{{"lo", scalar_json(itv.lo)}, {"hi", scalar_json(itv.hi)}};
}

template <class S>
json active_term_json(const ActiveTerm& t, const ObservedLaw<S>& law) {
    json out{{"z", law.label(t.z)}};
    if (!t.single_level()) out["ztilde"] = law.label(t.ztilde);
    return out;
}

template <class S>
json membership_violations_json(const MembershipResult<S>& res) {
    json arr = json::array();
    for (const auto& v : res.violations) {
        json rec{{"family", v.family == MembershipViolation<S>::Family::Marginal
                                ? "marginal"
                                : "joint"},
                 {"z", v.z + 1},
                 {"lhs", scalar_json(v.lhs)},
                 {"rhs", scalar_json(v.rhs)},
                 {"residual", scalar_json(v.residual())}};
        if (v.family == MembershipViolation<S>::Family::Marginal) {
            rec["i"] = v.i;
            rec["y"] = v.y;
        } else {
            rec["y"] = v.i;
            rec["ytilde"] = v.y;
        }
        arr.push_back(std::move(rec));
    }
    return arr;
}

template <class S>
json bounds_report_json(const BoundsReport<S>& rep,
                        const ObservedLaw<S>& law) {
    json violations = json::array();
    if (!rep.pi0.feasible())
        violations.push_back(json{{"quantity", "pi0"},
                                  {"gap", scalar_json(rep.pi0.lo - rep.pi0.hi)}});
    if (!rep.pi1.feasible())
        violations.push_back(json{{"quantity", "pi1"},
                                  {"gap", scalar_json(rep.pi1.lo - rep.pi1.hi)}});
    return json{
        {"pi0", interval_json(rep.pi0)},
        {"pi1", interval_json(rep.pi1)},
        {"ace", interval_json(rep.ace)},
        {"feasible", rep.feasible},
        {"active",
         json{{"pi0_lo", active_term_json(rep.active_pi0_lo, law)},
              {"pi0_hi", active_term_json(rep.active_pi0_hi, law)},
              {"pi1_lo", active_term_json(rep.active_pi1_lo, law)},
              {"pi1_hi", active_term_json(rep.active_pi1_hi, law)}}},
        {"violations", std::move(violations)}};
}

// ---- OutcomeJoint ------------------------------------------------------
template <class S>
json joint_to_json(const OutcomeJoint<S>& j) {
    return json{{"pi0", scalar_json(j.pi0())},
                {"pi1", scalar_json(j.pi1())},
                {"pi_ar", scalar_json(j.pi_ar())},
                {"q",
                 json::array({json::array({scalar_json(j.q[0][0]),
                                           scalar_json(j.q[0][1])}),
                              json::array({scalar_json(j.q[1][0]),
                                           scalar_json(j.q[1][1])})})}};
}

// ---- FullM1Law: { "K", "pz", "atoms": [{x_of_z, y0, y1, p}] } ----------
template <class S>
json m1_to_json(const FullM1Law<S>& full) {
    json atoms = json::array();
    for (const auto& [key, p] : full.atoms) {
        json bits = json::array();
        for (int z = 0; z < full.K; ++z) bits.push_back(key.x_at(z));
        atoms.push_back(json{{"x_of_z", std::move(bits)},
                             {"y0", key.y0},
                             {"y1", key.y1},
                             {"p", scalar_json(p)}});
    }
    json pz = json::array();
    for (const auto& v : full.pz) pz.push_back(scalar_json(v));
    return json{{"K", full.K}, {"pz", std::move(pz)}, {"atoms", std::move(atoms)}};
}

template <class S>
FullM1Law<S> m1_from_json(const json& j) {
    FullM1Law<S> full;
    full.K = j.at("K").get<int>();
    for (const auto& v : j.at("pz"))
        full.pz.push_back(scalar_from_json<S>(v));
    for (const auto& a : j.at("atoms")) {
        AtomKey key;
        const auto& bits = a.at("x_of_z");
        if (static_cast<int>(bits.size()) != full.K)
            throw ParseError("x_of_z must have K entries");
        for (int z = 0; z < full.K; ++z)
            if (bits.at(z).get<int>()) key.xbits |= (1u << z);
        key.y0 = a.at("y0").get<int>();
        key.y1 = a.at("y1").get<int>();
        full.atoms.push_back({key, scalar_from_json<S>(a.at("p"))});
    }
    full.sort_atoms();
    return full;
}

// ---- identities reports ------------------------------------------------
template <class S>
json diff_table_json(const DiffTableReport<S>& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json r{{"row", row.label},
               {"lhs", scalar_json(row.lhs)},
               {"rhs", scalar_json(row.rhs)},
               {"status", row_status_name(row.status)}};
        if (!row.note.empty()) r["note"] = row.note;
        rows.push_back(std::move(r));
    }
    return json{{"rows", std::move(rows)},
                {"extreme_surviving", scalar_json(rep.extreme_surviving)},
                {"extreme_all", scalar_json(rep.extreme_all)},
                {"ace_endpoint", scalar_json(rep.ace_endpoint)}};
}

template <class S>
json pairing_rows_json(const std::vector<PairingRow<S>>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json r{{"pairing", row.pairing},
               {"pair_lo", scalar_json(row.pair_lo)},
               {"pair_hi", scalar_json(row.pair_hi)},
               {"kind", row.kind},
               {"equiv", row.equiv},
               {"equiv_lhs", scalar_json(row.equiv_lhs)},
               {"equiv_rhs", scalar_json(row.equiv_rhs)},
               {"pair_holds", row.pair_holds},
               {"equiv_holds", row.equiv_holds},
               {"consistent", row.consistent},
               {"tight", row.tight}};
        if (!row.note.empty()) r["note"] = row.note;
        arr.push_back(std::move(r));
    }
    return arr;
}

// Flattens a report into "key,value" CSV rows (JSON-pointer keys, sorted).
std::string json_to_csv(const json& j);

}  // namespace ivb
