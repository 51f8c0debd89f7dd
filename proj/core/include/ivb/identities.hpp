#pragma once

#include <array>
#include <string>
#include <vector>

#include "ivb/bounds.hpp"
#include "ivb/observed.hpp"
#include "ivb/witness.hpp"

namespace ivb {

// The sixteen labelled bound expressions for binary Z. Superscript is the
// marginal (pi1 or pi0), subscript the level pattern: a single level, or an
// ordered cross-level pair. u_* are upper bounds, l_* lower bounds.
enum class ExprTag {
    // four upper bounds on pi1 (the candidates for g(1,1))
    U1_z0, U1_z1, U1_z01, U1_z10,
    // four lower bounds on pi0 (candidates for 1 - g(0,0))
    L0_z0, L0_z1, L0_z01, L0_z10,
    // four lower bounds on pi1 (candidates for 1 - g(1,0))
    L1_z0, L1_z1, L1_z01, L1_z10,
    // four upper bounds on pi0 (candidates for g(0,1))
    U0_z0, U0_z1, U0_z01, U0_z10,
};

inline const char* tag_name(ExprTag t) {
    switch (t) {
        case ExprTag::U1_z0: return "u_0^1";
        case ExprTag::U1_z1: return "u_1^1";
        case ExprTag::U1_z01: return "u_01^1";
        case ExprTag::U1_z10: return "u_10^1";
        case ExprTag::L0_z0: return "l_0^0";
        case ExprTag::L0_z1: return "l_1^0";
        case ExprTag::L0_z01: return "l_01^0";
        case ExprTag::L0_z10: return "l_10^0";
        case ExprTag::L1_z0: return "l_0^1";
        case ExprTag::L1_z1: return "l_1^1";
        case ExprTag::L1_z01: return "l_01^1";
        case ExprTag::L1_z10: return "l_10^1";
        case ExprTag::U0_z0: return "u_0^0";
        case ExprTag::U0_z1: return "u_1^0";
        case ExprTag::U0_z01: return "u_01^0";
        case ExprTag::U0_z10: return "u_10^0";
    }
    return "?";
}

// Literal evaluation of the tagged expression. Requires K = 2.
template <class S>
S evaluate_expression(ExprTag tag, const ObservedLaw<S>& law) {
    if (law.K != 2)
        throw WrongK("expression tables require K = 2, got K = " +
                     std::to_string(law.K));
    // a = slice at z_0, b = slice at z_1 in the two-level labelling
    const Slice<S>& a = law.table[0];
    const Slice<S>& b = law.table[1];
    switch (tag) {
        case ExprTag::U1_z0: return S(1) - a(1, 0);
        case ExprTag::U1_z1: return S(1) - b(1, 0);
        case ExprTag::U1_z01: return a.py(1) + b(1, 1) + b(0, 0);
        case ExprTag::U1_z10: return b.py(1) + a(1, 1) + a(0, 0);
        case ExprTag::L0_z0: return a(0, 1);
        case ExprTag::L0_z1: return b(0, 1);
        case ExprTag::L0_z01: return a.py(1) - b(1, 1) - b(0, 0);
        case ExprTag::L0_z10: return b.py(1) - a(1, 1) - a(0, 0);
        case ExprTag::L1_z0: return a(1, 1);
        case ExprTag::L1_z1: return b(1, 1);
        case ExprTag::L1_z01: return a.py(1) - b(1, 0) - b(0, 1);
        case ExprTag::L1_z10: return b.py(1) - a(1, 0) - a(0, 1);
        case ExprTag::U0_z0: return S(1) - a(0, 0);
        case ExprTag::U0_z1: return S(1) - b(0, 0);
        case ExprTag::U0_z01: return a(0, 1) + a(1, 0) + b.py(1);
        case ExprTag::U0_z10: return b(0, 1) + b(1, 0) + a.py(1);
    }
    throw WrongK("unreachable tag");
}

enum class RowStatus { Surviving, Dominated, Identity };

inline const char* row_status_name(RowStatus s) {
    switch (s) {
        case RowStatus::Surviving: return "surviving";
        case RowStatus::Dominated: return "dominated";
        case RowStatus::Identity: return "identity";
    }
    return "?";
}

template <class S>
struct DiffRow {
    std::string label;  // e.g. "(u_0^1)-(l_0^0)"
    S lhs;              // the difference itself
    S rhs;              // the tabulated expression / identity value
    RowStatus status;
    std::string note;   // annotations where sources disagree
};

template <class S>
struct DiffTableReport {
    std::vector<DiffRow<S>> rows;  // 16
    S extreme_surviving;  // min (upper table) / max (lower table) of the 8
    S extreme_all;        // same over all 16 differences
    S ace_endpoint;       // matching endpoint from the bounds module
};

namespace detail {

template <class S>
S identity_tol() {
    return scalar_traits<S>::exact ? S(0) : S(1e-12);
}

template <class S>
void require_row(const DiffRow<S>& row) {
    S scale = max_val(S(1), max_val(abs_val(row.lhs), abs_val(row.rhs)));
    if (abs_val(row.lhs - row.rhs) > identity_tol<S>() * scale)
        throw IdentityViolation("difference-table row " + row.label +
                                " does not match its expression");
}

}  // namespace detail

// All sixteen differences (upper bound on pi1) - (lower bound on pi0),
// i.e. the candidate upper bounds on the ACE for binary Z. Each row is
// checked against its tabulated expression; the minimum of the surviving
// eight must equal the closed-form ACE upper endpoint.
template <class S>
DiffTableReport<S> check_upper_difference_table(const ObservedLaw<S>& law) {
    if (law.K != 2) throw WrongK("difference tables require K = 2");
    const Slice<S>& a = law.table[0];
    const Slice<S>& b = law.table[1];
    auto ev = [&](ExprTag t) { return evaluate_expression(t, law); };
    auto diff = [&](ExprTag u, ExprTag l) { return ev(u) - ev(l); };

    DiffTableReport<S> rep;
    auto add = [&](ExprTag u, ExprTag l, S rhs, RowStatus st,
                   std::string note = "") {
        std::string label = std::string("(") + tag_name(u) + ")-(" +
                            tag_name(l) + ")";
        rep.rows.push_back({label, diff(u, l), rhs, st, std::move(note)});
    };
    using T = ExprTag;
    // row order follows the published table, top to bottom
    add(T::U1_z0, T::L0_z0, a(0, 0) + a(1, 1), RowStatus::Surviving,
        "Pearl (8.14b) row 6; the 2009 reprinting has a sign typo");
    add(T::U1_z0, T::L0_z1, S(1) - a(1, 0) - b(0, 1), RowStatus::Surviving,
        "Swanson et al. Tab.3 A3+A4 row 3 second expression has a sign typo");
    add(T::U1_z0, T::L0_z01, diff(T::U1_z1, T::L0_z1) + a(0, 0),
        RowStatus::Dominated);
    add(T::U1_z0, T::L0_z10,
        b.py(0) - a(1, 0) + a(1, 1) + a(0, 0), RowStatus::Surviving);
    add(T::U1_z1, T::L0_z0, S(1) - b(1, 0) - a(0, 1), RowStatus::Surviving,
        "Swanson et al. Tab.3 A3+A4 row 4 second expression has a sign typo");
    add(T::U1_z1, T::L0_z1, b(0, 0) + b(1, 1), RowStatus::Surviving);
    add(T::U1_z1, T::L0_z01,
        a.py(0) - b(1, 0) + b(1, 1) + b(0, 0), RowStatus::Surviving);
    add(T::U1_z1, T::L0_z10, diff(T::U1_z0, T::L0_z0) + b(0, 0),
        RowStatus::Dominated,
        "source table prints the added cell at z_0; it is at z_1");
    add(T::U1_z01, T::L0_z0, diff(T::U1_z1, T::L0_z1) + a(1, 1),
        RowStatus::Dominated);
    add(T::U1_z01, T::L0_z1,
        a.py(1) - b(0, 1) + b(1, 1) + b(0, 0), RowStatus::Surviving);
    add(T::U1_z01, T::L0_z01, (diff(T::U1_z1, T::L0_z1)) * S(2),
        RowStatus::Identity);
    add(T::U1_z01, T::L0_z10, diff(T::U1_z0, T::L0_z1) + a(1, 1) + b(0, 0),
        RowStatus::Dominated);
    add(T::U1_z10, T::L0_z0,
        b.py(1) - a(0, 1) + a(1, 1) + a(0, 0), RowStatus::Surviving);
    add(T::U1_z10, T::L0_z1, diff(T::U1_z0, T::L0_z0) + b(1, 1),
        RowStatus::Dominated);
    add(T::U1_z10, T::L0_z01, diff(T::U1_z1, T::L0_z0) + b(1, 1) + a(0, 0),
        RowStatus::Dominated);
    add(T::U1_z10, T::L0_z10, (diff(T::U1_z0, T::L0_z0)) * S(2),
        RowStatus::Identity);

    for (const auto& row : rep.rows) detail::require_row(row);

    bool first = true;
    for (const auto& row : rep.rows) {
        if (first || row.lhs < rep.extreme_all) rep.extreme_all = row.lhs;
        first = false;
    }
    first = true;
    for (const auto& row : rep.rows) {
        if (row.status != RowStatus::Surviving) continue;
        if (first || row.lhs < rep.extreme_surviving)
            rep.extreme_surviving = row.lhs;
        first = false;
    }

    rep.ace_endpoint = ace_interval(law).ace.hi;
    DiffRow<S> endpoint_row{"min(surviving 8) vs ace.hi",
                            rep.extreme_surviving, rep.ace_endpoint,
                            RowStatus::Identity, ""};
    detail::require_row(endpoint_row);
    DiffRow<S> all_row{"min(all 16) vs min(surviving 8)", rep.extreme_all,
                       rep.extreme_surviving, RowStatus::Identity, ""};
    detail::require_row(all_row);
    return rep;
}

// Mirror image: the sixteen (lower bound on pi1) - (upper bound on pi0)
// differences, whose maximum over the surviving eight is the ACE lower
// endpoint.
template <class S>
DiffTableReport<S> check_lower_difference_table(const ObservedLaw<S>& law) {
    if (law.K != 2) throw WrongK("difference tables require K = 2");
    const Slice<S>& a = law.table[0];
    const Slice<S>& b = law.table[1];
    auto ev = [&](ExprTag t) { return evaluate_expression(t, law); };
    auto diff = [&](ExprTag l, ExprTag u) { return ev(l) - ev(u); };

    DiffTableReport<S> rep;
    auto add = [&](ExprTag l, ExprTag u, S rhs, RowStatus st,
                   std::string note = "") {
        std::string label = std::string("(") + tag_name(l) + ")-(" +
                            tag_name(u) + ")";
        rep.rows.push_back({label, diff(l, u), rhs, st, std::move(note)});
    };
    using T = ExprTag;
    add(T::L1_z0, T::U0_z0, S(0) - a(1, 0) - a(0, 1), RowStatus::Surviving);
    add(T::L1_z0, T::U0_z1, a(1, 1) + b(0, 0) - S(1), RowStatus::Surviving);
    add(T::L1_z0, T::U0_z01,
        S(0) - b.py(1) + a(1, 1) - a(0, 1) - a(1, 0), RowStatus::Surviving);
    add(T::L1_z0, T::U0_z10, diff(T::L1_z1, T::U0_z1) - a(0, 1),
        RowStatus::Dominated);
    add(T::L1_z1, T::U0_z0, b(1, 1) + a(0, 0) - S(1), RowStatus::Surviving);
    add(T::L1_z1, T::U0_z1, S(0) - b(1, 0) - b(0, 1), RowStatus::Surviving);
    add(T::L1_z1, T::U0_z01, diff(T::L1_z0, T::U0_z0) - b(0, 1),
        RowStatus::Dominated);
    add(T::L1_z1, T::U0_z10,
        S(0) - a.py(1) + b(1, 1) - b(0, 1) - b(1, 0), RowStatus::Surviving,
        "source table repeats the label (l_1^1)-(u_01^0) for this row");
    add(T::L1_z01, T::U0_z0, diff(T::L1_z1, T::U0_z1) - a(1, 0),
        RowStatus::Dominated);
    add(T::L1_z01, T::U0_z1,
        S(0) - a.py(0) + b(0, 0) - b(1, 0) - b(0, 1), RowStatus::Surviving);
    add(T::L1_z01, T::U0_z01, diff(T::L1_z0, T::U0_z1) - a(1, 0) - b(0, 1),
        RowStatus::Dominated);
    add(T::L1_z01, T::U0_z10, (diff(T::L1_z1, T::U0_z1)) * S(2),
        RowStatus::Identity);
    add(T::L1_z10, T::U0_z0,
        S(0) - b.py(0) + a(0, 0) - a(1, 0) - a(0, 1), RowStatus::Surviving);
    add(T::L1_z10, T::U0_z1, diff(T::L1_z0, T::U0_z0) - b(1, 0),
        RowStatus::Dominated);
    add(T::L1_z10, T::U0_z01, (diff(T::L1_z0, T::U0_z0)) * S(2),
        RowStatus::Identity);
    add(T::L1_z10, T::U0_z10, diff(T::L1_z1, T::U0_z0) - a(0, 1) - b(1, 0),
        RowStatus::Dominated);

    for (const auto& row : rep.rows) detail::require_row(row);

    bool first = true;
    for (const auto& row : rep.rows) {
        if (first || row.lhs > rep.extreme_all) rep.extreme_all = row.lhs;
        first = false;
    }
    first = true;
    for (const auto& row : rep.rows) {
        if (row.status != RowStatus::Surviving) continue;
        if (first || row.lhs > rep.extreme_surviving)
            rep.extreme_surviving = row.lhs;
        first = false;
    }

    rep.ace_endpoint = ace_interval(law).ace.lo;
    DiffRow<S> endpoint_row{"max(surviving 8) vs ace.lo",
                            rep.extreme_surviving, rep.ace_endpoint,
                            RowStatus::Identity, ""};
    detail::require_row(endpoint_row);
    DiffRow<S> all_row{"max(all 16) vs max(surviving 8)", rep.extreme_all,
                       rep.extreme_surviving, RowStatus::Identity, ""};
    detail::require_row(all_row);
    return rep;
}

// One pairing of a lower bound (a)-(d) with an upper bound (A)-(D) on the
// free parameter p000, together with the inequality it is equivalent to.
template <class S>
struct PairingRow {
    std::string pairing;   // "(a)<=(A)"
    S pair_lo, pair_hi;    // values of the two bounds
    std::string kind;      // obs_nonneg | joint_nonneg | marginal | joint
    std::string equiv;     // human-readable equivalent inequality
    S equiv_lhs, equiv_rhs;
    bool pair_holds = false;
    bool equiv_holds = false;
    bool consistent = false;
    bool tight = false;    // pairing holds with equality (pins p000)
    std::string note;
};

// Evaluates all sixteen (lower, upper) pairings for p000 at level k and
// checks each against its equivalent inequality: a nonnegativity
// constraint, a marginal inequality, or a joint inequality. The (d)(A)
// pairing uses the corrected joint form (the published cell repeats one
// term).
template <class S>
std::vector<PairingRow<S>> check_appendix_a(
    const OutcomeJoint<S>& joint, const ObservedLaw<S>& law, int k,
    const S& tol = scalar_traits<S>::feas_tol()) {
    const S m00 = law.p(k, 0, 0);
    const S m01 = law.p(k, 0, 1);
    const S m10 = law.p(k, 1, 0);
    const S m11 = law.p(k, 1, 1);
    const S q00 = joint.q[0][0];
    const S q01 = joint.q[0][1];
    const S q10 = joint.q[1][0];
    const S q11 = joint.q[1][1];
    const S pi0 = joint.pi0();
    const S pi1 = joint.pi1();
    const S y1x0 = S(1) - pi1;

    const std::array<std::pair<const char*, S>, 4> lower = {{
        {"a", S(0)},
        {"b", y1x0 - m01 - m10},
        {"c", m00 - q01},
        {"d", q00 - m10},
    }};
    const std::array<std::pair<const char*, S>, 4> upper = {{
        {"A", m00},
        {"B", y1x0 - m10},
        {"C", q00},
        {"D", m00 + m11 - q01},
    }};

    struct Equiv {
        const char* kind;
        const char* text;
        S lhs, rhs;
        const char* note;
    };
    // indexed [lower][upper]
    const Equiv equiv[4][4] = {
        {{"obs_nonneg", "P(Y=0,X=0|z_k) >= 0", S(0), m00, ""},
         {"marginal", "P(Y(x1)=1) <= 1 - P(Y=0,X=1|z_k)", pi1, S(1) - m10, ""},
         {"joint_nonneg", "P(Y(x0)=0,Y(x1)=0) >= 0", S(0), q00, ""},
         {"joint", "P(Y(x0)=0,Y(x1)=1) <= P(Y=0,X=0|z_k)+P(Y=1,X=1|z_k)",
          q01, m00 + m11, ""}},
        {{"marginal", "P(Y(x1)=0) <= 1 - P(Y=1,X=1|z_k)", y1x0, S(1) - m11,
          ""},
         {"obs_nonneg", "P(Y=1,X=0|z_k) >= 0", S(0), m01, ""},
         {"joint", "P(Y(x0)=1,Y(x1)=0) <= P(Y=1,X=0|z_k)+P(Y=0,X=1|z_k)",
          q10, m01 + m10, ""},
         {"joint_nonneg", "P(Y(x0)=1,Y(x1)=1) >= 0", S(0), q11, ""}},
        {{"joint_nonneg", "P(Y(x0)=0,Y(x1)=1) >= 0", S(0), q01, ""},
         {"joint", "P(Y(x0)=1,Y(x1)=1) <= P(Y=1,X=0|z_k)+P(Y=1,X=1|z_k)",
          q11, m01 + m11, ""},
         {"marginal", "P(Y(x0)=1) <= 1 - P(Y=0,X=0|z_k)", pi0, S(1) - m00,
          ""},
         {"obs_nonneg", "P(Y=1,X=1|z_k) >= 0", S(0), m11, ""}},
        {{"joint", "P(Y(x0)=0,Y(x1)=0) <= P(Y=0,X=0|z_k)+P(Y=0,X=1|z_k)",
          q00, m00 + m10,
          "published cell repeats P(Y=0,X=0|z_k); corrected to the joint form"},
         {"joint_nonneg", "P(Y(x0)=1,Y(x1)=0) >= 0", S(0), q10, ""},
         {"obs_nonneg", "P(Y=0,X=1|z_k) >= 0", S(0), m10, ""},
         {"marginal", "P(Y(x0)=0) <= 1 - P(Y=1,X=0|z_k)", S(1) - pi0,
          S(1) - m01, ""}},
    };

    std::vector<PairingRow<S>> rows;
    rows.reserve(16);
    for (int lo = 0; lo < 4; ++lo)
        for (int up = 0; up < 4; ++up) {
            const Equiv& e = equiv[lo][up];
            PairingRow<S> row;
            row.pairing = std::string("(") + lower[lo].first + ")<=(" +
                          upper[up].first + ")";
            row.pair_lo = lower[lo].second;
            row.pair_hi = upper[up].second;
            row.kind = e.kind;
            row.equiv = e.text;
            row.equiv_lhs = e.lhs;
            row.equiv_rhs = e.rhs;
            row.pair_holds = row.pair_lo <= row.pair_hi + tol;
            row.equiv_holds = row.equiv_lhs <= row.equiv_rhs + tol;
            row.consistent = row.pair_holds == row.equiv_holds;
            row.tight = abs_val(row.pair_hi - row.pair_lo) <= tol;
            row.note = e.note;
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace ivb
