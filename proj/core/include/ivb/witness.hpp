#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ivb/bounds.hpp"
#include "ivb/observed.hpp"

namespace ivb {

// Trivariate joint P(X(z_k)=j, Y(x0)=y0, Y(x1)=y1) for one instrument level.
template <class S>
struct TriJoint {
    int level = 0;  // 0-based instrument index k
    std::array<std::array<std::array<S, 2>, 2>, 2> r{};  // r[j][y0][y1]

    const S& operator()(int j, int y0, int y1) const { return r[j][y0][y1]; }
    S& operator()(int j, int y0, int y1) { return r[j][y0][y1]; }

    OutcomeJoint<S> outcome_margin() const {
        OutcomeJoint<S> m;
        for (int y0 = 0; y0 < 2; ++y0)
            for (int y1 = 0; y1 < 2; ++y1)
                m.q[y0][y1] = r[0][y0][y1] + r[1][y0][y1];
        return m;
    }

    S total() const {
        S s = S(0);
        for (int j = 0; j < 2; ++j)
            for (int y0 = 0; y0 < 2; ++y0)
                for (int y1 = 0; y1 < 2; ++y1) s += r[j][y0][y1];
        return s;
    }
};

// One atom of a counterfactual law: the compliance pattern
// X(z_1..K) packed into the low K bits of `xbits`, plus (Y(x0), Y(x1)).
struct AtomKey {
    std::uint32_t xbits = 0;
    int y0 = 0;
    int y1 = 0;

    friend bool operator<(const AtomKey& a, const AtomKey& b) {
        if (a.xbits != b.xbits) return a.xbits < b.xbits;
        if (a.y0 != b.y0) return a.y0 < b.y0;
        return a.y1 < b.y1;
    }
    friend bool operator==(const AtomKey& a, const AtomKey& b) {
        return a.xbits == b.xbits && a.y0 == b.y0 && a.y1 == b.y1;
    }
    int x_at(int z) const { return (xbits >> z) & 1u; }
};

// A full model-(i) law: the joint over all counterfactuals
// (X(z_1),...,X(z_K), Y(x0), Y(x1)) stored sparsely, with P(Z) attached as
// an independent factor. Z-independence is structural: atoms carry no Z.
template <class S>
struct FullM1Law {
    int K = 0;
    std::vector<S> pz;
    std::vector<std::pair<AtomKey, S>> atoms;  // sorted by key, zeros dropped

    static constexpr int k_dense_limit = 12;  // 2^(K+2) cells beyond this

    S total() const {
        S s = S(0);
        for (const auto& [key, p] : atoms) s += p;
        return s;
    }

    void sort_atoms() {
        std::sort(atoms.begin(), atoms.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
};

// Feasible range [max of four lower bounds, min of four upper bounds] for
// the free parameter p000 = P(X(z_k)=0, Y(x0)=0, Y(x1)=0), with the pairs
// P(X(z_k)=j, Y(x_j)=y) read off the observed law by consistency. An
// inverted interval is exactly the membership verdict at level k.
template <class S>
Interval<S> p000_interval(const OutcomeJoint<S>& joint,
                          const ObservedLaw<S>& law, int k) {
    const S m00 = law.p(k, 0, 0);  // P(X=0, Y=0 | z_k)
    const S m01 = law.p(k, 0, 1);
    const S m10 = law.p(k, 1, 0);
    const S m11 = law.p(k, 1, 1);
    const S y1x0 = S(1) - joint.pi1();  // P(Y(x1)=0)

    S lo = S(0);                                        // (a)
    lo = max_val(lo, y1x0 - m01 - m10);                 // (b)
    lo = max_val(lo, m00 - joint.q[0][1]);              // (c)
    lo = max_val(lo, joint.q[0][0] - m10);              // (d)

    S hi = m00;                                         // (A)
    hi = min_val(hi, y1x0 - m10);                       // (B)
    hi = min_val(hi, joint.q[0][0]);                    // (C)
    hi = min_val(hi, m00 + m11 - joint.q[0][1]);        // (D)
    return {lo, hi};
}

// Reconstructs the eight cells of the trivariate joint from (joint, law, k)
// and the chosen p000. Every cell is affine in p000 with coefficient +-1.
template <class S>
TriJoint<S> build_trijoint(const OutcomeJoint<S>& joint,
                           const ObservedLaw<S>& law, int k, const S& p000,
                           const S& tol = scalar_traits<S>::feas_tol()) {
    Interval<S> range = p000_interval(joint, law, k);
    if (p000 < range.lo - tol || p000 > range.hi + tol)
        throw P000OutOfRange(
            "p000 = " + scalar_traits<S>::str(p000) + " outside [" +
            scalar_traits<S>::str(range.lo) + ", " +
            scalar_traits<S>::str(range.hi) + "] at level " + std::to_string(k + 1));

    const S m00 = law.p(k, 0, 0);
    const S m01 = law.p(k, 0, 1);
    const S m10 = law.p(k, 1, 0);
    const S m11 = law.p(k, 1, 1);
    const S y1x0 = S(1) - joint.pi1();

    TriJoint<S> t;
    t.level = k;
    t.r[0][0][0] = p000;
    t.r[0][0][1] = m00 - p000;
    t.r[0][1][0] = y1x0 - m10 - p000;
    t.r[0][1][1] = m01 + m10 - y1x0 + p000;
    t.r[1][0][0] = joint.q[0][0] - p000;
    t.r[1][0][1] = joint.q[0][1] - m00 + p000;
    t.r[1][1][0] = m10 - joint.q[0][0] + p000;
    t.r[1][1][1] = m00 + m11 - joint.q[0][1] - p000;

    // in-range p000 can still leave float dust below zero
    for (int j = 0; j < 2; ++j)
        for (int y0 = 0; y0 < 2; ++y0)
            for (int y1 = 0; y1 < 2; ++y1)
                if (t.r[j][y0][y1] < S(0)) t.r[j][y0][y1] = S(0);
    return t;
}

// Combines per-level trivariate joints sharing a common (Y(x0),Y(x1))
// margin into one law over (X(z_1..K), Y(x0), Y(x1)):
//   P = prod_k P_k(X(z_k), y0, y1) / margin(y0, y1)^(K-1),
// with 0/0 read as 0. The construction makes the X(z_k) conditionally
// independent given the potential outcomes.
template <class S>
std::vector<std::pair<AtomKey, S>> combine_trijoints(
    const std::vector<TriJoint<S>>& parts,
    const S& tol = scalar_traits<S>::feas_tol()) {
    if (parts.empty()) throw MarginMismatch("no parts to combine");
    const int K = static_cast<int>(parts.size());
    const OutcomeJoint<S> margin = parts[0].outcome_margin();
    S worst = S(0);
    for (const auto& part : parts) {
        OutcomeJoint<S> m = part.outcome_margin();
        for (int y0 = 0; y0 < 2; ++y0)
            for (int y1 = 0; y1 < 2; ++y1)
                worst = max_val(worst, abs_val(m.q[y0][y1] - margin.q[y0][y1]));
    }
    if (worst > tol)
        throw MarginMismatch("outcome margins differ by " +
                             scalar_traits<S>::str(worst));

    std::vector<std::pair<AtomKey, S>> atoms;
    for (int y0 = 0; y0 < 2; ++y0)
        for (int y1 = 0; y1 < 2; ++y1) {
            if (!(margin.q[y0][y1] > S(0))) continue;  // all factors vanish
            for (std::uint32_t xbits = 0; xbits < (1u << K); ++xbits) {
                S p = S(1);
                bool zero = false;
                for (int k = 0; k < K; ++k) {
                    const S& f = parts[k].r[(xbits >> k) & 1u][y0][y1];
                    if (!(f > S(0))) { zero = true; break; }
                    p *= f;
                }
                if (zero) continue;
                for (int e = 0; e < K - 1; ++e) p /= margin.q[y0][y1];
                atoms.push_back({{xbits, y0, y1}, p});
            }
        }
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return atoms;
}

enum class JointPick { Midpoint, MaximizeAce, MinimizeAce, Explicit };

// Bracket for pi_AR given the marginals (pi0, pi1) and the observed law:
//   lower: max over z of  {pi0+pi1-1,
//                          pi0 - P(x0,y1|z) - P(x1,y0|z),
//                          pi1 - P(x1,y1|z) - P(x0,y0|z), 0}
//   upper: min over z of  {pi0+pi1+P(y0|z)-1, pi0, pi1, P(y1|z)}
// Nonempty whenever the law is feasible and (pi0, pi1) lie in their
// Theorem-2 intervals (that is what the elimination proves).
template <class S>
Interval<S> pi_ar_bracket(const ObservedLaw<S>& law, const S& pi0,
                          const S& pi1) {
    S lo = max_val(S(0), pi0 + pi1 - S(1));
    S hi = min_val(pi0, pi1);
    for (int z = 0; z < law.K; ++z) {
        lo = max_val(lo, pi0 - law.p(z, 0, 1) - law.p(z, 1, 0));
        lo = max_val(lo, pi1 - law.p(z, 1, 1) - law.p(z, 0, 0));
        hi = min_val(hi, pi0 + pi1 + law.py(z, 0) - S(1));
        hi = min_val(hi, law.py(z, 1));
    }
    return {lo, hi};
}

// Selects a potential-outcome joint compatible with the law: marginals at
// the requested point of their sharp intervals, pi_AR at the midpoint of
// its bracket. Explicit mode takes the caller's triple verbatim.
template <class S>
OutcomeJoint<S> pick_outcome_joint(const ObservedLaw<S>& law, JointPick mode,
                                   const S& pi0_explicit = S(0),
                                   const S& pi1_explicit = S(0),
                                   const S& pi_ar_explicit = S(0)) {
    BoundsReport<S> rep = ace_interval(law);
    if (!rep.feasible)
        throw InfeasibleLaw("law violates the instrumental inequalities");
    S pi0, pi1;
    switch (mode) {
        case JointPick::Midpoint:
            pi0 = rep.pi0.mid();
            pi1 = rep.pi1.mid();
            break;
        case JointPick::MaximizeAce:
            pi0 = rep.pi0.lo;
            pi1 = rep.pi1.hi;
            break;
        case JointPick::MinimizeAce:
            pi0 = rep.pi0.hi;
            pi1 = rep.pi1.lo;
            break;
        case JointPick::Explicit: {
            OutcomeJoint<S> j = normalize_outcome_joint(
                pi0_explicit, pi1_explicit, pi_ar_explicit);
            auto mem = membership_test(j, law);
            if (!mem.pass)
                throw InfeasibleLaw("explicit joint fails membership (" +
                                    std::to_string(mem.violations.size()) +
                                    " violated inequalities)");
            return j;
        }
    }
    Interval<S> br = pi_ar_bracket(law, pi0, pi1);
    return normalize_outcome_joint(pi0, pi1, br.mid());
}

enum class P000Rule { Midpoint, Lower, Upper };

// Builds the explicit model-(i) law mapping to (joint, law) under phi:
// one trivariate joint per level with p000 chosen by `rule`, combined via
// the product construction, with P(Z) attached (uniform if absent).
// `chosen_p000`, when given, receives the per-level choices.
template <class S>
FullM1Law<S> construct_witness(const ObservedLaw<S>& law,
                               const OutcomeJoint<S>& joint,
                               P000Rule rule = P000Rule::Midpoint,
                               std::vector<S>* chosen_p000 = nullptr) {
    auto mem = membership_test(joint, law);
    if (!mem.pass) {
        std::string what = "witness target fails membership:";
        for (const auto& v : mem.violations) what += " " + v.describe();
        throw InfeasibleLaw(what);
    }
    if (chosen_p000) chosen_p000->clear();
    std::vector<TriJoint<S>> parts;
    parts.reserve(law.K);
    for (int k = 0; k < law.K; ++k) {
        Interval<S> range = p000_interval(joint, law, k);
        S p000;
        switch (rule) {
            case P000Rule::Midpoint: p000 = range.mid(); break;
            case P000Rule::Lower: p000 = range.lo; break;
            case P000Rule::Upper: p000 = range.hi; break;
        }
        p000 = max_val(range.lo, min_val(range.hi, p000));
        if (chosen_p000) chosen_p000->push_back(p000);
        parts.push_back(build_trijoint(joint, law, k, p000));
    }
    FullM1Law<S> full;
    full.K = law.K;
    full.atoms = combine_trijoints(parts);
    if (law.pz)
        full.pz = *law.pz;
    else
        full.pz.assign(law.K, S(1) / S(law.K));
    return full;
}

// phi: marginalizes a full counterfactual law to the pair
// (P(Y(x0),Y(x1)), P(X,Y|Z)) via consistency, carrying P(Z) through.
template <class S>
std::pair<OutcomeJoint<S>, ObservedLaw<S>> phi(const FullM1Law<S>& full) {
    OutcomeJoint<S> joint;
    ObservedLaw<S> law;
    law.K = full.K;
    law.table.resize(full.K);
    law.labels.resize(full.K);
    for (int z = 0; z < full.K; ++z) law.labels[z] = z + 1;
    for (const auto& [key, p] : full.atoms) {
        joint.q[key.y0][key.y1] += p;
        for (int z = 0; z < full.K; ++z) {
            const int j = key.x_at(z);
            const int y = j == 0 ? key.y0 : key.y1;
            law.table[z].p[j][y] += p;
        }
    }
    if (!full.pz.empty()) law.pz = full.pz;
    return {joint, law};
}

}  // namespace ivb
