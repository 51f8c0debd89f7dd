#pragma once

#include <string>
#include <vector>

#include "ivb/observed.hpp"

namespace ivb {

// Which term of the marginal-bound minimization is active: a single-level
// (natural-bound) term, or a cross-level term over the ordered pair
// (z, ztilde). Levels are 0-based; ztilde == -1 means single-level.
struct ActiveTerm {
    int z = 0;
    int ztilde = -1;
    bool single_level() const { return ztilde < 0; }
};

template <class S>
struct BoundsReport {
    Interval<S> pi0;
    Interval<S> pi1;
    Interval<S> ace;
    bool feasible = false;
    // argmin/argmax descriptors for pi0.lo, pi0.hi, pi1.lo, pi1.hi
    ActiveTerm active_pi0_lo, active_pi0_hi, active_pi1_lo, active_pi1_hi;
};

namespace detail {
template <class S>
struct MinTerm {
    S value;
    ActiveTerm where;
};
}  // namespace detail

// Upper bound g(i,j) on P(Y(x_i)=j): the minimum of
//   (a) over z:            P(X=i,Y=j|z) + P(X=1-i|z)
//   (b) over pairs z!=zt:  P(X=i,Y=j|z) + P(X=1-i,Y=0|z)
//                          + P(X=i,Y=j|zt) + P(X=1-i,Y=1|zt)
// The z != zt restriction in (b) never changes the value (same-level terms
// are dominated by (a)); `include_same_level` exists so tests can verify
// that redundancy directly.
template <class S>
detail::MinTerm<S> marginal_upper_term(const ObservedLaw<S>& law, int i, int j,
                                       bool include_same_level = false) {
    const int other = 1 - i;
    detail::MinTerm<S> best{law.p(0, i, j) + law.px(0, other), {0, -1}};
    for (int z = 1; z < law.K; ++z) {
        S v = law.p(z, i, j) + law.px(z, other);
        if (v < best.value) best = {v, {z, -1}};
    }
    for (int z = 0; z < law.K; ++z)
        for (int zt = 0; zt < law.K; ++zt) {
            if (z == zt && !include_same_level) continue;
            S v = law.p(z, i, j) + law.p(z, other, 0) + law.p(zt, i, j) +
                  law.p(zt, other, 1);
            if (v < best.value) best = {v, {z, zt}};
        }
    return best;
}

template <class S>
S marginal_upper(const ObservedLaw<S>& law, int i, int j,
                 bool include_same_level = false) {
    return marginal_upper_term(law, i, j, include_same_level).value;
}

// Sharp interval for pi_i = P(Y(x_i)=1): [1 - g(i,0), g(i,1)]. May be
// inverted when the law violates the instrumental inequalities.
template <class S>
Interval<S> marginal_interval(const ObservedLaw<S>& law, int i) {
    return {S(1) - marginal_upper(law, i, 0), marginal_upper(law, i, 1)};
}

// Full report: both marginal intervals, the ACE interval obtained by
// variation independence, the active terms, and the feasibility verdict.
// Infeasible laws still yield a complete report with inverted intervals.
template <class S>
BoundsReport<S> ace_interval(const ObservedLaw<S>& law) {
    BoundsReport<S> r;
    auto g00 = marginal_upper_term(law, 0, 0);
    auto g01 = marginal_upper_term(law, 0, 1);
    auto g10 = marginal_upper_term(law, 1, 0);
    auto g11 = marginal_upper_term(law, 1, 1);
    r.pi0 = {S(1) - g00.value, g01.value};
    r.pi1 = {S(1) - g10.value, g11.value};
    r.active_pi0_lo = g00.where;
    r.active_pi0_hi = g01.where;
    r.active_pi1_lo = g10.where;
    r.active_pi1_hi = g11.where;
    r.ace = {r.pi1.lo - r.pi0.hi, r.pi1.hi - r.pi0.lo};
    r.feasible = r.pi0.feasible() && r.pi1.feasible();
    return r;
}

// One violated membership inequality.
template <class S>
struct MembershipViolation {
    enum class Family { Marginal, Joint };
    Family family;
    // Marginal: P(Y(x_i)=y) <= P(Y=y,X=i|z) + P(X=1-i|z); indices (i, y).
    // Joint: P(Y(x0)=y, Y(x1)=yt) <= P(Y=y,X=0|z) + P(Y=yt,X=1|z);
    //   indices (y, yt) stored as (i, y).
    int i;
    int y;
    int z;  // 0-based level
    S lhs;
    S rhs;
    S residual() const { return lhs - rhs; }

    std::string describe() const {
        std::string s = family == Family::Marginal
                            ? "marginal(i=" + std::to_string(i) +
                                  ",y=" + std::to_string(y) + ")"
                            : "joint(y=" + std::to_string(i) +
                                  ",yt=" + std::to_string(y) + ")";
        return s + " at z=" + std::to_string(z + 1);
    }
};

template <class S>
struct MembershipResult {
    bool pass = true;
    std::vector<MembershipViolation<S>> violations;
};

// Tests whether (joint, law) satisfies all 4K marginal and 4K joint
// inequalities at tolerance `tol`. `level` restricts the check to a single
// instrument level (used by the per-level witness machinery); the default
// -1 checks all levels. On failure every violated instance is reported.
template <class S>
MembershipResult<S> membership_test(const OutcomeJoint<S>& joint,
                                    const ObservedLaw<S>& law, int level = -1,
                                    const S& tol = scalar_traits<S>::feas_tol()) {
    MembershipResult<S> res;
    const S marg[2][2] = {
        {S(1) - joint.pi0(), joint.pi0()},   // P(Y(x0)=y)
        {S(1) - joint.pi1(), joint.pi1()}};  // P(Y(x1)=y)
    const int z_first = level < 0 ? 0 : level;
    const int z_last = level < 0 ? law.K - 1 : level;
    using V = MembershipViolation<S>;
    for (int z = z_first; z <= z_last; ++z) {
        for (int i = 0; i < 2; ++i)
            for (int y = 0; y < 2; ++y) {
                S rhs = law.p(z, i, y) + law.px(z, 1 - i);
                if (marg[i][y] > rhs + tol)
                    res.violations.push_back(
                        {V::Family::Marginal, i, y, z, marg[i][y], rhs});
            }
        for (int y = 0; y < 2; ++y)
            for (int yt = 0; yt < 2; ++yt) {
                S rhs = law.p(z, 0, y) + law.p(z, 1, yt);
                if (joint.q[y][yt] > rhs + tol)
                    res.violations.push_back(
                        {V::Family::Joint, y, yt, z, joint.q[y][yt], rhs});
            }
    }
    res.pass = res.violations.empty();
    return res;
}

}  // namespace ivb
