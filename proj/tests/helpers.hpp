#pragma once

#include <vector>

#include "ivb/bounds.hpp"
#include "ivb/observed.hpp"
#include "ivb/synthetic.hpp"

namespace ivbtest {

using namespace ivb;

// K=1 law with X == 1 always: p(X=1,Y=1|z1) = 0.6, p(X=1,Y=0|z1) = 0.4.
template <class S>
ObservedLaw<S> perfect_compliance_law() {
    ObservedLaw<S> law;
    law.K = 1;
    law.table.resize(1);
    law.labels = {1};
    law.table[0].p[1][1] = S(3) / S(5);
    law.table[0].p[1][0] = S(2) / S(5);
    law.table[0].p[0][0] = S(0);
    law.table[0].p[0][1] = S(0);
    return law;
}

// K=2 instrumental-inequality violator: Z determines Y among the
// always-treated (p[z1](X=1,Y=1) = 1, p[z2](X=1,Y=0) = 1).
template <class S>
ObservedLaw<S> infeasible_witness_law() {
    ObservedLaw<S> law;
    law.K = 2;
    law.table.resize(2);
    law.labels = {1, 2};
    law.table[0].p[1][1] = S(1);
    law.table[1].p[1][0] = S(1);
    return law;
}

// Rejection-samples a Dirichlet observed law until it passes the
// instrumental inequalities. Deterministic given (K, seed).
template <class S>
ObservedLaw<S> sample_feasible_observed(int K, std::uint64_t seed,
                                        double concentration = 1.0) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        GeneratorConfig cfg{K, derive_seed(seed, attempt), concentration,
                            GenMode::ObservedOnly};
        ObservedLaw<S> law = sample_observed<S>(cfg);
        if (ace_interval(law).feasible) return law;
    }
}

// Interior point of [lo, hi] at fraction t.
template <class S>
S lerp(const Interval<S>& itv, double t) {
    return itv.lo + scalar_traits<S>::from_double(t) * (itv.hi - itv.lo);
}

}  // namespace ivbtest
