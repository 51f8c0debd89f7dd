#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivb/errors.hpp"
#include "ivb/scalar.hpp"

namespace ivb {

// One conditional table P(X=x, Y=y | Z=z) for a fixed instrument level.
template <class S>
struct Slice {
    std::array<std::array<S, 2>, 2> p{};  // p[x][y]

    const S& operator()(int x, int y) const { return p[x][y]; }
    S& operator()(int x, int y) { return p[x][y]; }

    S px(int x) const { return p[x][0] + p[x][1]; }          // P(X=x | z)
    S py(int y) const { return p[0][y] + p[1][y]; }          // P(Y=y | z)
    S total() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

// The observed conditional distributions P(X,Y | Z=z) for z = 1..K, with an
// optional marginal P(Z). Instrument levels are stored 0-based internally;
// `labels` carries the original level names (defaults to 1..K).
//
// Immutable by convention after construction; every operation on laws is
// pure, so values can be shared across threads freely.
template <class S>
struct ObservedLaw {
    int K = 0;
    std::vector<Slice<S>> table;           // table[z]
    std::optional<std::vector<S>> pz;      // P(Z=z), if known
    std::vector<long long> labels;         // original z labels, size K

    const S& p(int z, int x, int y) const { return table[z].p[x][y]; }
    S px(int z, int x) const { return table[z].px(x); }
    S py(int z, int y) const { return table[z].py(y); }

    long long label(int z) const {
        return labels.empty() ? z + 1 : labels[z];
    }

    static ObservedLaw uniform(int k) {
        ObservedLaw law;
        law.K = k;
        law.table.resize(k);
        const S quarter = S(1) / S(4);
        for (auto& sl : law.table)
            sl.p = {{{quarter, quarter}, {quarter, quarter}}};
        law.labels.resize(k);
        for (int z = 0; z < k; ++z) law.labels[z] = z + 1;
        return law;
    }
};

// Joint distribution of the two potential outcomes,
// q[y0][y1] = P(Y(x0)=y0, Y(x1)=y1). Response-type cells per the usual
// labels: NR=q[0][0], HE=q[0][1], HU=q[1][0], AR=q[1][1].
template <class S>
struct OutcomeJoint {
    std::array<std::array<S, 2>, 2> q{};

    const S& operator()(int y0, int y1) const { return q[y0][y1]; }
    S& operator()(int y0, int y1) { return q[y0][y1]; }

    S pi0() const { return q[1][0] + q[1][1]; }    // P(Y(x0)=1)
    S pi1() const { return q[0][1] + q[1][1]; }    // P(Y(x1)=1)
    S pi_ar() const { return q[1][1]; }
    S total() const { return q[0][0] + q[0][1] + q[1][0] + q[1][1]; }

    static OutcomeJoint uniform() {
        OutcomeJoint j;
        const S quarter = S(1) / S(4);
        j.q = {{{quarter, quarter}, {quarter, quarter}}};
        return j;
    }
};

// A closed interval. `lo > hi` is representable on purpose: an inverted
// interval is how an instrumental-inequality violation surfaces.
template <class S>
struct Interval {
    S lo{};
    S hi{};

    bool feasible(const S& tol = scalar_traits<S>::feas_tol()) const {
        return lo <= hi + tol;
    }
    S mid() const { return (lo + hi) / S(2); }
    S width() const { return hi - lo; }
    bool contains(const S& v, const S& tol = scalar_traits<S>::feas_tol()) const {
        return lo - tol <= v && v <= hi + tol;
    }
};

// Empirical cell counts, the raw input format.
struct CountRecord {
    long long z = 0;
    int x = 0;
    int y = 0;
    long long n = 0;
};

struct CountTable {
    std::vector<CountRecord> records;
};

// A single failed ObservedLaw invariant. Violations are data, not faults.
struct LawViolation {
    enum class Kind { SliceSum, CellRange, PzRange, PzSum, PzZero };
    Kind kind;
    int z;            // 0-based level, or -1 when not level-specific
    double residual;  // magnitude of the violation
    std::string describe() const {
        std::string what;
        switch (kind) {
            case Kind::SliceSum: what = "slice does not sum to 1"; break;
            case Kind::CellRange: what = "cell outside [0,1]"; break;
            case Kind::PzRange: what = "pz entry outside [0,1]"; break;
            case Kind::PzSum: what = "pz does not sum to 1"; break;
            case Kind::PzZero: what = "pz entry not strictly positive"; break;
        }
        if (z >= 0) what += " at level " + std::to_string(z + 1);
        return what + " (residual " + std::to_string(residual) + ")";
    }
};

// Frequency-normalizes a count table into an ObservedLaw. Levels are
// relabeled to 1..K in order of first appearance; the original values are
// kept as labels. Missing cells count as zero.
template <class S>
ObservedLaw<S> ingest_counts(const CountTable& counts) {
    std::vector<long long> order;
    std::map<long long, int> index;
    for (const auto& r : counts.records) {
        if (r.x < 0 || r.x > 1 || r.y < 0 || r.y > 1)
            throw ParseError("count record with x or y outside {0,1}");
        if (r.n < 0)
            throw ParseError("negative count");
        if (!index.count(r.z)) {
            index[r.z] = static_cast<int>(order.size());
            order.push_back(r.z);
        }
    }
    const int K = static_cast<int>(order.size());
    if (K == 0) throw EmptyLevel("count table has no levels");

    std::vector<std::array<std::array<long long, 2>, 2>> cells(
        K, {{{-1, -1}, {-1, -1}}});
    for (const auto& r : counts.records) {
        auto& cell = cells[index[r.z]][r.x][r.y];
        if (cell >= 0)
            throw DuplicateCell("duplicate cell (z=" + std::to_string(r.z) +
                                ",x=" + std::to_string(r.x) +
                                ",y=" + std::to_string(r.y) + ")");
        cell = r.n;
    }

    ObservedLaw<S> law;
    law.K = K;
    law.labels = order;
    law.table.resize(K);
    std::vector<long long> level_total(K, 0);
    long long grand_total = 0;
    for (int z = 0; z < K; ++z) {
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                level_total[z] += cells[z][x][y] < 0 ? 0 : cells[z][x][y];
        if (level_total[z] == 0)
            throw EmptyLevel("level " + std::to_string(order[z]) +
                             " has zero total count");
        grand_total += level_total[z];
    }
    for (int z = 0; z < K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                long long n = cells[z][x][y] < 0 ? 0 : cells[z][x][y];
                law.table[z].p[x][y] = S(n) / S(level_total[z]);
            }
    std::vector<S> pz(K);
    for (int z = 0; z < K; ++z) pz[z] = S(level_total[z]) / S(grand_total);
    law.pz = std::move(pz);
    return law;
}

// Checks every ObservedLaw invariant at tolerance `tol` (defaults to the
// scalar's sum tolerance). Returns an empty list iff the law is valid.
template <class S>
std::vector<LawViolation> validate_law(
    const ObservedLaw<S>& law, const S& tol = scalar_traits<S>::sum_tol()) {
    std::vector<LawViolation> out;
    using K = LawViolation::Kind;
    for (int z = 0; z < law.K; ++z) {
        const auto& sl = law.table[z];
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                const S& v = sl.p[x][y];
                if (v < S(0) - tol || v > S(1) + tol) {
                    S res = v < S(0) ? S(0) - v : v - S(1);
                    out.push_back({K::CellRange, z,
                                   scalar_traits<S>::to_double(res)});
                }
            }
        S sum = sl.total();
        if (abs_val(sum - S(1)) > tol)
            out.push_back({K::SliceSum, z,
                           scalar_traits<S>::to_double(abs_val(sum - S(1)))});
    }
    if (law.pz) {
        S sum = S(0);
        for (int z = 0; z < law.K; ++z) {
            const S& v = (*law.pz)[z];
            sum += v;
            if (v < S(0) - tol || v > S(1) + tol)
                out.push_back({K::PzRange, z, scalar_traits<S>::to_double(v)});
            if (!(v > S(0)))
                out.push_back({K::PzZero, z, scalar_traits<S>::to_double(v)});
        }
        if (abs_val(sum - S(1)) > tol)
            out.push_back({K::PzSum, -1,
                           scalar_traits<S>::to_double(abs_val(sum - S(1)))});
    }
    return out;
}

// Builds the OutcomeJoint from its (pi0, pi1, pi_AR) parametrization:
//   q[1][1] = pi_AR, q[1][0] = pi0 - pi_AR, q[0][1] = pi1 - pi_AR,
//   q[0][0] = 1 - pi0 - pi1 + pi_AR.
// Cells that dip below zero within tolerance are clamped and the table
// renormalized; anything below -tol is InfeasibleTriple.
template <class S>
OutcomeJoint<S> normalize_outcome_joint(
    const S& pi0, const S& pi1, const S& pi_ar,
    const S& tol = scalar_traits<S>::feas_tol()) {
    OutcomeJoint<S> j;
    j.q[1][1] = pi_ar;
    j.q[1][0] = pi0 - pi_ar;
    j.q[0][1] = pi1 - pi_ar;
    j.q[0][0] = S(1) - pi0 - pi1 + pi_ar;
    bool clamped = false;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            if (j.q[a][b] < S(0) - tol)
                throw InfeasibleTriple(
                    "(pi0,pi1,piAR) implies a negative cell q[" +
                    std::to_string(a) + "][" + std::to_string(b) + "] = " +
                    scalar_traits<S>::str(j.q[a][b]));
            if (j.q[a][b] < S(0)) {
                j.q[a][b] = S(0);
                clamped = true;
            }
        }
    if (clamped) {
        S sum = j.total();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) j.q[a][b] /= sum;
    }
    return j;
}

// Exact cell-wise conversions between arithmetic modes. double -> Rat is
// exact binary-fraction conversion; Rat -> double rounds to nearest.
inline ObservedLaw<Rat> to_rational(const ObservedLaw<double>& law) {
    ObservedLaw<Rat> out;
    out.K = law.K;
    out.labels = law.labels;
    out.table.resize(law.K);
    for (int z = 0; z < law.K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                out.table[z].p[x][y] = Rat(law.table[z].p[x][y]);
    if (law.pz) {
        std::vector<Rat> pz;
        for (double v : *law.pz) pz.emplace_back(v);
        out.pz = std::move(pz);
    }
    return out;
}

inline ObservedLaw<double> to_double(const ObservedLaw<Rat>& law) {
    ObservedLaw<double> out;
    out.K = law.K;
    out.labels = law.labels;
    out.table.resize(law.K);
    for (int z = 0; z < law.K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                out.table[z].p[x][y] = law.table[z].p[x][y].to_double();
    if (law.pz) {
        std::vector<double> pz;
        for (const Rat& v : *law.pz) pz.push_back(v.to_double());
        out.pz = std::move(pz);
    }
    return out;
}

inline OutcomeJoint<Rat> to_rational(const OutcomeJoint<double>& j) {
    OutcomeJoint<Rat> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.q[a][b] = Rat(j.q[a][b]);
    return out;
}

inline OutcomeJoint<double> to_double(const OutcomeJoint<Rat>& j) {
    OutcomeJoint<double> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.q[a][b] = j.q[a][b].to_double();
    return out;
}

}  // namespace ivb
