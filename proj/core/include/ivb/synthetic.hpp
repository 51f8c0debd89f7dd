#pragma once

#include <cstdint>
#include <vector>

#include "ivb/bounds.hpp"
#include "ivb/observed.hpp"
#include "ivb/witness.hpp"

namespace ivb {

// Fixed, versioned pseudorandom stream so seeds reproduce across
// implementations: xoshiro256++ 1.0 state-seeded by splitmix64, uniforms
// via (x >> 11) * 2^-53, normals by Box-Muller, Gamma by Marsaglia-Tsang
// (alpha >= 1) with the standard power boost for alpha < 1, Dirichlet as
// normalized independent Gamma draws.
std::uint64_t splitmix64_next(std::uint64_t& state);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform01();      // [0, 1)
    double uniform_open();   // (0, 1)
    double normal();
    double gamma(double alpha);
    std::vector<double> dirichlet(int n, double alpha);
    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t s_[4];
};

// Documented split rule: substream i of master seed s is seeded with
// splitmix64 applied to (s + (i+1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

enum class GenMode { FullM1, ObservedOnly, BoundaryBiased };

struct GeneratorConfig {
    int K = 2;
    std::uint64_t seed = 0;
    double concentration = 1.0;  // Dirichlet parameter, > 0
    GenMode mode = GenMode::ObservedOnly;
};

namespace detail {

// Draws n independent Gamma(alpha) variates and normalizes them in the
// target scalar type, so rational mode yields cells summing to 1 exactly.
template <class S>
std::vector<S> dirichlet_draws(Rng& rng, int n, double alpha) {
    std::vector<S> out;
    out.reserve(n);
    S total = S(0);
    for (int i = 0; i < n; ++i) {
        out.push_back(scalar_traits<S>::from_double(rng.gamma(alpha)));
        total += out.back();
    }
    for (auto& v : out) v /= total;
    return out;
}

inline AtomKey decode_atom_index(std::uint64_t a, int K) {
    const int t = static_cast<int>(a >> K);
    return {static_cast<std::uint32_t>(a & ((std::uint64_t(1) << K) - 1)),
            (t >> 1) & 1, t & 1};
}

// Support on at most three atoms: lands the law on faces of the polytope.
template <class S>
FullM1Law<S> sample_sparse_m1(const GeneratorConfig& cfg, Rng& rng) {
    const std::uint64_t n_atoms = std::uint64_t(4) << cfg.K;
    const int support = 1 + static_cast<int>(rng.below(3));
    std::vector<std::uint64_t> chosen;
    while (static_cast<int>(chosen.size()) < support) {
        std::uint64_t a = rng.below(n_atoms);
        bool dup = false;
        for (auto c : chosen) dup |= (c == a);
        if (!dup) chosen.push_back(a);
    }
    std::vector<S> w = dirichlet_draws<S>(rng, support, cfg.concentration);
    FullM1Law<S> full;
    full.K = cfg.K;
    for (int i = 0; i < support; ++i)
        full.atoms.push_back({decode_atom_index(chosen[i], cfg.K), w[i]});
    full.sort_atoms();
    return full;
}

}  // namespace detail

// Dirichlet-weighted law over the 4 * 2^K response atoms with an
// independent Dirichlet P(Z). BoundaryBiased mode alternates between the
// dense Dirichlet draw and sparse supports of at most three atoms.
// Deterministic given cfg.
template <class S>
FullM1Law<S> sample_full_m1(const GeneratorConfig& cfg) {
    if (cfg.K > FullM1Law<S>::k_dense_limit)
        throw SizeExceeded("sample_full_m1 requires K <= " +
                           std::to_string(FullM1Law<S>::k_dense_limit));
    Rng rng(cfg.seed);
    const std::uint64_t n_atoms = std::uint64_t(4) << cfg.K;

    FullM1Law<S> full;
    if (cfg.mode == GenMode::BoundaryBiased && (rng.next_u64() & 1u)) {
        full = detail::sample_sparse_m1<S>(cfg, rng);
    } else {
        full.K = cfg.K;
        std::vector<S> w = detail::dirichlet_draws<S>(
            rng, static_cast<int>(n_atoms), cfg.concentration);
        for (std::uint64_t a = 0; a < n_atoms; ++a)
            full.atoms.push_back({detail::decode_atom_index(a, cfg.K), w[a]});
    }
    full.pz = detail::dirichlet_draws<S>(rng, cfg.K, cfg.concentration);
    return full;
}

// K independent Dirichlet 2x2 slices; IV-infeasible laws are possible by
// design (negative-path inputs). Deterministic given cfg.
template <class S>
ObservedLaw<S> sample_observed(const GeneratorConfig& cfg) {
    Rng rng(cfg.seed);
    ObservedLaw<S> law;
    law.K = cfg.K;
    law.table.resize(cfg.K);
    law.labels.resize(cfg.K);
    for (int z = 0; z < cfg.K; ++z) {
        law.labels[z] = z + 1;
        std::vector<S> cells =
            detail::dirichlet_draws<S>(rng, 4, cfg.concentration);
        law.table[z].p = {{{cells[0], cells[1]}, {cells[2], cells[3]}}};
    }
    return law;
}

// Observed law close to the feasibility boundary: the phi-image of a
// sparse counterfactual law (which sits on faces of the feasible set),
// blended a short random distance toward an independent Dirichlet law.
// Straddles feasible/infeasible across seeds.
template <class S>
ObservedLaw<S> sample_near_boundary_observed(const GeneratorConfig& cfg) {
    Rng rng(derive_seed(cfg.seed, 0));
    FullM1Law<S> m1 = detail::sample_sparse_m1<S>(cfg, rng);
    ObservedLaw<S> base = phi(m1).second;

    GeneratorConfig mix_cfg = cfg;
    mix_cfg.seed = derive_seed(cfg.seed, 1);
    ObservedLaw<S> noise = sample_observed<S>(mix_cfg);
    S t = scalar_traits<S>::from_double(0.05 * rng.uniform01());
    for (int z = 0; z < cfg.K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                base.table[z].p[x][y] =
                    (S(1) - t) * base.table[z].p[x][y] +
                    t * noise.table[z].p[x][y];
    base.pz.reset();
    return base;
}

// ACE implied by a full counterfactual law: helped mass minus hurt mass.
template <class S>
S true_ace(const FullM1Law<S>& full) {
    S ace = S(0);
    for (const auto& [key, p] : full.atoms) {
        if (key.y1 == 1 && key.y0 == 0) ace += p;
        if (key.y1 == 0 && key.y0 == 1) ace -= p;
    }
    return ace;
}

}  // namespace ivb
