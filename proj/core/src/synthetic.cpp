#include "ivb/synthetic.hpp"

#include <cmath>

namespace ivb {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    return splitmix64_next(state);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}
}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64_next(sm);
}

std::uint64_t Rng::next_u64() {
    // xoshiro256++ 1.0
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
    for (;;) {
        double u = uniform01();
        if (u > 0.0) return u;
    }
}

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection to avoid modulo bias
    const std::uint64_t limit = n * ((~std::uint64_t(0)) / n);
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

double Rng::normal() {
    // Box-Muller; the second variate of the pair is discarded to keep the
    // stream position a simple function of the call count
    double u1 = uniform_open();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

double Rng::gamma(double alpha) {
    if (alpha < 1.0) {
        double g = gamma(alpha + 1.0);
        double u = uniform_open();
        return g * std::pow(u, 1.0 / alpha);
    }
    // Marsaglia-Tsang squeeze
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

std::vector<double> Rng::dirichlet(int n, double alpha) {
    std::vector<double> out(n);
    double total = 0.0;
    for (auto& v : out) {
        v = gamma(alpha);
        total += v;
    }
    for (auto& v : out) v /= total;
    return out;
}

}  // namespace ivb
