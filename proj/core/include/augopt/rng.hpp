#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace augopt {

// splitmix64 step; used for seed derivation so that streams for distinct
// (seed, path) tuples are decorrelated.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Hash a master seed together with a path of components into a stream seed.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t x = master;
    std::uint64_t out = splitmix64(x);
    for (std::uint64_t p : path) {
        x ^= p + 0x9E3779B97F4A7C15ULL + (out << 6) + (out >> 2);
        out = splitmix64(x);
    }
    return out;
}

// Stream ids for derive_seed paths. Keeping them centralized avoids two
// call sites accidentally sharing a stream.
enum StreamId : std::uint64_t {
    kStreamAugment = 1,    // (kStreamAugment, example_id, variant_index)
    kStreamSuggest = 2,    // (kStreamSuggest, trial_index)
    kStreamObjective = 3,  // (kStreamObjective, trial_index)
    kStreamSplit = 4,      // corpus splitting
    kStreamRepeat = 5,     // (kStreamRepeat, repeat_index)
    kStreamFinalEval = 6,  // post-search retrain/eval
};

// Deterministic RNG. All sampling goes through the explicit transforms
// below; std:: distributions are not used anywhere because their output
// is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1)
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // [0, n); unbiased via rejection
    std::size_t uniform_index(std::size_t n) {
        assert(n > 0);
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (0 - un) % un;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return static_cast<std::size_t>(r % un);
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller; two fresh uniforms per call, no cached spare.
    double normal(double mu, double sigma) {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));  // u1 < 1 so finite
        return mu + sigma * r * std::cos(2.0 * M_PI * u2);
    }

    // weights need not sum to 1; requires at least one positive entry
    std::size_t weighted_index(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            assert(w >= 0.0);
            total += w;
        }
        assert(total > 0.0);
        double u = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace augopt
