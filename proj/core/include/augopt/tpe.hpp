#pragma once

#include <cstdint>
#include <vector>

#include "augopt/policy.hpp"
#include "augopt/rng.hpp"

namespace augopt {

enum class DimKind { kCategorical, kContinuous };

struct DimSpec {
    DimKind kind = DimKind::kContinuous;
    double lo = 0.0;     // continuous range
    double hi = 1.0;
    int categories = 0;  // categorical arity
};

// Flat view of a policy: per op slot, (type, p, lambda) in that order.
// Points are vectors of doubles; categorical dims hold exact small ints.
struct ParamSpace {
    std::vector<DimSpec> dims;

    static ParamSpace for_policy(int n_ops);
    std::size_t size() const { return dims.size(); }
    std::vector<double> sample_uniform(Rng& rng) const;
    std::vector<double> encode(const Policy& policy) const;
    Policy decode(const std::vector<double>& point) const;
    bool in_range(const std::vector<double>& point) const;
};

struct Trial {
    Policy policy;
    double loss = 0.0;
    int trial_index = 0;
    std::uint64_t seed = 0;
};

// Indices into the history, ordered by (loss, trial_index) ascending.
// j_dagger is the loss of the last good trial: the splitting value.
struct HistorySplit {
    std::vector<std::size_t> good;
    std::vector<std::size_t> bad;
    double j_dagger = 0.0;
};

// good gets max(1, ceil(gamma * n)) trials; boundary ties resolve by
// trial_index, earlier first.
HistorySplit split_history(const std::vector<Trial>& history, double gamma);

// Mixture of truncated Gaussians on [lo, hi]: one component per observed
// value plus a prior at the midpoint with sigma = range; uniform component
// weights. Per-point bandwidth is the larger neighbor gap in the sorted
// sequence extended by the range endpoints, clipped to
// [range / min(100, n_points + 1), range].
struct TruncGaussMixture {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> mu;
    std::vector<double> sigma;

    double pdf(double x) const;
    double log_pdf(double x) const;
    double sample(Rng& rng) const;
};

TruncGaussMixture fit_trunc_gauss_mixture(double lo, double hi,
                                          const std::vector<double>& points);

// Add-one smoothed category frequencies.
struct CategoricalDist {
    std::vector<double> prob;

    double log_prob(int c) const;
    int sample(Rng& rng) const;
};

CategoricalDist fit_categorical(int categories, const std::vector<int>& values);

struct DimDensity {
    DimKind kind = DimKind::kContinuous;
    TruncGaussMixture cont;
    CategoricalDist cat;

    double log_pdf(double x) const;
    double sample(Rng& rng) const;
};

// l fits the good group, g the bad; an empty bad group leaves g as the
// prior alone. Dimensions are treated independently.
struct DensityPair {
    std::vector<DimDensity> l;
    std::vector<DimDensity> g;
};

DensityPair fit_densities(const std::vector<Trial>& history,
                          const HistorySplit& split, const ParamSpace& space);

// sum over dims of log l(x_d) - log g(x_d); a monotone transform of the
// expected-improvement ratio. Out-of-range candidates are a caller bug.
double acquisition_score(const std::vector<double>& point,
                         const DensityPair& densities, const ParamSpace& space);

struct TpeConfig {
    double gamma = 0.25;
    int n_startup = 10;    // uniform suggestions before the model kicks in
    int n_candidates = 24; // draws from l scored per suggestion
};

class TpeState {
public:
    TpeState(ParamSpace space, TpeConfig cfg);

    // Uniform while history is shorter than n_startup; afterwards the best
    // of n_candidates draws from l by acquisition score (ties keep the
    // lowest candidate index).
    std::vector<double> suggest_point(Rng& rng);
    Policy suggest(Rng& rng);

    // Rejects non-finite losses.
    void observe(Trial trial);

    const std::vector<Trial>& history() const { return history_; }
    const ParamSpace& space() const { return space_; }
    const TpeConfig& config() const { return config_; }

private:
    ParamSpace space_;
    TpeConfig config_;
    std::vector<Trial> history_;
};

}  // namespace augopt
