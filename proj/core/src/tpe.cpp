#include "augopt/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// density of one truncated Gaussian component at x in [lo, hi]
double trunc_pdf(double x, double mu, double sigma, double lo, double hi) {
    double zmass = norm_cdf((hi - mu) / sigma) - norm_cdf((lo - mu) / sigma);
    return norm_pdf((x - mu) / sigma) / (sigma * zmass);
}

}  // namespace

ParamSpace ParamSpace::for_policy(int n_ops) {
    if (n_ops < 1) throw ConfigError("ParamSpace: n_ops must be >= 1");
    ParamSpace space;
    space.dims.reserve(static_cast<std::size_t>(n_ops) * 3);
    for (int i = 0; i < n_ops; ++i) {
        space.dims.push_back({DimKind::kCategorical, 0.0, 0.0, kNumOpTypes});
        space.dims.push_back({DimKind::kContinuous, 0.0, 1.0, 0});
        space.dims.push_back({DimKind::kContinuous, 0.0, 0.5, 0});
    }
    return space;
}

std::vector<double> ParamSpace::sample_uniform(Rng& rng) const {
    std::vector<double> point(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (dims[d].kind == DimKind::kCategorical) {
            point[d] = static_cast<double>(
                rng.uniform_index(static_cast<std::size_t>(dims[d].categories)));
        } else {
            point[d] = rng.uniform(dims[d].lo, dims[d].hi);
        }
    }
    return point;
}

std::vector<double> ParamSpace::encode(const Policy& policy) const {
    if (policy.ops.size() * 3 != dims.size()) {
        throw ConfigError("ParamSpace: policy has " +
                          std::to_string(policy.ops.size()) + " ops, space has " +
                          std::to_string(dims.size() / 3) + " slots");
    }
    std::vector<double> point(dims.size());
    for (std::size_t i = 0; i < policy.ops.size(); ++i) {
        point[3 * i] = static_cast<double>(static_cast<int>(policy.ops[i].type));
        point[3 * i + 1] = policy.ops[i].p;
        point[3 * i + 2] = policy.ops[i].lambda;
    }
    return point;
}

Policy ParamSpace::decode(const std::vector<double>& point) const {
    if (point.size() != dims.size()) {
        throw ConfigError("ParamSpace: point dimension mismatch");
    }
    Policy policy;
    policy.ops.resize(dims.size() / 3);
    for (std::size_t i = 0; i < policy.ops.size(); ++i) {
        int code = static_cast<int>(std::lround(point[3 * i]));
        if (code < 0 || code >= kNumOpTypes) {
            throw ConfigError("ParamSpace: bad op code in point");
        }
        policy.ops[i].type = static_cast<OpType>(code);
        policy.ops[i].p = point[3 * i + 1];
        policy.ops[i].lambda = point[3 * i + 2];
    }
    return policy;
}

bool ParamSpace::in_range(const std::vector<double>& point) const {
    if (point.size() != dims.size()) return false;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (dims[d].kind == DimKind::kCategorical) {
            int c = static_cast<int>(std::lround(point[d]));
            if (c < 0 || c >= dims[d].categories) return false;
        } else if (!(point[d] >= dims[d].lo && point[d] <= dims[d].hi)) {
            return false;
        }
    }
    return true;
}

HistorySplit split_history(const std::vector<Trial>& history, double gamma) {
    if (history.empty()) throw ConfigError("split_history: empty history");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ConfigError("split_history: gamma must lie in (0, 1)");
    }
    std::vector<std::size_t> order(history.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (history[a].loss != history[b].loss) {
            return history[a].loss < history[b].loss;
        }
        return history[a].trial_index < history[b].trial_index;
    });
    const std::size_t n_good = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(gamma * static_cast<double>(history.size()))));
    HistorySplit split;
    split.good.assign(order.begin(), order.begin() + n_good);
    split.bad.assign(order.begin() + n_good, order.end());
    split.j_dagger = history[split.good.back()].loss;
    return split;
}

TruncGaussMixture fit_trunc_gauss_mixture(double lo, double hi,
                                          const std::vector<double>& points) {
    if (!(hi > lo)) throw ConfigError("mixture: empty range");
    TruncGaussMixture mix;
    mix.lo = lo;
    mix.hi = hi;
    const double range = hi - lo;
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double min_bw =
        range / static_cast<double>(std::min<std::size_t>(100, n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double left = i == 0 ? lo : sorted[i - 1];
        double right = i + 1 == n ? hi : sorted[i + 1];
        double bw = std::max(sorted[i] - left, right - sorted[i]);
        bw = std::clamp(bw, min_bw, range);
        mix.mu.push_back(sorted[i]);
        mix.sigma.push_back(bw);
    }
    mix.mu.push_back(0.5 * (lo + hi));  // prior component
    mix.sigma.push_back(range);
    return mix;
}

double TruncGaussMixture::pdf(double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += trunc_pdf(x, mu[i], sigma[i], lo, hi);
    }
    return acc / static_cast<double>(mu.size());
}

double TruncGaussMixture::log_pdf(double x) const { return std::log(pdf(x)); }

double TruncGaussMixture::sample(Rng& rng) const {
    std::size_t comp = rng.uniform_index(mu.size());
    for (;;) {
        double x = rng.normal(mu[comp], sigma[comp]);
        if (x >= lo && x <= hi) return x;
    }
}

CategoricalDist fit_categorical(int categories, const std::vector<int>& values) {
    if (categories < 1) throw ConfigError("categorical: needs >= 1 category");
    CategoricalDist dist;
    dist.prob.assign(static_cast<std::size_t>(categories), 0.0);
    for (int v : values) {
        if (v < 0 || v >= categories) {
            throw ConfigError("categorical: value out of range");
        }
        dist.prob[static_cast<std::size_t>(v)] += 1.0;
    }
    const double denom = static_cast<double>(values.size() + categories);
    for (auto& p : dist.prob) p = (p + 1.0) / denom;
    return dist;
}

double CategoricalDist::log_prob(int c) const {
    if (c < 0 || static_cast<std::size_t>(c) >= prob.size()) {
        throw ConfigError("categorical: log_prob out of range");
    }
    return std::log(prob[static_cast<std::size_t>(c)]);
}

int CategoricalDist::sample(Rng& rng) const {
    return static_cast<int>(rng.weighted_index(prob));
}

double DimDensity::log_pdf(double x) const {
    if (kind == DimKind::kCategorical) {
        return cat.log_prob(static_cast<int>(std::lround(x)));
    }
    return cont.log_pdf(x);
}

double DimDensity::sample(Rng& rng) const {
    if (kind == DimKind::kCategorical) {
        return static_cast<double>(cat.sample(rng));
    }
    return cont.sample(rng);
}

DensityPair fit_densities(const std::vector<Trial>& history,
                          const HistorySplit& split, const ParamSpace& space) {
    std::vector<std::vector<double>> points;
    points.reserve(history.size());
    for (const auto& t : history) points.push_back(space.encode(t.policy));
    DensityPair pair;
    auto fit_group = [&](const std::vector<std::size_t>& group) {
        std::vector<DimDensity> out(space.size());
        for (std::size_t d = 0; d < space.size(); ++d) {
            const DimSpec& spec = space.dims[d];
            out[d].kind = spec.kind;
            if (spec.kind == DimKind::kCategorical) {
                std::vector<int> vals;
                vals.reserve(group.size());
                for (std::size_t g : group) {
                    vals.push_back(
                        static_cast<int>(std::lround(points[g][d])));
                }
                out[d].cat = fit_categorical(spec.categories, vals);
            } else {
                std::vector<double> vals;
                vals.reserve(group.size());
                for (std::size_t g : group) vals.push_back(points[g][d]);
                out[d].cont = fit_trunc_gauss_mixture(spec.lo, spec.hi, vals);
            }
        }
        return out;
    };
    pair.l = fit_group(split.good);
    pair.g = fit_group(split.bad);  // empty group leaves the prior alone
    return pair;
}

double acquisition_score(const std::vector<double>& point,
                         const DensityPair& densities, const ParamSpace& space) {
    if (!space.in_range(point)) {
        throw ConfigError("acquisition_score: point outside parameter space");
    }
    double score = 0.0;
    for (std::size_t d = 0; d < space.size(); ++d) {
        score += densities.l[d].log_pdf(point[d]) -
                 densities.g[d].log_pdf(point[d]);
    }
    return score;
}

TpeState::TpeState(ParamSpace space, TpeConfig cfg)
    : space_(std::move(space)), config_(cfg) {
    if (space_.dims.empty()) throw ConfigError("TpeState: empty space");
    if (!(config_.gamma > 0.0 && config_.gamma < 1.0)) {
        throw ConfigError("TpeState: gamma must lie in (0, 1)");
    }
    if (config_.n_startup < 1) {
        throw ConfigError("TpeState: n_startup must be >= 1");
    }
    if (config_.n_candidates < 1) {
        throw ConfigError("TpeState: n_candidates must be >= 1");
    }
}

std::vector<double> TpeState::suggest_point(Rng& rng) {
    if (history_.size() < static_cast<std::size_t>(config_.n_startup)) {
        return space_.sample_uniform(rng);
    }
    HistorySplit split = split_history(history_, config_.gamma);
    DensityPair densities = fit_densities(history_, split, space_);
    std::vector<double> best_point;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < config_.n_candidates; ++c) {
        std::vector<double> cand(space_.size());
        for (std::size_t d = 0; d < space_.size(); ++d) {
            cand[d] = densities.l[d].sample(rng);
        }
        double score = acquisition_score(cand, densities, space_);
        if (score > best_score) {  // strict: ties keep the earliest candidate
            best_score = score;
            best_point = std::move(cand);
        }
    }
    return best_point;
}

Policy TpeState::suggest(Rng& rng) { return space_.decode(suggest_point(rng)); }

void TpeState::observe(Trial trial) {
    if (!std::isfinite(trial.loss)) {
        throw ConfigError("observe: loss must be finite, got " +
                          std::to_string(trial.loss));
    }
    history_.push_back(std::move(trial));
}

}  // namespace augopt
