#include "augopt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

bool power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

// softmax probabilities from logits, numerically shifted
void softmax(std::vector<double>& z) {
    double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (auto& v : z) v /= sum;
}

double ce_at(const std::vector<double>& w, const std::vector<double>& b,
             int num_classes, std::uint32_t dim, const Dataset& data) {
    if (data.x.empty()) return 0.0;
    double total = 0.0;
    std::vector<double> z(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        for (int c = 0; c < num_classes; ++c) {
            const double* row = w.data() + static_cast<std::size_t>(c) * dim;
            double acc = b[static_cast<std::size_t>(c)];
            for (const auto& [idx, v] : data.x[i].entries) {
                acc += row[idx] * double(v);
            }
            z[static_cast<std::size_t>(c)] = acc;
        }
        double m = *std::max_element(z.begin(), z.end());
        double lse = 0.0;
        for (double v : z) lse += std::exp(v - m);
        total += m + std::log(lse) - z[static_cast<std::size_t>(data.y[i])];
    }
    return total / static_cast<double>(data.x.size());
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = kFnvOffset;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

FeatureVec featurize(const TokenSeq& tokens, std::uint32_t dim) {
    if (!power_of_two(dim)) {
        throw ConfigError("featurize: dim " + std::to_string(dim) +
                          " is not a power of two");
    }
    const std::uint32_t mask = dim - 1;
    std::map<std::uint32_t, float> buckets;  // ordered: entries sorted by index
    for (const auto& tok : tokens) {
        buckets[static_cast<std::uint32_t>(fnv1a64(tok)) & mask] += 1.0f;
    }
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        std::string bigram = tokens[i];
        bigram.push_back('\x1f');
        bigram += tokens[i + 1];
        buckets[static_cast<std::uint32_t>(fnv1a64(bigram)) & mask] += 1.0f;
    }
    double norm_sq = 0.0;
    for (const auto& [idx, v] : buckets) norm_sq += double(v) * double(v);
    FeatureVec out;
    out.entries.reserve(buckets.size());
    const double inv = norm_sq > 0.0 ? 1.0 / std::sqrt(norm_sq) : 0.0;
    for (const auto& [idx, v] : buckets) {
        out.entries.emplace_back(idx, static_cast<float>(v * inv));
    }
    return out;
}

Dataset featurize_corpus(const LabeledCorpus& corpus, std::uint32_t dim) {
    Dataset data;
    data.num_classes = corpus.num_classes;
    data.feature_dim = dim;
    data.x.reserve(corpus.size());
    data.y.reserve(corpus.size());
    for (const auto& ex : corpus.examples) {
        data.x.push_back(featurize(tokenize(ex.text), dim));
        data.y.push_back(ex.label);
    }
    return data;
}

int SurrogateModel::predict(const FeatureVec& x) const {
    auto z = logits(x);
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
        if (z[c] > z[best]) best = c;  // strict: ties keep the lowest id
    }
    return best;
}

std::vector<double> SurrogateModel::logits(const FeatureVec& x) const {
    std::vector<double> z(static_cast<std::size_t>(num_classes), 0.0);
    for (int c = 0; c < num_classes; ++c) {
        const double* row = weights.data() +
                            static_cast<std::size_t>(c) * feature_dim;
        double acc = bias[static_cast<std::size_t>(c)];
        for (const auto& [idx, v] : x.entries) acc += row[idx] * double(v);
        z[static_cast<std::size_t>(c)] = acc;
    }
    return z;
}

double mean_cross_entropy(const SurrogateModel& model, const Dataset& data) {
    if (data.x.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        auto z = model.logits(data.x[i]);
        double m = *std::max_element(z.begin(), z.end());
        double lse = 0.0;
        for (double v : z) lse += std::exp(v - m);
        total += m + std::log(lse) - z[static_cast<std::size_t>(data.y[i])];
    }
    return total / static_cast<double>(data.x.size());
}

double surrogate_loss_grad(const std::vector<double>& weights,
                           const std::vector<double>& bias,
                           const Dataset& data, double l2,
                           std::vector<double>& grad_w,
                           std::vector<double>& grad_b) {
    const int c_num = data.num_classes;
    const std::uint32_t dim = data.feature_dim;
    grad_w.assign(weights.size(), 0.0);
    grad_b.assign(bias.size(), 0.0);
    const double inv_n = data.x.empty() ? 0.0 : 1.0 / double(data.x.size());
    double loss = 0.0;
    std::vector<double> z(static_cast<std::size_t>(c_num));
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        for (int c = 0; c < c_num; ++c) {
            const double* row =
                weights.data() + static_cast<std::size_t>(c) * dim;
            double acc = bias[static_cast<std::size_t>(c)];
            for (const auto& [idx, v] : data.x[i].entries) {
                acc += row[idx] * double(v);
            }
            z[static_cast<std::size_t>(c)] = acc;
        }
        double m = *std::max_element(z.begin(), z.end());
        double lse = 0.0;
        for (double v : z) lse += std::exp(v - m);
        loss += (m + std::log(lse) -
                 z[static_cast<std::size_t>(data.y[i])]) * inv_n;
        softmax(z);
        for (int c = 0; c < c_num; ++c) {
            double delta =
                (z[static_cast<std::size_t>(c)] - (data.y[i] == c ? 1.0 : 0.0)) *
                inv_n;
            grad_b[static_cast<std::size_t>(c)] += delta;
            double* grow = grad_w.data() + static_cast<std::size_t>(c) * dim;
            for (const auto& [idx, v] : data.x[i].entries) {
                grow[idx] += delta * double(v);
            }
        }
    }
    double reg = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        reg += weights[j] * weights[j];
        grad_w[j] += l2 * weights[j];
    }
    return loss + 0.5 * l2 * reg;
}

SurrogateModel train_surrogate(const Dataset& train, const Dataset& val,
                               const SurrogateHp& hp,
                               [[maybe_unused]] std::uint64_t seed) {
    if (!power_of_two(hp.feature_dim)) {
        throw ConfigError("train_surrogate: feature_dim must be a power of two");
    }
    if (train.x.empty()) throw DataError("train_surrogate: empty training set");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(train.num_classes), 0);
    for (int y : train.y) ++counts[static_cast<std::size_t>(y)];
    for (int c = 0; c < train.num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw DataError("train_surrogate: class " + std::to_string(c) +
                            " absent from training data");
        }
    }
    SurrogateModel model;
    model.num_classes = train.num_classes;
    model.feature_dim = hp.feature_dim;
    const std::size_t w_size =
        static_cast<std::size_t>(train.num_classes) * hp.feature_dim;
    std::vector<double> w(w_size, 0.0);
    std::vector<double> b(static_cast<std::size_t>(train.num_classes), 0.0);
    model.weights = w;
    model.bias = b;
    model.best_epoch = 0;
    double best_ce = ce_at(w, b, train.num_classes, hp.feature_dim, val);
    std::vector<double> gw, gb;
    for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
        surrogate_loss_grad(w, b, train, hp.l2_reg, gw, gb);
        for (std::size_t j = 0; j < w.size(); ++j) {
            w[j] -= hp.learning_rate * gw[j];
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            b[j] -= hp.learning_rate * gb[j];
        }
        double ce = ce_at(w, b, train.num_classes, hp.feature_dim, val);
        if (ce < best_ce) {
            best_ce = ce;
            model.weights = w;
            model.bias = b;
            model.best_epoch = epoch;
        }
    }
    return model;
}

double accuracy(const SurrogateModel& model, const Dataset& data) {
    if (data.x.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        if (model.predict(data.x[i]) == data.y[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.x.size());
}

}  // namespace augopt
