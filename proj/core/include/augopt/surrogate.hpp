#pragma once

#include <cstdint>
#include <vector>

#include "augopt/corpus.hpp"
#include "augopt/lexstats.hpp"

namespace augopt {

// Sparse L2-normalized feature vector; entries sorted by index, indices
// unique, each < feature_dim.
struct FeatureVec {
    std::vector<std::pair<std::uint32_t, float>> entries;
};

// FNV-1a 64-bit over the token bytes; bigrams join their tokens with a
// 0x1F separator. Platform-independent by construction.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

// Unigram + bigram counts hashed into `dim` buckets (dim must be a power
// of two), then L2-normalized. Empty input gives an empty (zero) vector.
FeatureVec featurize(const TokenSeq& tokens, std::uint32_t dim);

// Featurized corpus ready for training or scoring.
struct Dataset {
    std::vector<FeatureVec> x;
    std::vector<int> y;
    int num_classes = 0;
    std::uint32_t feature_dim = 0;
};
Dataset featurize_corpus(const LabeledCorpus& corpus, std::uint32_t dim);

struct SurrogateHp {
    std::uint32_t feature_dim = 1u << 16;
    double learning_rate = 4.0;
    int epochs = 60;
    double l2_reg = 1e-4;
};

// Multinomial logistic regression, dense weights [num_classes x dim].
struct SurrogateModel {
    std::vector<double> weights;  // row-major [class][feature]
    std::vector<double> bias;
    int num_classes = 0;
    std::uint32_t feature_dim = 0;
    int best_epoch = 0;  // checkpoint that was kept

    // argmax of class scores; ties resolve to the lowest class id
    int predict(const FeatureVec& x) const;
    std::vector<double> logits(const FeatureVec& x) const;
};

// Mean cross-entropy of the model on the data (no regularization term).
double mean_cross_entropy(const SurrogateModel& model, const Dataset& data);

// Objective value and gradient of mean cross-entropy + (l2/2)*||W||^2 at
// (weights, bias); exposed so the analytic gradient can be checked against
// finite differences.
double surrogate_loss_grad(const std::vector<double>& weights,
                           const std::vector<double>& bias,
                           const Dataset& data, double l2,
                           std::vector<double>& grad_w,
                           std::vector<double>& grad_b);

// Deterministic full-batch gradient descent from zero initialization with
// a constant step size; returns the parameters from the epoch (0 = init)
// with the lowest val cross-entropy, earlier epoch winning ties. The seed
// is reserved for stochastic trainers and currently unused.
SurrogateModel train_surrogate(const Dataset& train, const Dataset& val,
                               const SurrogateHp& hp, std::uint64_t seed);

double accuracy(const SurrogateModel& model, const Dataset& data);

}  // namespace augopt
