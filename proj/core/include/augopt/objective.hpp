#pragma once

#include <cstdint>

#include "augopt/corpus.hpp"
#include "augopt/policy.hpp"
#include "augopt/surrogate.hpp"

namespace augopt {

struct ObjectiveResult {
    double loss_j = 1.0;           // 1 - val_accuracy
    double val_accuracy = 0.0;     // on the policy-scoring validation set
    double train_loss_final = 0.0; // mean CE of the kept checkpoint on train
    std::int64_t wall_time_ms = 0;
    int best_epoch = 0;
};

// Everything a trial evaluation needs besides the policy and the seed.
// val_policy is read exactly once, for the final accuracy; training and
// checkpoint selection see only train and val_model.
struct EvalTask {
    const LabeledCorpus* train = nullptr;
    const LabeledCorpus* val_model = nullptr;
    const LabeledCorpus* val_policy = nullptr;
    const TfIdfTable* tfidf = nullptr;        // built from train only
    const Thesaurus* thesaurus = nullptr;
    AugConfig aug;
    SurrogateHp surrogate;
    bool imbalanced = false;  // use minority-equalizing augmentation
    int minority_class = 0;
};

// Augments train under the policy (all variant RNG streams derive from
// `seed`), trains the surrogate, and scores the result on val_policy.
ObjectiveResult evaluate_objective(const Policy& policy, const EvalTask& task,
                                   std::uint64_t seed);

// Same pipeline with no augmentation step.
ObjectiveResult evaluate_no_aug(const EvalTask& task, std::uint64_t seed);

}  // namespace augopt
