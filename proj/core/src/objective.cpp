#include "augopt/objective.hpp"

#include <chrono>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

ObjectiveResult score_training_set(const LabeledCorpus& train_set,
                                   const EvalTask& task, std::uint64_t seed,
                                   std::chrono::steady_clock::time_point t0) {
    Dataset train_ds = featurize_corpus(train_set, task.surrogate.feature_dim);
    Dataset valm_ds =
        featurize_corpus(*task.val_model, task.surrogate.feature_dim);
    SurrogateModel model = train_surrogate(train_ds, valm_ds, task.surrogate, seed);
    ObjectiveResult res;
    res.train_loss_final = mean_cross_entropy(model, train_ds);
    res.best_epoch = model.best_epoch;
    Dataset valp_ds =
        featurize_corpus(*task.val_policy, task.surrogate.feature_dim);
    res.val_accuracy = accuracy(model, valp_ds);
    res.loss_j = 1.0 - res.val_accuracy;
    res.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return res;
}

void check_task(const EvalTask& task) {
    if (!task.train || !task.val_model || !task.val_policy) {
        throw ConfigError("evaluate_objective: missing corpus");
    }
}

}  // namespace

ObjectiveResult evaluate_objective(const Policy& policy, const EvalTask& task,
                                   std::uint64_t seed) {
    check_task(task);
    auto t0 = std::chrono::steady_clock::now();
    OpContext ctx;
    ctx.tfidf = task.tfidf;
    ctx.thesaurus = task.thesaurus;
    AugConfig aug = task.aug;
    aug.master_seed = seed;
    LabeledCorpus augmented =
        task.imbalanced
            ? augment_minority(policy, *task.train, task.minority_class, aug, ctx)
            : augment_corpus(policy, *task.train, aug, ctx);
    return score_training_set(augmented, task, seed, t0);
}

ObjectiveResult evaluate_no_aug(const EvalTask& task, std::uint64_t seed) {
    check_task(task);
    auto t0 = std::chrono::steady_clock::now();
    return score_training_set(*task.train, task, seed, t0);
}

}  // namespace augopt
