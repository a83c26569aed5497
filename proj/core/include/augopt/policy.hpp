#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augopt/corpus.hpp"
#include "augopt/edit_ops.hpp"

namespace augopt {

// A compositional augmentation policy: a fixed set of gated edit ops.
// Applying it to a text samples a small ordered subset and folds the ops
// left to right, so op order matters.
struct Policy {
    std::vector<EditOp> ops;
};

struct AugConfig {
    int n_select = 2;              // ops sampled per text, without replacement
    int n_aug = 16;                // synthetic variants per original
    std::uint64_t master_seed = 0; // root of all per-variant streams
};

// Ranges on every op; n_select handled at the call sites that know it.
void validate_policy(const Policy& policy);

// Draws an ordered n_select-subset of policy.ops uniformly over
// arrangements and applies them in draw order.
TokenSeq augment_one(const Policy& policy, const TokenSeq& tokens,
                     int n_select, const OpContext& ctx, Rng& rng);

// Originals (verbatim) followed by n_aug variants per original, grouped by
// parent. Variant (example, v) uses an RNG stream derived from
// (master_seed, example_id, v), so output is independent of evaluation
// order or worker count.
LabeledCorpus augment_corpus(const Policy& policy, const LabeledCorpus& corpus,
                             const AugConfig& cfg, const OpContext& ctx);

// Binary corpora with a strictly smaller minority class: generates
// floor(majority/minority) - 1 variants per minority original, then tops
// up the remainder by plain duplication of uniformly chosen minority
// originals, leaving the class counts exactly equal.
LabeledCorpus augment_minority(const Policy& policy, const LabeledCorpus& corpus,
                               int minority_class, const AugConfig& cfg,
                               const OpContext& ctx);

// JSON document: {"ops": [{"type": "TS", "p": 0.77, "lambda": 0.07}, ...]}.
// serialize(parse(serialize(p))) == serialize(p); parse failures name the
// offending field.
std::string serialize_policy(const Policy& policy);
Policy parse_policy(const std::string& text);
Policy load_policy_file(const std::string& path);
void save_policy_file(const Policy& policy, const std::string& path);

}  // namespace augopt
