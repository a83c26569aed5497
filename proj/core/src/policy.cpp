#include "augopt/policy.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

using json = nlohmann::json;

std::int64_t next_free_id(const LabeledCorpus& corpus) {
    std::int64_t next = 0;
    for (const auto& ex : corpus.examples) next = std::max(next, ex.id + 1);
    return next;
}

LabeledExample make_variant(const Policy& policy, const LabeledExample& parent,
                            int variant, const AugConfig& cfg,
                            const OpContext& ctx, std::int64_t id) {
    Rng rng(derive_seed(cfg.master_seed,
                        {kStreamAugment, static_cast<std::uint64_t>(parent.id),
                         static_cast<std::uint64_t>(variant)}));
    TokenSeq tokens = tokenize(parent.text);
    TokenSeq result = augment_one(policy, tokens, cfg.n_select, ctx, rng);
    LabeledExample ex;
    ex.text = detokenize(result);
    ex.label = parent.label;
    ex.id = id;
    ex.parent_id = parent.id;
    ex.variant = variant;
    return ex;
}

}  // namespace

void validate_policy(const Policy& policy) {
    if (policy.ops.empty()) {
        throw ConfigError("policy: ops must be non-empty");
    }
    for (std::size_t i = 0; i < policy.ops.size(); ++i) {
        const auto& op = policy.ops[i];
        if (!(op.p >= 0.0 && op.p <= 1.0)) {
            throw ConfigError("policy: ops[" + std::to_string(i) + "].p = " +
                              std::to_string(op.p) + " outside [0, 1]");
        }
        if (!(op.lambda >= 0.0 && op.lambda <= 0.5)) {
            throw ConfigError("policy: ops[" + std::to_string(i) +
                              "].lambda = " + std::to_string(op.lambda) +
                              " outside [0, 0.5]");
        }
    }
}

TokenSeq augment_one(const Policy& policy, const TokenSeq& tokens,
                     int n_select, const OpContext& ctx, Rng& rng) {
    const int n = static_cast<int>(policy.ops.size());
    if (n_select < 1 || n_select > n) {
        throw ConfigError("augment_one: n_select = " + std::to_string(n_select) +
                          " outside [1, " + std::to_string(n) + "]");
    }
    // partial Fisher-Yates: uniform over ordered arrangements
    std::vector<int> slots(n);
    std::iota(slots.begin(), slots.end(), 0);
    for (int j = 0; j < n_select; ++j) {
        std::size_t pick = static_cast<std::size_t>(j) +
                           rng.uniform_index(static_cast<std::size_t>(n - j));
        std::swap(slots[static_cast<std::size_t>(j)], slots[pick]);
    }
    TokenSeq cur = tokens;
    for (int j = 0; j < n_select; ++j) {
        cur = apply_op(policy.ops[slots[j]], cur, ctx, rng, slots[j]);
    }
    return cur;
}

LabeledCorpus augment_corpus(const Policy& policy, const LabeledCorpus& corpus,
                             const AugConfig& cfg, const OpContext& ctx) {
    validate_policy(policy);
    if (cfg.n_aug < 0) throw ConfigError("augment_corpus: n_aug must be >= 0");
    LabeledCorpus out = corpus;
    std::int64_t next_id = next_free_id(corpus);
    out.examples.reserve(corpus.examples.size() *
                         static_cast<std::size_t>(1 + cfg.n_aug));
    for (const auto& parent : corpus.examples) {
        for (int v = 1; v <= cfg.n_aug; ++v) {
            out.examples.push_back(
                make_variant(policy, parent, v, cfg, ctx, next_id++));
        }
    }
    out.recount();
    return out;
}

LabeledCorpus augment_minority(const Policy& policy, const LabeledCorpus& corpus,
                               int minority_class, const AugConfig& cfg,
                               const OpContext& ctx) {
    validate_policy(policy);
    if (corpus.num_classes != 2) {
        throw ConfigError("augment_minority: needs a binary corpus, got " +
                          std::to_string(corpus.num_classes) + " classes");
    }
    if (minority_class < 0 || minority_class > 1) {
        throw ConfigError("augment_minority: minority_class out of range");
    }
    const std::int64_t m = corpus.class_counts[minority_class];
    const std::int64_t big = corpus.class_counts[1 - minority_class];
    if (m == 0) throw DataError("augment_minority: minority class is empty");
    if (m >= big) {
        throw ConfigError("augment_minority: class " +
                          std::to_string(minority_class) +
                          " is not a strict minority (" + std::to_string(m) +
                          " vs " + std::to_string(big) + ")");
    }
    const int n_aug = static_cast<int>(big / m) - 1;
    LabeledCorpus out = corpus;
    std::int64_t next_id = next_free_id(corpus);
    std::vector<const LabeledExample*> minority_examples;
    for (const auto& ex : corpus.examples) {
        if (ex.label == minority_class) minority_examples.push_back(&ex);
    }
    for (const auto* parent : minority_examples) {
        for (int v = 1; v <= n_aug; ++v) {
            out.examples.push_back(
                make_variant(policy, *parent, v, cfg, ctx, next_id++));
        }
    }
    // Integer variant counts cannot always close the gap; plain duplicates
    // of uniformly chosen minority originals make the classes exactly even.
    const std::int64_t residual = big - m * static_cast<std::int64_t>(n_aug + 1);
    if (residual > 0) {
        Rng rng(derive_seed(cfg.master_seed, {kStreamAugment, 0, 0}));
        std::vector<std::size_t> order(minority_examples.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (std::int64_t r = 0; r < residual; ++r) {
            const auto* parent = minority_examples[order[static_cast<std::size_t>(r)]];
            LabeledExample dup = *parent;
            dup.id = next_id++;
            dup.parent_id = parent->id;
            dup.variant = 0;
            out.examples.push_back(std::move(dup));
        }
    }
    out.recount();
    return out;
}

std::string serialize_policy(const Policy& policy) {
    json ops = json::array();
    for (const auto& op : policy.ops) {
        ops.push_back(
            {{"type", op_code(op.type)}, {"p", op.p}, {"lambda", op.lambda}});
    }
    return json{{"ops", ops}}.dump(2);
}

Policy parse_policy(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("policy: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("ops") || !doc["ops"].is_array()) {
        throw ConfigError("policy: document must be an object with an "
                          "'ops' array");
    }
    Policy policy;
    std::size_t i = 0;
    for (const auto& item : doc["ops"]) {
        const std::string where = "ops[" + std::to_string(i) + "]";
        if (!item.is_object()) {
            throw ConfigError("policy: " + where + " must be an object");
        }
        if (!item.contains("type") || !item["type"].is_string()) {
            throw ConfigError("policy: " + where + ".type must be a string");
        }
        if (!item.contains("p") || !item["p"].is_number()) {
            throw ConfigError("policy: " + where + ".p must be a number");
        }
        if (!item.contains("lambda") || !item["lambda"].is_number()) {
            throw ConfigError("policy: " + where + ".lambda must be a number");
        }
        EditOp op;
        try {
            op.type = op_from_code(item["type"].get<std::string>());
        } catch (const ConfigError&) {
            throw ConfigError("policy: " + where + ".type: unknown code '" +
                              item["type"].get<std::string>() + "'");
        }
        op.p = item["p"].get<double>();
        op.lambda = item["lambda"].get<double>();
        if (!(op.p >= 0.0 && op.p <= 1.0)) {
            throw ConfigError("policy: " + where + ".p = " +
                              std::to_string(op.p) + " outside [0, 1]");
        }
        if (!(op.lambda >= 0.0 && op.lambda <= 0.5)) {
            throw ConfigError("policy: " + where + ".lambda = " +
                              std::to_string(op.lambda) + " outside [0, 0.5]");
        }
        policy.ops.push_back(op);
        ++i;
    }
    if (policy.ops.empty()) {
        throw ConfigError("policy: 'ops' must be non-empty");
    }
    return policy;
}

Policy load_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("policy: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_policy(ss.str());
}

void save_policy_file(const Policy& policy, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("policy: cannot write " + path);
    out << serialize_policy(policy) << '\n';
}

}  // namespace augopt
