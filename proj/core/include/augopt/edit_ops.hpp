#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "augopt/lexstats.hpp"
#include "augopt/rng.hpp"

namespace augopt {

// Categorical codes are the enum values; keep the order stable, it is the
// encoding used by the optimizer and the serialized documents.
enum class OpType : int {
    kRandomSwap = 0,        // RS
    kRandomDelete = 1,      // RD
    kTfIdfInsert = 2,       // TI
    kTfIdfSubstitute = 3,   // TS
    kWordNetSubstitute = 4, // WS
};
inline constexpr int kNumOpTypes = 5;

std::string op_code(OpType type);
OpType op_from_code(const std::string& code);

struct EditOp {
    OpType type = OpType::kRandomSwap;
    double p = 0.0;       // application probability, [0, 1]
    double lambda = 0.0;  // edit strength, [0, 0.5]
};

struct ApplyTraceEntry {
    int slot;    // policy slot that was applied, -1 if standalone
    bool fired;  // Bernoulli gate outcome
};

struct OpContext {
    const TfIdfTable* tfidf = nullptr;
    const Thesaurus* thesaurus = nullptr;
    std::vector<ApplyTraceEntry>* trace = nullptr;  // optional instrumentation
};

// Edit count for strength lambda on a text of len tokens: half-up rounding
// of lambda * len.
std::size_t edit_count(double lambda, std::size_t len);

// One Bernoulli(p) draw decides whether the transform runs at all; a zero
// edit count leaves the tokens unchanged. Exactly one gate draw is taken
// per call regardless of outcome.
TokenSeq apply_op(const EditOp& op, const TokenSeq& tokens, const OpContext& ctx,
                  Rng& rng, int slot = -1);

// k moves, each swapping a uniformly chosen adjacent pair. Under two
// tokens there is nothing to swap.
TokenSeq random_swap(const TokenSeq& tokens, std::size_t k, Rng& rng);

// Deletes a uniformly chosen k-subset of positions, preserving order.
// k >= len keeps one uniformly chosen token instead of emptying the text.
TokenSeq random_delete(const TokenSeq& tokens, std::size_t k, Rng& rng);

// Scans positions in uniformly shuffled order, replacing tokens that have
// synonyms with a uniformly chosen one, until k replacements are made.
TokenSeq wordnet_substitute(const TokenSeq& tokens, std::size_t k,
                            const Thesaurus& thesaurus, Rng& rng);

// Replaces the k positions with the lowest tf*idf scores (ties broken by
// position). Replacements are drawn from the corpus vocabulary with weight
// corpus_max_score - score(v), never drawing the token being replaced.
TokenSeq tfidf_substitute(const TokenSeq& tokens, std::size_t k,
                          const TfIdfTable& tfidf, Rng& rng);

// Draws k tokens from the top score decile of the keyword pool (weight
// proportional to score) and inserts each at a uniform slot.
TokenSeq tfidf_insert(const TokenSeq& tokens, std::size_t k,
                      const TfIdfTable& tfidf, Rng& rng);

}  // namespace augopt
