#include "augopt/edit_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "augopt/errors.hpp"

namespace augopt {

std::string op_code(OpType type) {
    switch (type) {
        case OpType::kRandomSwap: return "RS";
        case OpType::kRandomDelete: return "RD";
        case OpType::kTfIdfInsert: return "TI";
        case OpType::kTfIdfSubstitute: return "TS";
        case OpType::kWordNetSubstitute: return "WS";
    }
    throw ConfigError("op_code: invalid op type");
}

OpType op_from_code(const std::string& code) {
    if (code == "RS") return OpType::kRandomSwap;
    if (code == "RD") return OpType::kRandomDelete;
    if (code == "TI") return OpType::kTfIdfInsert;
    if (code == "TS") return OpType::kTfIdfSubstitute;
    if (code == "WS") return OpType::kWordNetSubstitute;
    throw ConfigError("unknown op type '" + code + "'");
}

std::size_t edit_count(double lambda, std::size_t len) {
    return static_cast<std::size_t>(
        std::floor(lambda * static_cast<double>(len) + 0.5));
}

TokenSeq random_swap(const TokenSeq& tokens, std::size_t k, Rng& rng) {
    TokenSeq out = tokens;
    if (out.size() < 2) return out;
    for (std::size_t m = 0; m < k; ++m) {
        std::size_t i = rng.uniform_index(out.size() - 1);
        std::swap(out[i], out[i + 1]);
    }
    return out;
}

TokenSeq random_delete(const TokenSeq& tokens, std::size_t k, Rng& rng) {
    const std::size_t n = tokens.size();
    if (k == 0 || n == 0) return tokens;
    if (k >= n) {
        return {tokens[rng.uniform_index(n)]};
    }
    // Floyd's uniform k-subset
    std::unordered_set<std::size_t> doomed;
    for (std::size_t j = n - k; j < n; ++j) {
        std::size_t t = rng.uniform_index(j + 1);
        if (!doomed.insert(t).second) doomed.insert(j);
    }
    TokenSeq out;
    out.reserve(n - k);
    for (std::size_t i = 0; i < n; ++i) {
        if (!doomed.count(i)) out.push_back(tokens[i]);
    }
    return out;
}

TokenSeq wordnet_substitute(const TokenSeq& tokens, std::size_t k,
                            const Thesaurus& thesaurus, Rng& rng) {
    TokenSeq out = tokens;
    if (k == 0 || out.empty()) return out;
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::size_t done = 0;
    for (std::size_t pos : order) {
        if (done == k) break;
        const auto& syns = thesaurus.synonyms(tokens[pos]);
        if (syns.empty()) continue;
        out[pos] = syns[rng.uniform_index(syns.size())];
        ++done;
    }
    return out;
}

TokenSeq tfidf_substitute(const TokenSeq& tokens, std::size_t k,
                          const TfIdfTable& tfidf, Rng& rng) {
    TokenSeq out = tokens;
    const std::size_t n = out.size();
    if (k == 0 || n == 0) return out;
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& t : tokens) ++tf[t];
    std::vector<std::pair<double, std::size_t>> ranked(n);
    for (std::size_t i = 0; i < n; ++i) {
        ranked[i] = {static_cast<double>(tf[tokens[i]]) * tfidf.idf_of(tokens[i]),
                     i};
    }
    std::sort(ranked.begin(), ranked.end());
    const auto& pool = tfidf.keyword_pool;
    std::vector<double> weights(pool.size());
    for (std::size_t v = 0; v < pool.size(); ++v) {
        weights[v] = std::max(0.0, tfidf.corpus_max_score - pool[v].second);
    }
    const std::size_t edits = std::min(k, n);
    for (std::size_t e = 0; e < edits; ++e) {
        const std::size_t pos = ranked[e].second;
        auto self = tfidf.pool_index.find(tokens[pos]);
        double saved = 0.0;
        if (self != tfidf.pool_index.end()) {
            saved = weights[self->second];
            weights[self->second] = 0.0;
        }
        double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (total > 0.0) {
            out[pos] = pool[rng.weighted_index(weights)].first;
        } else {
            // All remaining mass sits on the excluded token; fall back to a
            // uniform pick over the rest of the vocabulary if any.
            std::vector<std::size_t> others;
            for (std::size_t v = 0; v < pool.size(); ++v) {
                if (self == tfidf.pool_index.end() || v != self->second) {
                    others.push_back(v);
                }
            }
            if (!others.empty()) {
                out[pos] = pool[others[rng.uniform_index(others.size())]].first;
            }
        }
        if (self != tfidf.pool_index.end()) weights[self->second] = saved;
    }
    return out;
}

TokenSeq tfidf_insert(const TokenSeq& tokens, std::size_t k,
                      const TfIdfTable& tfidf, Rng& rng) {
    TokenSeq out = tokens;
    const auto& pool = tfidf.keyword_pool;
    if (k == 0 || pool.empty()) return out;
    const std::size_t decile = std::max<std::size_t>(1, (pool.size() + 9) / 10);
    std::vector<double> weights(decile);
    double total = 0.0;
    for (std::size_t v = 0; v < decile; ++v) {
        weights[v] = std::max(0.0, pool[v].second);
        total += weights[v];
    }
    for (std::size_t e = 0; e < k; ++e) {
        std::size_t pick = total > 0.0 ? rng.weighted_index(weights)
                                       : rng.uniform_index(decile);
        std::size_t slot = rng.uniform_index(out.size() + 1);
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(slot),
                   pool[pick].first);
    }
    return out;
}

TokenSeq apply_op(const EditOp& op, const TokenSeq& tokens, const OpContext& ctx,
                  Rng& rng, int slot) {
    if (!(op.p >= 0.0 && op.p <= 1.0)) {
        throw ConfigError("apply_op: p = " + std::to_string(op.p) +
                          " outside [0, 1]");
    }
    if (!(op.lambda >= 0.0 && op.lambda <= 0.5)) {
        throw ConfigError("apply_op: lambda = " + std::to_string(op.lambda) +
                          " outside [0, 0.5]");
    }
    const bool fired = rng.bernoulli(op.p);
    if (ctx.trace) ctx.trace->push_back({slot, fired});
    if (!fired) return tokens;
    const std::size_t k = edit_count(op.lambda, tokens.size());
    if (k == 0) return tokens;
    switch (op.type) {
        case OpType::kRandomSwap:
            return random_swap(tokens, k, rng);
        case OpType::kRandomDelete:
            return random_delete(tokens, k, rng);
        case OpType::kTfIdfInsert:
            if (!ctx.tfidf) throw ConfigError("apply_op: TI needs tf-idf stats");
            return tfidf_insert(tokens, k, *ctx.tfidf, rng);
        case OpType::kTfIdfSubstitute:
            if (!ctx.tfidf) throw ConfigError("apply_op: TS needs tf-idf stats");
            return tfidf_substitute(tokens, k, *ctx.tfidf, rng);
        case OpType::kWordNetSubstitute:
            if (!ctx.thesaurus) {
                throw ConfigError("apply_op: WS needs a thesaurus");
            }
            return wordnet_substitute(tokens, k, *ctx.thesaurus, rng);
    }
    throw ConfigError("apply_op: invalid op type");
}

}  // namespace augopt
