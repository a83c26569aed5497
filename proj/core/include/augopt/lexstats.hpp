#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace augopt {

// Ordered lowercase word sequence; every element is non-empty with no
// leading or trailing punctuation.
using TokenSeq = std::vector<std::string>;

// Lowercase, split on whitespace (ASCII plus the common Unicode space
// codepoints), strip leading/trailing ASCII punctuation, drop empties.
// Interior punctuation survives: "don't" stays one token.
TokenSeq tokenize(const std::string& text);

// Join with single spaces. tokenize(detokenize(t)) == t for any t that
// tokenize produced.
std::string detokenize(const TokenSeq& tokens);

// Corpus-level inverse document frequencies plus a keyword pool ranked by
// normalized idf*frequency score. Built from the training split only.
struct TfIdfTable {
    std::unordered_map<std::string, double> idf;  // absent token => 0
    // Descending by score, ties ascending by token. Scores normalized so
    // the maximum is corpus_max_score.
    std::vector<std::pair<std::string, double>> keyword_pool;
    std::unordered_map<std::string, std::size_t> pool_index;
    double corpus_max_score = 0.0;  // 1.0 after normalization

    double idf_of(const std::string& token) const {
        auto it = idf.find(token);
        return it == idf.end() ? 0.0 : it->second;
    }
    double score_of(const std::string& token) const {
        auto it = pool_index.find(token);
        return it == pool_index.end() ? 0.0 : keyword_pool[it->second].second;
    }
    bool contains(const std::string& token) const {
        return pool_index.find(token) != pool_index.end();
    }
};

// idf(v) = ln((1 + D) / (1 + df(v))) + 1 over the given documents.
TfIdfTable build_tfidf(const std::vector<TokenSeq>& docs);

// Normalization step factored out so its scale invariance is testable:
// multiplying every frequency by a constant leaves the output unchanged.
std::vector<std::pair<std::string, double>> make_keyword_pool(
    const std::unordered_map<std::string, double>& idf,
    const std::unordered_map<std::string, std::int64_t>& freq);

// token -> synonym list; loaded from TSV "token<TAB>syn1,syn2,...".
// Keys and synonyms are case-folded; self-synonyms are dropped; entries
// whose synonym list ends up empty are dropped; duplicate keys keep the
// last occurrence and record a warning.
struct Thesaurus {
    std::unordered_map<std::string, std::vector<std::string>> entries;
    std::vector<std::string> warnings;

    // empty list if absent
    const std::vector<std::string>& synonyms(const std::string& token) const;
    bool has(const std::string& token) const {
        return entries.find(token) != entries.end();
    }
    std::size_t size() const { return entries.size(); }
};

Thesaurus load_thesaurus(const std::string& path);

// (token, idf, normalized_score) rows, tab-separated, sorted like the pool.
void save_tfidf_tsv(const TfIdfTable& table, const std::string& path);

// True iff the byte string is well-formed UTF-8.
bool is_valid_utf8(const std::string& bytes);

}  // namespace augopt
