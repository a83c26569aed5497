#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "augopt/corpus.hpp"
#include "augopt/lexstats.hpp"
#include "augopt/surrogate.hpp"

namespace augopt {

// Distinct bigrams over total bigram count, bigrams taken within each
// text. No bigrams at all gives 0.
double dist2(const std::vector<TokenSeq>& texts);

// Sparse sentence embedding; pluggable so semantic scoring is not tied to
// one representation.
class SentenceEmbedder {
public:
    virtual ~SentenceEmbedder() = default;
    virtual std::unordered_map<std::string, double> embed(
        const TokenSeq& tokens) const = 0;
};

// Default: bag of words weighted by in-sentence term frequency times
// corpus idf.
class TfIdfEmbedder : public SentenceEmbedder {
public:
    explicit TfIdfEmbedder(const TfIdfTable& table) : table_(&table) {}
    std::unordered_map<std::string, double> embed(
        const TokenSeq& tokens) const override;

private:
    const TfIdfTable* table_;
};

// Cosine similarity of the embeddings; 0 whenever either side embeds to
// the zero vector.
double sp_score(const TokenSeq& a, const TokenSeq& b,
                const SentenceEmbedder& embedder);

// Mean sp over synthetic variants paired with their parent text. Plain
// duplicates (variant 0) are not counted.
double mean_semantic_preservation(const LabeledCorpus& augmented,
                                  const SentenceEmbedder& embedder);

struct ModelEval {
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;  // classes without examples -> 0
};

ModelEval evaluate_model(const SurrogateModel& model, const Dataset& test);

struct MetricReport {
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
    double dist2_all = 0.0;        // originals + synthetic
    double dist2_augmented = 0.0;  // synthetic only
    double mean_sp = 0.0;
};

// One key=value pair per line; vector-valued fields are indexed keys.
std::string to_kv_text(const MetricReport& report);
void save_metric_report(const MetricReport& report, const std::string& path);

}  // namespace augopt
