#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace augopt {

struct LabeledExample {
    std::string text;
    int label = 0;           // dense id in [0, num_classes)
    std::int64_t id = 0;     // stable record ordinal
    std::int64_t parent_id = -1;  // provenance: source example, -1 = original
    int variant = 0;              // provenance: variant index, 0 = copy/original
};

struct LabeledCorpus {
    std::vector<LabeledExample> examples;
    int num_classes = 0;
    std::vector<std::int64_t> class_counts;      // indexed by dense label
    std::vector<std::string> label_names;        // dense id -> original label

    std::size_t size() const { return examples.size(); }
    void recount();  // recompute class_counts from examples
    const std::string& label_name(int label) const;
};

enum class CorpusFormat { kTsv, kCsv };

// Rows are (label, text). Label strings map to dense ids in order of first
// appearance. TSV rows may carry extra trailing columns (provenance from
// augmented outputs); they are ignored on load.
LabeledCorpus load_corpus(const std::string& path, CorpusFormat format,
                          bool has_header = false);

// Writes (label, text, parent_id, variant) rows.
void save_corpus(const LabeledCorpus& corpus, const std::string& path,
                 CorpusFormat format);

// Disjoint stratified parts with the requested sizes, in order. Class
// allocation is largest-remainder rounding adjusted so every class gets at
// least one example per part. Deterministic under seed.
std::vector<LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                            const std::vector<std::size_t>& sizes,
                                            std::uint64_t seed);

enum class RegimeKind { kLowResource, kClassImbalanced, kFull };

struct RegimeSpec {
    RegimeKind kind = RegimeKind::kLowResource;
    std::size_t train_size = 0;      // low_resource / full
    std::size_t val_size = 0;        // each of the two validation sets
    int minority_class = 0;          // class_imbalanced
    std::size_t minority_count = 0;  // class_imbalanced
    std::size_t majority_count = 0;  // class_imbalanced
    std::uint64_t seed = 0;
};

struct Regime {
    LabeledCorpus train;
    LabeledCorpus val_model;   // surrogate checkpoint selection
    LabeledCorpus val_policy;  // policy scoring only
    LabeledCorpus holdout;     // corpus remainder, untouched by the draw
};

// low_resource: train_size + one stratified draw of 2*val_size split in
// half per class. class_imbalanced: binary corpora only; skewed train,
// both validation sets balanced. full: everything minus the validation
// draws becomes train.
Regime make_regime(const LabeledCorpus& corpus, const RegimeSpec& spec);

// Duplicates minority examples so the minority class reaches
// factor * original count. Originals keep their order; duplicates are
// appended in passes over the originals.
LabeledCorpus oversample_minority(const LabeledCorpus& corpus,
                                  int minority_class, std::size_t factor);

// Label mapping, seed, and per-split class counts as a JSON file.
void save_run_metadata(const std::string& path, const LabeledCorpus& corpus,
                       const Regime& regime, const RegimeSpec& spec);

}  // namespace augopt
