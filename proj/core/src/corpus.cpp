#include "augopt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "augopt/errors.hpp"
#include "augopt/lexstats.hpp"
#include "augopt/rng.hpp"

namespace augopt {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::vector<std::string> split_csv(const std::string& line,
                                   const std::string& where) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                cur.push_back(c);
                ++i;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            ++i;
        } else {
            cur.push_back(c);
            ++i;
        }
    }
    if (quoted) throw DataError("corpus: unterminated quote at " + where);
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Text fields are single-line in both formats.
std::string sanitize_text(std::string s) {
    for (auto& c : s) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

// Largest-remainder allocation of `part_size` across classes proportional
// to corpus counts, then adjusted so every class gets at least one. The
// donor for each bump is the class with the largest surplus over its quota
// among those that can spare an example.
std::vector<std::size_t> allocate_part(std::size_t part_size,
                                       const std::vector<std::int64_t>& counts,
                                       std::int64_t total) {
    const std::size_t k = counts.size();
    std::vector<double> quota(k);
    std::vector<std::size_t> alloc(k);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        quota[c] = static_cast<double>(part_size) *
                   static_cast<double>(counts[c]) / static_cast<double>(total);
        alloc[c] = static_cast<std::size_t>(quota[c]);
        assigned += alloc[c];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t i = 0; assigned < part_size; ++i) {
        ++alloc[order[i % k]];
        ++assigned;
    }
    for (;;) {
        std::size_t needy = k;
        for (std::size_t c = 0; c < k; ++c) {
            if (alloc[c] == 0) {
                needy = c;
                break;
            }
        }
        if (needy == k) break;
        std::size_t donor = k;
        double best = -1e300;
        for (std::size_t c = 0; c < k; ++c) {
            if (alloc[c] < 2) continue;
            double surplus = static_cast<double>(alloc[c]) - quota[c];
            if (surplus > best) {
                best = surplus;
                donor = c;
            }
        }
        if (donor == k) {
            throw DataError("stratified_split: cannot give every class one "
                            "example in a part of size " +
                            std::to_string(part_size));
        }
        --alloc[donor];
        ++alloc[needy];
    }
    return alloc;
}

struct IndexPlan {
    // per part, the chosen example indices (class-major order)
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::size_t> leftover;  // indices never drawn
};

IndexPlan plan_split(const LabeledCorpus& corpus,
                     const std::vector<std::size_t>& sizes,
                     std::uint64_t seed) {
    const int k = corpus.num_classes;
    if (k == 0 || corpus.examples.empty()) {
        throw DataError("stratified_split: empty corpus");
    }
    for (std::size_t s : sizes) {
        if (s < static_cast<std::size_t>(k)) {
            throw DataError("stratified_split: part size " + std::to_string(s) +
                            " below class count " + std::to_string(k));
        }
    }
    std::vector<std::vector<std::size_t>> pools(k);
    for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
        pools[corpus.examples[i].label].push_back(i);
    }
    for (int c = 0; c < k; ++c) {
        Rng rng(derive_seed(seed, {kStreamSplit, static_cast<std::uint64_t>(c)}));
        rng.shuffle(pools[c]);
    }
    std::vector<std::size_t> offset(k, 0);
    IndexPlan plan;
    const std::int64_t total =
        static_cast<std::int64_t>(corpus.examples.size());
    for (std::size_t s : sizes) {
        auto alloc = allocate_part(s, corpus.class_counts, total);
        std::vector<std::size_t> part;
        part.reserve(s);
        for (int c = 0; c < k; ++c) {
            if (offset[c] + alloc[c] > pools[c].size()) {
                throw DataError(
                    "stratified_split: class '" + corpus.label_name(c) +
                    "' exhausted (needs " + std::to_string(offset[c] + alloc[c]) +
                    ", has " + std::to_string(pools[c].size()) + ")");
            }
            for (std::size_t j = 0; j < alloc[c]; ++j) {
                part.push_back(pools[c][offset[c] + j]);
            }
            offset[c] += alloc[c];
        }
        plan.parts.push_back(std::move(part));
    }
    for (int c = 0; c < k; ++c) {
        for (std::size_t j = offset[c]; j < pools[c].size(); ++j) {
            plan.leftover.push_back(pools[c][j]);
        }
    }
    return plan;
}

LabeledCorpus subset(const LabeledCorpus& corpus,
                     const std::vector<std::size_t>& indices) {
    LabeledCorpus out;
    out.num_classes = corpus.num_classes;
    out.label_names = corpus.label_names;
    out.examples.reserve(indices.size());
    for (std::size_t i : indices) out.examples.push_back(corpus.examples[i]);
    out.recount();
    return out;
}

json split_summary(const LabeledCorpus& c) {
    json j;
    j["size"] = c.size();
    j["class_counts"] = c.class_counts;
    return j;
}

}  // namespace

void LabeledCorpus::recount() {
    class_counts.assign(std::max(num_classes, 0), 0);
    for (const auto& ex : examples) {
        if (ex.label < 0 || ex.label >= num_classes) {
            throw ConfigError("corpus: label " + std::to_string(ex.label) +
                              " outside [0, " + std::to_string(num_classes) +
                              ")");
        }
        ++class_counts[ex.label];
    }
}

const std::string& LabeledCorpus::label_name(int label) const {
    static const std::string kUnknown = "?";
    if (label >= 0 && static_cast<std::size_t>(label) < label_names.size()) {
        return label_names[label];
    }
    return kUnknown;
}

LabeledCorpus load_corpus(const std::string& path, CorpusFormat format,
                          bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("corpus: cannot open " + path);
    LabeledCorpus corpus;
    std::unordered_map<std::string, int> label_ids;
    std::string line;
    std::size_t line_no = 0;
    std::int64_t next_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (has_header && line_no == 1) continue;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        if (!is_valid_utf8(line)) {
            throw DataError("corpus: invalid UTF-8 at " + where);
        }
        auto fields = format == CorpusFormat::kTsv ? split_tabs(line)
                                                   : split_csv(line, where);
        if (fields.size() < 2) {
            throw DataError("corpus: expected label and text columns at " +
                            where);
        }
        if (fields[0].empty()) {
            throw DataError("corpus: empty label at " + where);
        }
        auto [it, inserted] = label_ids.try_emplace(
            fields[0], static_cast<int>(label_ids.size()));
        if (inserted) corpus.label_names.push_back(fields[0]);
        LabeledExample ex;
        ex.text = fields[1];
        ex.label = it->second;
        ex.id = next_id++;
        corpus.examples.push_back(std::move(ex));
    }
    if (corpus.examples.empty()) throw DataError("corpus: no rows in " + path);
    corpus.num_classes = static_cast<int>(label_ids.size());
    corpus.recount();
    return corpus;
}

void save_corpus(const LabeledCorpus& corpus, const std::string& path,
                 CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("corpus: cannot write " + path);
    for (const auto& ex : corpus.examples) {
        const std::string label = corpus.label_names.empty()
                                      ? std::to_string(ex.label)
                                      : corpus.label_name(ex.label);
        const std::string text = sanitize_text(ex.text);
        if (format == CorpusFormat::kTsv) {
            out << label << '\t' << text << '\t' << ex.parent_id << '\t'
                << ex.variant << '\n';
        } else {
            out << csv_escape(label) << ',' << csv_escape(text) << ','
                << ex.parent_id << ',' << ex.variant << '\n';
        }
    }
}

std::vector<LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                            const std::vector<std::size_t>& sizes,
                                            std::uint64_t seed) {
    auto plan = plan_split(corpus, sizes, seed);
    std::vector<LabeledCorpus> out;
    out.reserve(sizes.size());
    for (const auto& part : plan.parts) out.push_back(subset(corpus, part));
    return out;
}

Regime make_regime(const LabeledCorpus& corpus, const RegimeSpec& spec) {
    Regime regime;
    switch (spec.kind) {
        case RegimeKind::kLowResource:
        case RegimeKind::kFull: {
            if (spec.val_size == 0) {
                throw DataError("make_regime: val_size must be positive");
            }
            std::vector<std::size_t> sizes;
            const bool low = spec.kind == RegimeKind::kLowResource;
            if (low) {
                if (spec.train_size == 0) {
                    throw DataError("make_regime: train_size must be positive");
                }
                sizes = {spec.train_size, 2 * spec.val_size};
            } else {
                sizes = {2 * spec.val_size};
            }
            auto plan = plan_split(corpus, sizes, spec.seed);
            const auto& val_draw = plan.parts[low ? 1 : 0];
            // The draw is class-major; split each class run in half,
            // alternating which half takes the odd example.
            std::vector<std::size_t> half1, half2;
            int flip = 0;
            std::size_t i = 0;
            while (i < val_draw.size()) {
                std::size_t j = i;
                int label = corpus.examples[val_draw[i]].label;
                while (j < val_draw.size() &&
                       corpus.examples[val_draw[j]].label == label) {
                    ++j;
                }
                std::size_t n = j - i;
                std::size_t h1 = n / 2;
                if (n % 2) {
                    h1 += flip;
                    flip ^= 1;
                }
                for (std::size_t t = i; t < i + h1; ++t) half1.push_back(val_draw[t]);
                for (std::size_t t = i + h1; t < j; ++t) half2.push_back(val_draw[t]);
                i = j;
            }
            regime.val_model = subset(corpus, half1);
            regime.val_policy = subset(corpus, half2);
            if (low) {
                regime.train = subset(corpus, plan.parts[0]);
                regime.holdout = subset(corpus, plan.leftover);
            } else {
                regime.train = subset(corpus, plan.leftover);
                regime.holdout = LabeledCorpus{};
                regime.holdout.num_classes = corpus.num_classes;
                regime.holdout.label_names = corpus.label_names;
                regime.holdout.recount();
            }
            return regime;
        }
        case RegimeKind::kClassImbalanced: {
            if (corpus.num_classes != 2) {
                throw ConfigError(
                    "make_regime: class_imbalanced needs a binary corpus, got " +
                    std::to_string(corpus.num_classes) + " classes");
            }
            if (spec.minority_class < 0 || spec.minority_class > 1) {
                throw ConfigError("make_regime: minority_class out of range");
            }
            if (spec.minority_count == 0) {
                throw DataError("make_regime: minority_count must be positive");
            }
            if (spec.minority_count >= spec.majority_count) {
                throw DataError(
                    "make_regime: minority_count must be below majority_count");
            }
            if (spec.val_size % 2 != 0) {
                throw DataError(
                    "make_regime: balanced validation needs even val_size");
            }
            const int minority = spec.minority_class;
            const int majority = 1 - minority;
            std::vector<std::vector<std::size_t>> pools(2);
            for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
                pools[corpus.examples[i].label].push_back(i);
            }
            for (int c = 0; c < 2; ++c) {
                Rng rng(derive_seed(spec.seed,
                                    {kStreamSplit, static_cast<std::uint64_t>(c)}));
                rng.shuffle(pools[c]);
            }
            const std::size_t per_class_val = spec.val_size / 2;
            std::vector<std::size_t> need(2);
            need[minority] = spec.minority_count + 2 * per_class_val;
            need[majority] = spec.majority_count + 2 * per_class_val;
            for (int c = 0; c < 2; ++c) {
                if (need[c] > pools[c].size()) {
                    throw DataError("make_regime: class '" +
                                    corpus.label_name(c) + "' needs " +
                                    std::to_string(need[c]) + " examples, has " +
                                    std::to_string(pools[c].size()));
                }
            }
            std::vector<std::size_t> train_idx, vm_idx, vp_idx, rest_idx;
            std::vector<std::size_t> offset(2, 0);
            std::vector<std::size_t> take(2);
            take[minority] = spec.minority_count;
            take[majority] = spec.majority_count;
            for (int c = 0; c < 2; ++c) {
                for (std::size_t j = 0; j < take[c]; ++j) {
                    train_idx.push_back(pools[c][offset[c]++]);
                }
            }
            for (int c = 0; c < 2; ++c) {
                for (std::size_t j = 0; j < per_class_val; ++j) {
                    vm_idx.push_back(pools[c][offset[c]++]);
                }
            }
            for (int c = 0; c < 2; ++c) {
                for (std::size_t j = 0; j < per_class_val; ++j) {
                    vp_idx.push_back(pools[c][offset[c]++]);
                }
            }
            for (int c = 0; c < 2; ++c) {
                for (std::size_t j = offset[c]; j < pools[c].size(); ++j) {
                    rest_idx.push_back(pools[c][j]);
                }
            }
            regime.train = subset(corpus, train_idx);
            regime.val_model = subset(corpus, vm_idx);
            regime.val_policy = subset(corpus, vp_idx);
            regime.holdout = subset(corpus, rest_idx);
            return regime;
        }
    }
    throw ConfigError("make_regime: unknown regime kind");
}

LabeledCorpus oversample_minority(const LabeledCorpus& corpus,
                                  int minority_class, std::size_t factor) {
    if (minority_class < 0 || minority_class >= corpus.num_classes) {
        throw ConfigError("oversample_minority: class out of range");
    }
    if (factor == 0) throw ConfigError("oversample_minority: factor must be >= 1");
    LabeledCorpus out = corpus;
    std::int64_t next_id = 0;
    for (const auto& ex : corpus.examples) next_id = std::max(next_id, ex.id + 1);
    for (std::size_t pass = 1; pass < factor; ++pass) {
        for (const auto& ex : corpus.examples) {
            if (ex.label != minority_class) continue;
            LabeledExample dup = ex;
            dup.id = next_id++;
            dup.parent_id = ex.id;
            dup.variant = 0;
            out.examples.push_back(std::move(dup));
        }
    }
    out.recount();
    return out;
}

void save_run_metadata(const std::string& path, const LabeledCorpus& corpus,
                       const Regime& regime, const RegimeSpec& spec) {
    json j;
    json mapping;
    for (std::size_t i = 0; i < corpus.label_names.size(); ++i) {
        mapping[corpus.label_names[i]] = i;
    }
    j["label_mapping"] = mapping;
    j["seed"] = spec.seed;
    switch (spec.kind) {
        case RegimeKind::kLowResource: j["regime"] = "low_resource"; break;
        case RegimeKind::kClassImbalanced: j["regime"] = "class_imbalanced"; break;
        case RegimeKind::kFull: j["regime"] = "full"; break;
    }
    j["corpus"] = split_summary(corpus);
    j["train"] = split_summary(regime.train);
    j["val_model"] = split_summary(regime.val_model);
    j["val_policy"] = split_summary(regime.val_policy);
    j["holdout"] = split_summary(regime.holdout);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("metadata: cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace augopt
