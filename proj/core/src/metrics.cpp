#include "augopt/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "augopt/errors.hpp"

namespace augopt {

double dist2(const std::vector<TokenSeq>& texts) {
    std::unordered_set<std::string> distinct;
    std::size_t total = 0;
    for (const auto& tokens : texts) {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            std::string bigram = tokens[i];
            bigram.push_back('\x1f');
            bigram += tokens[i + 1];
            distinct.insert(std::move(bigram));
            ++total;
        }
    }
    if (total == 0) return 0.0;
    return static_cast<double>(distinct.size()) / static_cast<double>(total);
}

std::unordered_map<std::string, double> TfIdfEmbedder::embed(
    const TokenSeq& tokens) const {
    std::unordered_map<std::string, double> vec;
    for (const auto& tok : tokens) vec[tok] += 1.0;
    for (auto& [tok, tf] : vec) tf *= table_->idf_of(tok);
    return vec;
}

double sp_score(const TokenSeq& a, const TokenSeq& b,
                const SentenceEmbedder& embedder) {
    auto va = embedder.embed(a);
    auto vb = embedder.embed(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [tok, w] : va) {
        na += w * w;
        auto it = vb.find(tok);
        if (it != vb.end()) dot += w * it->second;
    }
    for (const auto& [tok, w] : vb) nb += w * w;
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double mean_semantic_preservation(const LabeledCorpus& augmented,
                                  const SentenceEmbedder& embedder) {
    std::unordered_map<std::int64_t, const LabeledExample*> by_id;
    for (const auto& ex : augmented.examples) by_id[ex.id] = &ex;
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& ex : augmented.examples) {
        if (ex.parent_id < 0 || ex.variant < 1) continue;
        auto it = by_id.find(ex.parent_id);
        if (it == by_id.end()) continue;
        total += sp_score(tokenize(it->second->text), tokenize(ex.text), embedder);
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

ModelEval evaluate_model(const SurrogateModel& model, const Dataset& test) {
    ModelEval eval;
    eval.per_class_accuracy.assign(
        static_cast<std::size_t>(test.num_classes), 0.0);
    if (test.x.empty()) return eval;
    std::vector<std::size_t> per_class_total(
        static_cast<std::size_t>(test.num_classes), 0);
    std::vector<std::size_t> per_class_hit(
        static_cast<std::size_t>(test.num_classes), 0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.x.size(); ++i) {
        const auto y = static_cast<std::size_t>(test.y[i]);
        ++per_class_total[y];
        if (model.predict(test.x[i]) == test.y[i]) {
            ++correct;
            ++per_class_hit[y];
        }
    }
    eval.accuracy =
        static_cast<double>(correct) / static_cast<double>(test.x.size());
    for (std::size_t c = 0; c < per_class_total.size(); ++c) {
        eval.per_class_accuracy[c] =
            per_class_total[c] == 0
                ? 0.0
                : static_cast<double>(per_class_hit[c]) /
                      static_cast<double>(per_class_total[c]);
    }
    return eval;
}

std::string to_kv_text(const MetricReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "accuracy=" << report.accuracy << '\n';
    for (std::size_t c = 0; c < report.per_class_accuracy.size(); ++c) {
        out << "per_class_accuracy_" << c << '='
            << report.per_class_accuracy[c] << '\n';
    }
    out << "dist2_all=" << report.dist2_all << '\n';
    out << "dist2_augmented=" << report.dist2_augmented << '\n';
    out << "mean_sp=" << report.mean_sp << '\n';
    return out.str();
}

void save_metric_report(const MetricReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("metrics: cannot write " + path);
    out << to_kv_text(report);
}

}  // namespace augopt
