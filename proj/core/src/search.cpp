#include "augopt/search.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

using json = nlohmann::json;

constexpr int kLogFormat = 1;
constexpr const char* kToolVersion = "0.1.0";

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string regime_kind_name(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::kLowResource: return "low_resource";
        case RegimeKind::kClassImbalanced: return "class_imbalanced";
        case RegimeKind::kFull: return "full";
    }
    throw ConfigError("config: unknown regime kind");
}

RegimeKind regime_kind_from_name(const std::string& name) {
    if (name == "low_resource") return RegimeKind::kLowResource;
    if (name == "class_imbalanced") return RegimeKind::kClassImbalanced;
    if (name == "full") return RegimeKind::kFull;
    throw ConfigError("config: regime.kind '" + name + "' is not one of "
                      "low_resource, class_imbalanced, full");
}

json config_json(const SearchConfig& cfg) {
    return json{
        {"iterations", cfg.iterations},
        {"gamma", cfg.tpe.gamma},
        {"n_startup", cfg.tpe.n_startup},
        {"n_candidates", cfg.tpe.n_candidates},
        {"policy_size", cfg.policy_size},
        {"aug", {{"n_select", cfg.aug.n_select}, {"n_aug", cfg.aug.n_aug}}},
        {"surrogate",
         {{"feature_dim", cfg.surrogate.feature_dim},
          {"learning_rate", cfg.surrogate.learning_rate},
          {"epochs", cfg.surrogate.epochs},
          {"l2_reg", cfg.surrogate.l2_reg}}},
        {"regime",
         {{"kind", regime_kind_name(cfg.regime.kind)},
          {"train_size", cfg.regime.train_size},
          {"val_size", cfg.regime.val_size},
          {"minority_class", cfg.regime.minority_class},
          {"minority_count", cfg.regime.minority_count},
          {"majority_count", cfg.regime.majority_count},
          {"seed", cfg.regime.seed}}},
        {"master_seed", cfg.master_seed},
        {"parallel_repeats", cfg.parallel_repeats},
    };
}

template <typename T>
void take(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& scope) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ConfigError("config: unknown key '" + scope + key + "'");
        }
    }
}

// Paths whose values differ between two config documents.
void diff_json(const json& a, const json& b, const std::string& prefix,
               std::vector<std::string>& out) {
    if (a.is_object() && b.is_object()) {
        for (const auto& [key, value] : a.items()) {
            std::string path = prefix.empty() ? key : prefix + "." + key;
            if (!b.contains(key)) {
                out.push_back(path);
            } else {
                diff_json(value, b.at(key), path, out);
            }
        }
        for (const auto& [key, value] : b.items()) {
            if (!a.contains(key)) {
                out.push_back(prefix.empty() ? key : prefix + "." + key);
            }
        }
        return;
    }
    if (a != b) out.push_back(prefix.empty() ? "(root)" : prefix);
}

json record_json(const TrialRecord& rec) {
    json j{
        {"type", "trial"},
        {"index", rec.trial.trial_index},
        {"seed", rec.trial.seed},
        {"policy", json::parse(serialize_policy(rec.trial.policy))},
        {"loss", rec.trial.loss},
        {"val_accuracy", rec.result.val_accuracy},
        {"train_loss_final", rec.result.train_loss_final},
        {"best_epoch", rec.result.best_epoch},
        {"wall_time_ms", rec.result.wall_time_ms},
        {"failed", rec.failed},
        {"ts", rec.timestamp},
    };
    if (rec.failed) j["error"] = rec.error;
    return j;
}

TrialRecord record_from_json(const json& j) {
    TrialRecord rec;
    rec.trial.trial_index = j.at("index").get<int>();
    rec.trial.seed = j.at("seed").get<std::uint64_t>();
    rec.trial.policy = parse_policy(j.at("policy").dump());
    rec.trial.loss = j.at("loss").get<double>();
    rec.result.loss_j = rec.trial.loss;
    rec.result.val_accuracy = j.at("val_accuracy").get<double>();
    rec.result.train_loss_final = j.at("train_loss_final").get<double>();
    rec.result.best_epoch = j.at("best_epoch").get<int>();
    rec.result.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
    rec.failed = j.at("failed").get<bool>();
    if (j.contains("error")) rec.error = j.at("error").get<std::string>();
    rec.timestamp = j.value("ts", "");
    return rec;
}

struct LoopMode {
    bool random = false;
};

SearchResult run_loop(const SearchConfig& cfg, const ObjectiveFn& fn,
                      const std::string& log_path, LoopMode mode,
                      std::vector<TrialRecord> existing, bool log_has_header) {
    cfg.validate();
    ParamSpace space = ParamSpace::for_policy(cfg.policy_size);
    TpeState state(space, cfg.tpe);
    SearchResult result;
    result.best.loss = 2.0;  // any real trial beats this
    result.best.trial_index = -1;
    auto absorb = [&](const TrialRecord& rec) {
        state.observe(rec.trial);
        if (rec.trial.loss < result.best.loss) result.best = rec.trial;
        result.records.push_back(rec);
    };
    for (const auto& rec : existing) absorb(rec);

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path, std::ios::binary | std::ios::app);
        if (!log) throw DataError("trial log: cannot open " + log_path);
        if (!log_has_header) {
            json header{{"type", "header"},
                        {"format", kLogFormat},
                        {"mode", mode.random ? "random" : "tpe"},
                        {"cfg_hash", search_config_hash(cfg)},
                        {"config", config_json(cfg)},
                        {"tool_version", kToolVersion}};
            log << header.dump() << '\n';
            log.flush();
        }
    }
    for (int t = static_cast<int>(existing.size()); t < cfg.iterations; ++t) {
        Rng suggest_rng(derive_seed(
            cfg.master_seed, {kStreamSuggest, static_cast<std::uint64_t>(t)}));
        Policy policy = mode.random
                            ? space.decode(space.sample_uniform(suggest_rng))
                            : state.suggest(suggest_rng);
        TrialRecord rec;
        rec.trial.policy = policy;
        rec.trial.trial_index = t;
        rec.trial.seed = derive_seed(
            cfg.master_seed, {kStreamObjective, static_cast<std::uint64_t>(t)});
        try {
            rec.result = fn(policy, rec.trial.seed);
            rec.trial.loss = rec.result.loss_j;
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
            rec.result = ObjectiveResult{};
            rec.result.loss_j = 1.0;
            rec.trial.loss = 1.0;
        }
        rec.timestamp = now_iso8601();
        if (log.is_open()) {
            log << record_json(rec).dump() << '\n';
            log.flush();  // a crash loses at most the in-flight trial
        }
        absorb(rec);
    }
    return result;
}

}  // namespace

void SearchConfig::validate() const {
    if (iterations < 1) throw ConfigError("config: iterations must be >= 1");
    if (policy_size < 1) throw ConfigError("config: policy_size must be >= 1");
    if (!(tpe.gamma > 0.0 && tpe.gamma < 1.0)) {
        throw ConfigError("config: gamma must lie in (0, 1)");
    }
    if (tpe.n_startup < 1) throw ConfigError("config: n_startup must be >= 1");
    if (tpe.n_candidates < 1) {
        throw ConfigError("config: n_candidates must be >= 1");
    }
    if (aug.n_select < 1 || aug.n_select > policy_size) {
        throw ConfigError("config: aug.n_select must lie in [1, policy_size]");
    }
    if (aug.n_aug < 0) throw ConfigError("config: aug.n_aug must be >= 0");
    if (surrogate.epochs < 1) {
        throw ConfigError("config: surrogate.epochs must be >= 1");
    }
    if (surrogate.feature_dim == 0 ||
        (surrogate.feature_dim & (surrogate.feature_dim - 1)) != 0) {
        throw ConfigError("config: surrogate.feature_dim must be a power of two");
    }
    if (!(surrogate.learning_rate > 0.0)) {
        throw ConfigError("config: surrogate.learning_rate must be positive");
    }
    if (surrogate.l2_reg < 0.0) {
        throw ConfigError("config: surrogate.l2_reg must be >= 0");
    }
    if (parallel_repeats < 1) {
        throw ConfigError("config: parallel_repeats must be >= 1");
    }
}

std::string search_config_to_json(const SearchConfig& cfg) {
    return config_json(cfg).dump(2);
}

SearchConfig search_config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: document must be an object");
    reject_unknown(doc,
                   {"iterations", "gamma", "n_startup", "n_candidates",
                    "policy_size", "aug", "surrogate", "regime", "master_seed",
                    "parallel_repeats"},
                   "");
    SearchConfig cfg;
    try {
        take(doc, "iterations", cfg.iterations);
        take(doc, "gamma", cfg.tpe.gamma);
        take(doc, "n_startup", cfg.tpe.n_startup);
        take(doc, "n_candidates", cfg.tpe.n_candidates);
        take(doc, "policy_size", cfg.policy_size);
        take(doc, "master_seed", cfg.master_seed);
        take(doc, "parallel_repeats", cfg.parallel_repeats);
        if (doc.contains("aug")) {
            const json& aug = doc.at("aug");
            reject_unknown(aug, {"n_select", "n_aug"}, "aug.");
            take(aug, "n_select", cfg.aug.n_select);
            take(aug, "n_aug", cfg.aug.n_aug);
        }
        if (doc.contains("surrogate")) {
            const json& sur = doc.at("surrogate");
            reject_unknown(sur, {"feature_dim", "learning_rate", "epochs", "l2_reg"},
                           "surrogate.");
            take(sur, "feature_dim", cfg.surrogate.feature_dim);
            take(sur, "learning_rate", cfg.surrogate.learning_rate);
            take(sur, "epochs", cfg.surrogate.epochs);
            take(sur, "l2_reg", cfg.surrogate.l2_reg);
        }
        if (doc.contains("regime")) {
            const json& reg = doc.at("regime");
            reject_unknown(reg,
                           {"kind", "train_size", "val_size", "minority_class",
                            "minority_count", "majority_count", "seed"},
                           "regime.");
            if (reg.contains("kind")) {
                cfg.regime.kind =
                    regime_kind_from_name(reg.at("kind").get<std::string>());
            }
            take(reg, "train_size", cfg.regime.train_size);
            take(reg, "val_size", cfg.regime.val_size);
            take(reg, "minority_class", cfg.regime.minority_class);
            take(reg, "minority_count", cfg.regime.minority_count);
            take(reg, "majority_count", cfg.regime.majority_count);
            take(reg, "seed", cfg.regime.seed);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string search_config_hash(const SearchConfig& cfg) {
    std::uint64_t h = fnv1a64(config_json(cfg).dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

TrialLog load_trial_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("trial log: cannot open " + path);
    TrialLog out;
    std::string line;
    std::uint64_t offset = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::uint64_t line_start = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            if (in.peek() == std::ifstream::traits_type::eof()) {
                throw TruncatedRecordError(
                    "trial log: truncated record at byte offset " +
                        std::to_string(line_start) + " in " + path,
                    line_start);
            }
            throw DataError("trial log: corrupt record at " + path + ":" +
                            std::to_string(line_no));
        }
        const std::string type = j.value("type", "");
        if (type == "header") {
            if (saw_header) {
                throw DataError("trial log: duplicate header in " + path);
            }
            saw_header = true;
            out.cfg_hash = j.value("cfg_hash", "");
            out.mode = j.value("mode", "tpe");
            if (j.contains("config")) out.config_json = j["config"].dump();
        } else if (type == "trial") {
            try {
                TrialRecord rec = record_from_json(j);
                if (rec.trial.trial_index !=
                    static_cast<int>(out.records.size())) {
                    throw DataError("trial log: record " +
                                    std::to_string(out.records.size()) +
                                    " has index " +
                                    std::to_string(rec.trial.trial_index));
                }
                out.records.push_back(std::move(rec));
            } catch (const json::exception&) {
                if (in.peek() == std::ifstream::traits_type::eof()) {
                    throw TruncatedRecordError(
                        "trial log: truncated record at byte offset " +
                            std::to_string(line_start) + " in " + path,
                        line_start);
                }
                throw DataError("trial log: corrupt record at " + path + ":" +
                                std::to_string(line_no));
            }
        } else {
            throw DataError("trial log: unknown record type at " + path + ":" +
                            std::to_string(line_no));
        }
    }
    if (!saw_header) throw DataError("trial log: missing header in " + path);
    return out;
}

std::string canonicalize_trial_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("trial log: cannot open " + path);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;  // unparseable tail is not canonical
        j.erase("ts");
        j.erase("wall_time_ms");
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("digest: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

SearchResult run_search(const SearchConfig& cfg, const ObjectiveFn& fn,
                        const std::string& log_path) {
    return run_loop(cfg, fn, log_path, LoopMode{false}, {}, false);
}

SearchResult run_random_baseline(const SearchConfig& cfg, const ObjectiveFn& fn,
                                 const std::string& log_path) {
    return run_loop(cfg, fn, log_path, LoopMode{true}, {}, false);
}

SearchResult resume_search(const SearchConfig& cfg, const ObjectiveFn& fn,
                           const std::string& log_path) {
    TrialLog log;
    try {
        log = load_trial_log(log_path);
    } catch (const TruncatedRecordError& e) {
        // A killed writer can leave a partial trailing record. Everything
        // before it is intact, so drop the tail and read again.
        std::filesystem::resize_file(log_path, e.byte_offset);
        if (std::filesystem::file_size(log_path) == 0) {
            return run_loop(cfg, fn, log_path, LoopMode{false}, {}, false);
        }
        log = load_trial_log(log_path);
    }
    if (log.mode != "tpe") {
        throw ConfigError("resume: log " + log_path + " was written by a '" +
                          log.mode + "' run, not a tpe search");
    }
    const std::string want = search_config_hash(cfg);
    if (log.cfg_hash != want) {
        std::vector<std::string> diffs;
        if (!log.config_json.empty()) {
            diff_json(json::parse(log.config_json), config_json(cfg), "", diffs);
        }
        std::string msg = "resume: config hash mismatch (log " + log.cfg_hash +
                          ", current " + want + ")";
        if (!diffs.empty()) {
            msg += "; differing keys:";
            for (const auto& d : diffs) msg += " " + d;
        }
        throw ConfigError(msg);
    }
    if (log.records.size() >= static_cast<std::size_t>(cfg.iterations)) {
        // already complete: report without touching the file
        SearchResult result;
        result.best.loss = 2.0;
        result.best.trial_index = -1;
        for (const auto& rec : log.records) {
            if (rec.trial.loss < result.best.loss) result.best = rec.trial;
            result.records.push_back(rec);
        }
        return result;
    }
    return run_loop(cfg, fn, log_path, LoopMode{false}, std::move(log.records),
                    true);
}

ObjectiveFn make_corpus_objective(const EvalTask& task) {
    return [task](const Policy& policy, std::uint64_t seed) {
        return evaluate_objective(policy, task, seed);
    };
}

}  // namespace augopt
