#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "augopt/corpus.hpp"
#include "augopt/edit_ops.hpp"
#include "augopt/errors.hpp"
#include "augopt/lexstats.hpp"
#include "augopt/metrics.hpp"
#include "augopt/objective.hpp"
#include "augopt/policy.hpp"
#include "augopt/rng.hpp"
#include "augopt/search.hpp"
#include "augopt/surrogate.hpp"

namespace augopt::cli {
namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

CorpusFormat parse_format(const std::string& name) {
    if (name == "tsv") return CorpusFormat::kTsv;
    if (name == "csv") return CorpusFormat::kCsv;
    throw ConfigError("unknown data format '" + name + "'; expected tsv or csv");
}

RegimeKind parse_regime_kind(const std::string& name) {
    if (name == "low_resource") return RegimeKind::kLowResource;
    if (name == "class_imbalanced") return RegimeKind::kClassImbalanced;
    if (name == "full") return RegimeKind::kFull;
    throw ConfigError("unknown regime '" + name +
                      "'; expected low_resource, class_imbalanced, full");
}

std::string read_text_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(std::string(what) + ": cannot open " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Remaps `c`'s labels onto `ref`'s name -> id table so datasets drawn
// from separate files agree on class ids.
void align_labels(LabeledCorpus& c, const LabeledCorpus& ref,
                  const std::string& what) {
    std::unordered_map<std::string, int> ids;
    for (int i = 0; i < ref.num_classes; ++i) {
        ids[ref.label_names[i]] = i;
    }
    for (auto& ex : c.examples) {
        const std::string& name = c.label_names[ex.label];
        auto it = ids.find(name);
        if (it == ids.end()) {
            throw DataError(what + ": label '" + name +
                            "' does not occur in the training data");
        }
        ex.label = it->second;
    }
    c.label_names = ref.label_names;
    c.num_classes = ref.num_classes;
    c.recount();
}

TfIdfTable tfidf_from_corpus(const LabeledCorpus& corpus) {
    std::vector<TokenSeq> docs;
    docs.reserve(corpus.size());
    for (const auto& ex : corpus.examples) {
        docs.push_back(tokenize(ex.text));
    }
    return build_tfidf(docs);
}

bool policy_uses_thesaurus(const Policy& policy) {
    for (const auto& op : policy.ops) {
        if (op.type == OpType::kWordNetSubstitute) return true;
    }
    return false;
}

struct OutputEntry {
    std::string path;               // relative to the manifest directory
    std::string digest;
    std::string canonical_digest;   // set when the file embeds wall time
};

OutputEntry plain_output(const fs::path& dir, const std::string& rel) {
    return {rel, file_digest((dir / rel).string()), ""};
}

OutputEntry log_output(const fs::path& dir, const std::string& rel) {
    OutputEntry e = plain_output(dir, rel);
    e.canonical_digest =
        hex64(fnv1a64(canonicalize_trial_log((dir / rel).string())));
    return e;
}

void write_manifest(const fs::path& manifest_path, const std::string& command,
                    const ojson& effective_config, const std::string& cfg_hash,
                    const std::vector<std::pair<std::string, std::string>>& inputs,
                    const std::vector<OutputEntry>& outputs,
                    std::int64_t wall_time_ms) {
    ojson m;
    m["command"] = command;
    m["tool_version"] = cli_version();
    m["ts"] = now_iso8601();
    m["wall_time_ms"] = wall_time_ms;
    if (!cfg_hash.empty()) m["config_hash"] = cfg_hash;
    m["effective_config"] = effective_config;
    m["inputs"] = ojson::array();
    for (const auto& [path, digest] : inputs) {
        m["inputs"].push_back(ojson{{"path", path}, {"digest", digest}});
    }
    m["outputs"] = ojson::array();
    for (const auto& e : outputs) {
        ojson o{{"path", e.path}, {"digest", e.digest}};
        if (!e.canonical_digest.empty()) {
            o["canonical_digest"] = e.canonical_digest;
        }
        m["outputs"].push_back(o);
    }
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write manifest " + manifest_path.string());
    }
    out << m.dump(2) << "\n";
}

std::vector<std::pair<std::string, std::string>> digest_inputs(
    const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : paths) {
        if (!p.empty()) out.emplace_back(p, file_digest(p));
    }
    return out;
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct RepeatOutcome {
    int repeat = 0;
    Trial best;
};

RepeatOutcome run_single_search(const fs::path& dir, SearchConfig cfg,
                                int repeat, const LabeledCorpus& corpus,
                                const Thesaurus& thesaurus,
                                const SearchArgs& args,
                                const std::vector<std::pair<std::string, std::string>>& inputs) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(dir);

    Regime regime = make_regime(corpus, cfg.regime);
    TfIdfTable tfidf = tfidf_from_corpus(regime.train);

    EvalTask task;
    task.train = &regime.train;
    task.val_model = &regime.val_model;
    task.val_policy = &regime.val_policy;
    task.tfidf = &tfidf;
    task.thesaurus = &thesaurus;
    task.aug = cfg.aug;
    task.surrogate = cfg.surrogate;
    task.imbalanced = cfg.regime.kind == RegimeKind::kClassImbalanced;
    task.minority_class = cfg.regime.minority_class;
    ObjectiveFn fn = make_corpus_objective(task);

    const fs::path log_path = dir / "trials.jsonl";
    SearchResult result;
    if (args.resume && fs::exists(log_path)) {
        result = resume_search(cfg, fn, log_path.string());
    } else {
        if (fs::exists(log_path) && fs::file_size(log_path) > 0) {
            throw ConfigError("search: " + log_path.string() +
                              " already exists; pass --resume to continue it "
                              "or point --out elsewhere");
        }
        result = args.sampler == "random"
                     ? run_random_baseline(cfg, fn, log_path.string())
                     : run_search(cfg, fn, log_path.string());
    }

    save_policy_file(result.best.policy, (dir / "policy.json").string());
    save_run_metadata((dir / "regime.json").string(), corpus, regime,
                      cfg.regime);

    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    std::vector<OutputEntry> outputs{
        plain_output(dir, "policy.json"),
        log_output(dir, "trials.jsonl"),
        plain_output(dir, "regime.json"),
    };
    write_manifest(dir / "manifest.json", "search",
                   ojson::parse(search_config_to_json(cfg)),
                   search_config_hash(cfg), inputs, outputs, wall);
    return {repeat, result.best};
}

}  // namespace

const char* cli_version() { return "0.1.0"; }

std::string resolve_thesaurus_path(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    const char* env = std::getenv("AUGOPT_THESAURUS");
    return env != nullptr ? env : "";
}

int run_mapped(const std::function<void()>& body, std::ostream& err) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

void cmd_search(const SearchArgs& args, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();

    SearchConfig cfg =
        search_config_from_json(read_text_file(args.config_path, "search"));
    if (args.iterations) cfg.iterations = *args.iterations;
    if (args.regime) cfg.regime.kind = parse_regime_kind(*args.regime);
    if (args.train_size) {
        cfg.regime.train_size = static_cast<std::size_t>(*args.train_size);
    }
    if (args.val_size) {
        cfg.regime.val_size = static_cast<std::size_t>(*args.val_size);
    }
    if (args.n_aug) cfg.aug.n_aug = *args.n_aug;
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.minority_class) cfg.regime.minority_class = *args.minority_class;
    if (args.minority_count) {
        cfg.regime.minority_count =
            static_cast<std::size_t>(*args.minority_count);
    }
    if (args.majority_count) {
        cfg.regime.majority_count =
            static_cast<std::size_t>(*args.majority_count);
    }
    cfg.parallel_repeats = args.repeats;
    cfg.validate();

    if (args.sampler != "tpe" && args.sampler != "random") {
        throw ConfigError("search: unknown sampler '" + args.sampler +
                          "'; expected tpe or random");
    }
    if (args.repeats < 1) throw ConfigError("search: --repeats must be >= 1");
    if (args.jobs < 1) throw ConfigError("search: --jobs must be >= 1");
    if (args.resume && args.sampler == "random") {
        throw ConfigError("search: resume supports only the tpe sampler");
    }
    if (args.resume && args.repeats != 1) {
        throw ConfigError("search: resume requires --repeats 1");
    }

    const std::string thesaurus_path =
        resolve_thesaurus_path(args.thesaurus_path);
    if (thesaurus_path.empty()) {
        throw ConfigError(
            "search: no thesaurus; pass --thesaurus or set AUGOPT_THESAURUS");
    }
    LabeledCorpus corpus = load_corpus(args.data_path,
                                       parse_format(args.data.format),
                                       args.data.has_header);
    Thesaurus thesaurus = load_thesaurus(thesaurus_path);
    for (const auto& w : thesaurus.warnings) out << "warning: " << w << "\n";

    fs::create_directories(args.out_dir);
    auto inputs = digest_inputs({args.config_path, args.data_path,
                                 thesaurus_path});

    if (args.repeats == 1) {
        RepeatOutcome r = run_single_search(args.out_dir, cfg, 0, corpus,
                                            thesaurus, args, inputs);
        out << "best trial " << r.best.trial_index << ": loss "
            << fmt17(r.best.loss) << "\n";
        out << "wrote " << (fs::path(args.out_dir) / "policy.json").string()
            << "\n";
        return;
    }

    // Independent repeats: repeat r runs under its own derived seeds in
    // out/r<r>, at most --jobs at a time.
    std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(args.repeats));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&]() {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= args.repeats) return;
            try {
                SearchConfig rcfg = cfg;
                std::uint64_t rseed = derive_seed(
                    cfg.master_seed,
                    {static_cast<std::uint64_t>(kStreamRepeat),
                     static_cast<std::uint64_t>(r)});
                rcfg.master_seed = rseed;
                rcfg.regime.seed = rseed;
                fs::path dir = fs::path(args.out_dir) / ("r" + std::to_string(r));
                outcomes[static_cast<std::size_t>(r)] = run_single_search(
                    dir, rcfg, r, corpus, thesaurus, args, inputs);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    int n_threads = std::min(args.jobs, args.repeats);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::ostringstream csv;
    csv << "repeat,best_trial,best_loss\n";
    for (const auto& r : outcomes) {
        csv << r.repeat << "," << r.best.trial_index << ","
            << fmt17(r.best.loss) << "\n";
        out << "repeat " << r.repeat << ": best trial " << r.best.trial_index
            << ", loss " << fmt17(r.best.loss) << "\n";
    }
    const fs::path out_dir(args.out_dir);
    {
        std::ofstream f(out_dir / "summary.csv", std::ios::binary);
        f << csv.str();
    }
    std::vector<OutputEntry> outputs{plain_output(out_dir, "summary.csv")};
    for (int r = 0; r < args.repeats; ++r) {
        std::string base = "r" + std::to_string(r) + "/";
        outputs.push_back(plain_output(out_dir, base + "policy.json"));
        outputs.push_back(log_output(out_dir, base + "trials.jsonl"));
        outputs.push_back(plain_output(out_dir, base + "regime.json"));
    }
    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    write_manifest(out_dir / "manifest.json", "search",
                   ojson::parse(search_config_to_json(cfg)),
                   search_config_hash(cfg), inputs, outputs, wall);
}

void cmd_augment(const AugmentArgs& args, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();

    LabeledCorpus corpus = load_corpus(args.data_path,
                                       parse_format(args.data.format),
                                       args.data.has_header);
    Policy policy = load_policy_file(args.policy_path);

    const std::string thesaurus_path =
        resolve_thesaurus_path(args.thesaurus_path);
    Thesaurus thesaurus;
    if (!thesaurus_path.empty()) {
        thesaurus = load_thesaurus(thesaurus_path);
        for (const auto& w : thesaurus.warnings) {
            out << "warning: " << w << "\n";
        }
    } else if (policy_uses_thesaurus(policy)) {
        throw ConfigError(
            "augment: policy contains WS ops but no thesaurus was given; "
            "pass --thesaurus or set AUGOPT_THESAURUS");
    }

    TfIdfTable tfidf = tfidf_from_corpus(corpus);
    OpContext ctx{&tfidf, thesaurus_path.empty() ? nullptr : &thesaurus,
                  nullptr};
    AugConfig aug;
    aug.n_select = args.n_select;
    aug.n_aug = args.n_aug;
    aug.master_seed = args.seed;

    LabeledCorpus augmented =
        args.balance
            ? augment_minority(policy, corpus, args.minority_class, aug, ctx)
            : augment_corpus(policy, corpus, aug, ctx);
    save_corpus(augmented, args.out_path, parse_format(args.data.format));

    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    ojson effective{{"data", args.data_path},
                    {"policy", args.policy_path},
                    {"n_aug", args.n_aug},
                    {"n_select", args.n_select},
                    {"seed", args.seed},
                    {"balance", args.balance},
                    {"minority_class", args.minority_class}};
    fs::path out_file(args.out_path);
    fs::path manifest_path(args.out_path + ".manifest.json");
    write_manifest(manifest_path, "augment", effective, "",
                   digest_inputs({args.data_path, args.policy_path,
                                  thesaurus_path}),
                   {{out_file.filename().string(),
                     file_digest(args.out_path), ""}},
                   wall);
    out << augmented.size() << " rows (" << corpus.size() << " originals) -> "
        << args.out_path << "\n";
}

namespace {

// One full train-and-score pass; the only stochastic part is augmentation.
MetricReport evaluate_once(const LabeledCorpus& train, const LabeledCorpus* val,
                           const LabeledCorpus& test, const TfIdfTable& tfidf,
                           const Thesaurus* thesaurus, const Policy* policy,
                           AugConfig aug, const SurrogateHp& hp) {
    LabeledCorpus augmented;
    if (policy != nullptr) {
        OpContext ctx{&tfidf, thesaurus, nullptr};
        augmented = augment_corpus(*policy, train, aug, ctx);
    } else {
        augmented = train;
    }

    Dataset train_ds = featurize_corpus(augmented, hp.feature_dim);
    Dataset val_ds = val != nullptr ? featurize_corpus(*val, hp.feature_dim)
                                    : train_ds;
    SurrogateModel model = train_surrogate(train_ds, val_ds, hp, 0);

    Dataset test_ds = featurize_corpus(test, hp.feature_dim);
    ModelEval eval = evaluate_model(model, test_ds);

    std::vector<TokenSeq> all_texts, synth_texts;
    for (const auto& ex : augmented.examples) {
        all_texts.push_back(tokenize(ex.text));
        if (ex.variant >= 1) synth_texts.push_back(all_texts.back());
    }
    TfIdfEmbedder embedder(tfidf);
    MetricReport report;
    report.accuracy = eval.accuracy;
    report.per_class_accuracy = eval.per_class_accuracy;
    report.dist2_all = dist2(all_texts);
    report.dist2_augmented = dist2(synth_texts);
    report.mean_sp = mean_semantic_preservation(augmented, embedder);
    return report;
}

}  // namespace

void cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();

    CorpusFormat format = parse_format(args.data.format);
    LabeledCorpus train =
        load_corpus(args.train_path, format, args.data.has_header);
    LabeledCorpus test =
        load_corpus(args.test_path, format, args.data.has_header);
    align_labels(test, train, "evaluate: test set");
    LabeledCorpus val;
    bool have_val = !args.val_path.empty();
    if (have_val) {
        val = load_corpus(args.val_path, format, args.data.has_header);
        align_labels(val, train, "evaluate: validation set");
    }

    std::optional<Policy> policy, random_policy;
    if (!args.policy_path.empty()) {
        policy = load_policy_file(args.policy_path);
    }
    if (!args.random_policy_path.empty()) {
        random_policy = load_policy_file(args.random_policy_path);
    }
    if (!args.compare && random_policy.has_value()) {
        throw ConfigError("evaluate: --random-policy only applies with "
                          "--compare");
    }

    bool needs_thesaurus =
        (policy && policy_uses_thesaurus(*policy)) ||
        (random_policy && policy_uses_thesaurus(*random_policy));
    const std::string thesaurus_path =
        resolve_thesaurus_path(args.thesaurus_path);
    Thesaurus thesaurus;
    bool have_thesaurus = !thesaurus_path.empty();
    if (have_thesaurus) {
        thesaurus = load_thesaurus(thesaurus_path);
        for (const auto& w : thesaurus.warnings) {
            out << "warning: " << w << "\n";
        }
    } else if (needs_thesaurus) {
        throw ConfigError(
            "evaluate: policy contains WS ops but no thesaurus was given; "
            "pass --thesaurus or set AUGOPT_THESAURUS");
    }

    TfIdfTable tfidf = tfidf_from_corpus(train);
    const Thesaurus* thes = have_thesaurus ? &thesaurus : nullptr;
    const LabeledCorpus* valp = have_val ? &val : nullptr;
    AugConfig aug;
    aug.n_select = args.n_select;
    aug.n_aug = args.n_aug;

    std::vector<std::string> input_paths{args.train_path, args.test_path,
                                         args.val_path, args.policy_path,
                                         args.random_policy_path,
                                         thesaurus_path};

    if (!args.compare) {
        aug.master_seed = args.seed;
        MetricReport report =
            evaluate_once(train, valp, test, tfidf, thes,
                          policy ? &*policy : nullptr, aug, args.hp);
        save_metric_report(report, args.out_path);
        auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        ojson effective{{"train", args.train_path},
                        {"test", args.test_path},
                        {"val", args.val_path},
                        {"policy", args.policy_path},
                        {"n_aug", args.n_aug},
                        {"n_select", args.n_select},
                        {"seed", args.seed},
                        {"epochs", args.hp.epochs},
                        {"learning_rate", args.hp.learning_rate},
                        {"l2_reg", args.hp.l2_reg},
                        {"feature_dim", args.hp.feature_dim}};
        fs::path out_file(args.out_path);
        write_manifest(args.out_path + ".manifest.json", "evaluate", effective,
                       "", digest_inputs(input_paths),
                       {{out_file.filename().string(),
                         file_digest(args.out_path), ""}},
                       wall);
        out << "accuracy " << fmt17(report.accuracy) << " -> " << args.out_path
            << "\n";
        return;
    }

    // Paired comparison: each repeat reuses one derived seed across all
    // conditions, so rows differ only in the policy applied.
    if (args.repeats < 1) {
        throw ConfigError("evaluate: --repeats must be >= 1");
    }
    std::vector<std::pair<std::string, const Policy*>> conditions;
    conditions.emplace_back("noaug", nullptr);
    if (random_policy) conditions.emplace_back("random", &*random_policy);
    if (policy) conditions.emplace_back("searched", &*policy);

    fs::path out_dir(args.out_path);
    fs::create_directories(out_dir);
    std::ostringstream rows, summary;
    rows << "condition,repeat,seed,accuracy\n";
    summary << "condition,n,mean,std\n";
    for (const auto& [name, cond_policy] : conditions) {
        std::vector<double> accs;
        for (int r = 0; r < args.repeats; ++r) {
            std::uint64_t seed_r = derive_seed(
                args.seed, {static_cast<std::uint64_t>(kStreamRepeat),
                            static_cast<std::uint64_t>(r)});
            aug.master_seed = seed_r;
            MetricReport rep = evaluate_once(train, valp, test, tfidf, thes,
                                             cond_policy, aug, args.hp);
            accs.push_back(rep.accuracy);
            rows << name << "," << r << "," << seed_r << ","
                 << fmt17(rep.accuracy) << "\n";
        }
        double mean = 0.0;
        for (double a : accs) mean += a;
        mean /= static_cast<double>(accs.size());
        summary << name << "," << accs.size() << "," << fmt17(mean) << ","
                << fmt17(sample_std(accs, mean)) << "\n";
        out << name << ": mean accuracy " << fmt17(mean) << " over "
            << accs.size() << " repeats\n";
    }
    {
        std::ofstream f(out_dir / "comparison.csv", std::ios::binary);
        f << rows.str();
    }
    {
        std::ofstream f(out_dir / "summary.csv", std::ios::binary);
        f << summary.str();
    }
    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    ojson effective{{"train", args.train_path},
                    {"test", args.test_path},
                    {"val", args.val_path},
                    {"policy", args.policy_path},
                    {"random_policy", args.random_policy_path},
                    {"n_aug", args.n_aug},
                    {"n_select", args.n_select},
                    {"seed", args.seed},
                    {"repeats", args.repeats},
                    {"epochs", args.hp.epochs},
                    {"learning_rate", args.hp.learning_rate},
                    {"l2_reg", args.hp.l2_reg},
                    {"feature_dim", args.hp.feature_dim}};
    write_manifest(out_dir / "manifest.json", "evaluate", effective, "",
                   digest_inputs(input_paths),
                   {plain_output(out_dir, "comparison.csv"),
                    plain_output(out_dir, "summary.csv")},
                   wall);
}

void cmd_report(const ReportArgs& args, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    if (args.log_paths.empty()) {
        throw ConfigError("report: at least one trial log is required");
    }

    std::vector<TrialLog> logs;
    std::vector<std::string> names;
    for (const auto& path : args.log_paths) {
        logs.push_back(load_trial_log(path));
        std::string base = fs::path(path).stem().string();
        std::string name = base;
        for (int i = 2; std::find(names.begin(), names.end(), name) !=
                        names.end();
             ++i) {
            name = base + "_" + std::to_string(i);
        }
        names.push_back(name);
    }

    std::ostringstream csv;
    std::size_t max_len = 0;
    for (const auto& log : logs) max_len = std::max(max_len, log.records.size());
    if (logs.size() == 1) {
        csv << "trial,loss,best_so_far\n";
    } else {
        csv << "trial";
        for (const auto& name : names) {
            csv << "," << name << "_loss," << name << "_best_so_far";
        }
        csv << "\n";
    }
    std::vector<double> best(logs.size(),
                             std::numeric_limits<double>::infinity());
    for (std::size_t t = 0; t < max_len; ++t) {
        csv << t;
        for (std::size_t i = 0; i < logs.size(); ++i) {
            if (t < logs[i].records.size()) {
                double loss = logs[i].records[t].trial.loss;
                best[i] = std::min(best[i], loss);
                csv << "," << fmt17(loss) << "," << fmt17(best[i]);
            } else {
                csv << ",,";
            }
        }
        csv << "\n";
    }

    if (args.out_path.empty()) {
        out << csv.str();
        return;
    }
    {
        std::ofstream f(args.out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("report: cannot write " + args.out_path);
        f << csv.str();
    }
    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    ojson effective{{"logs", args.log_paths}};
    write_manifest(args.out_path + ".manifest.json", "report", effective, "",
                   digest_inputs(args.log_paths),
                   {{fs::path(args.out_path).filename().string(),
                     file_digest(args.out_path), ""}},
                   wall);
    out << max_len << " rows -> " << args.out_path << "\n";
}

}  // namespace augopt::cli
