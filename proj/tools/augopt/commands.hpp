#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "augopt/search.hpp"

namespace augopt::cli {

// Shared dataset-loading knobs. Format names: "tsv", "csv".
struct DataOpts {
    std::string format = "tsv";
    bool has_header = false;
};

struct SearchArgs {
    std::string config_path;  // JSON config, required
    std::string data_path;    // labeled corpus, required
    std::string out_dir;      // run directory, required
    std::string thesaurus_path;  // falls back to AUGOPT_THESAURUS
    DataOpts data;
    std::string sampler = "tpe";  // "tpe" or "random"
    bool resume = false;
    int repeats = 1;
    int jobs = 1;
    // Flag overrides; unset values keep what the config file said.
    std::optional<int> iterations;
    std::optional<std::string> regime;
    std::optional<std::uint64_t> train_size;
    std::optional<std::uint64_t> val_size;
    std::optional<int> n_aug;
    std::optional<std::uint64_t> seed;
    std::optional<int> minority_class;
    std::optional<std::uint64_t> minority_count;
    std::optional<std::uint64_t> majority_count;
};

struct AugmentArgs {
    std::string data_path;
    std::string policy_path;
    std::string out_path;
    std::string thesaurus_path;
    DataOpts data;
    int n_aug = 16;
    int n_select = 2;
    std::uint64_t seed = 0;
    bool balance = false;     // equalize a binary minority class instead
    int minority_class = 0;   // used with balance
};

struct EvaluateArgs {
    std::string train_path;
    std::string test_path;
    std::string out_path;            // file, or directory in compare mode
    std::string val_path;            // optional checkpoint-selection set
    std::string policy_path;         // optional; absent = no augmentation
    std::string random_policy_path;  // compare mode baseline policy
    std::string thesaurus_path;
    DataOpts data;
    int n_aug = 16;
    int n_select = 2;
    std::uint64_t seed = 0;
    bool compare = false;
    int repeats = 5;
    SurrogateHp hp;
};

struct ReportArgs {
    std::vector<std::string> log_paths;  // at least one
    std::string out_path;                // empty = stdout
};

// Each command throws ConfigError / DataError on bad input; `out` receives
// the human-readable progress lines.
void cmd_search(const SearchArgs& args, std::ostream& out);
void cmd_augment(const AugmentArgs& args, std::ostream& out);
void cmd_evaluate(const EvaluateArgs& args, std::ostream& out);
void cmd_report(const ReportArgs& args, std::ostream& out);

// Exit-code policy: 0 ok, 2 config/usage, 3 data, 4 anything else.
int run_mapped(const std::function<void()>& body, std::ostream& err);

// Explicit path if nonempty, else $AUGOPT_THESAURUS, else "".
std::string resolve_thesaurus_path(const std::string& explicit_path);

const char* cli_version();

}  // namespace augopt::cli
