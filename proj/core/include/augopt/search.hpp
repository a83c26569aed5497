#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "augopt/corpus.hpp"
#include "augopt/objective.hpp"
#include "augopt/tpe.hpp"

namespace augopt {

struct SearchConfig {
    int iterations = 200;
    TpeConfig tpe;
    int policy_size = 8;  // op slots per policy
    AugConfig aug;        // master_seed is ignored; master_seed below rules
    SurrogateHp surrogate;
    RegimeSpec regime;
    std::uint64_t master_seed = 0;
    int parallel_repeats = 1;

    void validate() const;
};

// Canonical JSON (sorted keys) and its 64-bit digest; the digest guards
// resume against configuration drift.
std::string search_config_to_json(const SearchConfig& cfg);
SearchConfig search_config_from_json(const std::string& text);
std::string search_config_hash(const SearchConfig& cfg);

struct TrialRecord {
    Trial trial;
    ObjectiveResult result;
    bool failed = false;
    std::string error;      // failure message when failed
    std::string timestamp;  // wall clock; excluded from canonical form
};

using ObjectiveFn =
    std::function<ObjectiveResult(const Policy& policy, std::uint64_t seed)>;

struct SearchResult {
    Trial best;  // lowest loss; ties resolve to the lowest trial index
    std::vector<TrialRecord> records;
};

// Exactly cfg.iterations trials. Suggestion t draws from an RNG stream
// derived from (master_seed, t) so histories are replayable; objective
// failures are recorded with loss 1.0 and the loop continues. When
// log_path is non-empty every record is appended and flushed as it lands.
SearchResult run_search(const SearchConfig& cfg, const ObjectiveFn& fn,
                        const std::string& log_path = "");

// Identical loop with every suggestion drawn uniformly; with
// n_startup >= iterations the two loops produce identical suggestions.
SearchResult run_random_baseline(const SearchConfig& cfg, const ObjectiveFn& fn,
                                 const std::string& log_path = "");

// Continues an interrupted run from its log; the final log and result are
// byte-for-byte what the uninterrupted run would have produced (timestamps
// aside). Refuses a log whose config hash differs, naming the keys that
// changed. A run that is already complete returns without writing.
SearchResult resume_search(const SearchConfig& cfg, const ObjectiveFn& fn,
                           const std::string& log_path);

struct TrialLog {
    std::string cfg_hash;
    std::string config_json;
    std::string mode;
    std::vector<TrialRecord> records;
};

// Parses a log; an unparseable final line raises TruncatedRecordError with
// its byte offset.
TrialLog load_trial_log(const std::string& path);

// The log with volatile fields (timestamp, wall time) removed and every
// record re-serialized with sorted keys; reproducibility checks compare
// this form.
std::string canonicalize_trial_log(const std::string& path);

std::string file_digest(const std::string& path);  // fnv1a64 hex of the bytes

// Objective closure over prepared regime data.
ObjectiveFn make_corpus_objective(const EvalTask& task);

}  // namespace augopt
