#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newslead/analysis.hpp"
#include "newslead/lead_filter.hpp"
#include "newslead/rouge.hpp"

// Streaming corpus ingestion and the clean -> segment -> filter -> emit
// orchestration. One JSONL record in, exactly one decision out, one training
// pair per passing record. Output order always matches input order.

namespace newslead {

/// One raw corpus record: {"id": str, "text": str, "summary": str|[str]?,
/// "title": str?}.
struct CorpusRecord {
    std::string id;
    std::string text;
    std::vector<std::string> summaries;
    std::optional<std::string> title;

    bool has_summary() const { return !summaries.empty(); }
    /// Multi-part summaries joined by single spaces.
    std::string joined_summary() const;
};

/// Parses one JSONL line. Returns nullopt (malformed) when the line is not a
/// JSON object with string `id` and `text`.
std::optional<CorpusRecord> parse_corpus_record(const std::string& line);

/// Decoding contract metadata carried alongside the emitted data. These
/// drive no computation here; they document how downstream consumers of the
/// training pairs are expected to decode.
struct DecodeParams {
    int min_length = 0;
    int max_length = 0;
    int beam_width = 0;
};

std::map<std::string, DecodeParams> default_decode_params();

/// Full pipeline configuration, loadable from a JSON file. Precedence:
/// defaults < config file < NEWSLEAD_* environment variables (io paths only)
/// < command-line flags.
struct PipelineConfig {
    FilterConfig filter;
    ScoringPolicy scoring;             // defaults for rouge/buckets commands
    std::string stopwords_path;        // empty: bundled list
    std::string prefix_patterns_path;  // empty: bundled patterns
    std::size_t workers = 1;

    struct Io {
        std::string input;
        std::string output;  // pairs JSONL
        std::string audit;   // decisions JSONL
        std::string stats;   // stats JSON
        std::string dedup_against;  // evaluation-set JSONL to blocklist
    } io;

    std::map<std::string, DecodeParams> decode = default_decode_params();

    static PipelineConfig from_json(const nlohmann::json& j);
    static PipelineConfig from_file(const std::string& path);
    /// Apply NEWSLEAD_INPUT / NEWSLEAD_OUTPUT / NEWSLEAD_AUDIT /
    /// NEWSLEAD_STATS overrides to the io paths.
    void apply_env();
    nlohmann::json to_json() const;

    Stopwords load_stopwords() const;
    PrefixRules load_prefix_rules() const;
};

/// Stable JSONL encodings (fixed key order, shortest-round-trip numbers).
std::string decision_to_jsonl(const FilterDecision& decision);
std::string pair_to_jsonl(const TrainingPair& pair);
FilterDecision decision_from_jsonl(const std::string& line);
nlohmann::json stats_to_json(const CorpusStats& stats);

/// Counters reported alongside the stats.
struct PipelineResult {
    CorpusStats stats;
    std::size_t malformed_lines = 0;
    std::size_t duplicate_ids = 0;  // input-contract violations, still processed
};

/// Run the filter pipeline over an input stream. Writers may be null when an
/// output is not wanted. Deterministic: identical input and config produce
/// byte-identical outputs for any worker count. Memory stays bounded by the
/// in-flight window, not the corpus size.
PipelineResult run_filter_pipeline(std::istream& input, std::ostream* pairs_out,
                                   std::ostream* decisions_out, const PipelineConfig& config,
                                   const Stopwords& stopwords, const PrefixRules& rules,
                                   const Blocklist* blocklist = nullptr);

/// Build a blocklist by fingerprinting every record of an evaluation-set
/// JSONL stream with the pipeline's cleaning applied.
Blocklist build_blocklist(std::istream& input, const PrefixRules& rules);

}  // namespace newslead
