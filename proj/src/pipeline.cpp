#include "newslead/pipeline.hpp"

#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace newslead {

using nlohmann::json;
using nlohmann::ordered_json;

std::string CorpusRecord::joined_summary() const {
    std::string joined;
    for (const auto& part : summaries) {
        if (!joined.empty()) joined.push_back(' ');
        joined += part;
    }
    return joined;
}

std::optional<CorpusRecord> parse_corpus_record(const std::string& line) {
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) return std::nullopt;
    if (!j.contains("id") || !j["id"].is_string()) return std::nullopt;
    if (!j.contains("text") || !j["text"].is_string()) return std::nullopt;

    CorpusRecord record;
    record.id = j["id"].get<std::string>();
    record.text = j["text"].get<std::string>();
    if (j.contains("summary")) {
        const auto& s = j["summary"];
        if (s.is_string()) {
            record.summaries.push_back(s.get<std::string>());
        } else if (s.is_array()) {
            for (const auto& part : s) {
                if (!part.is_string()) return std::nullopt;
                record.summaries.push_back(part.get<std::string>());
            }
        } else if (!s.is_null()) {
            return std::nullopt;
        }
    }
    if (j.contains("title") && j["title"].is_string()) {
        record.title = j["title"].get<std::string>();
    }
    return record;
}

std::map<std::string, DecodeParams> default_decode_params() {
    return {
        {"cnndm", {56, 142, 4}},   {"nyt", {56, 142, 4}},     {"xsum", {11, 62, 6}},
        {"duc2003", {6, 26, 1}},   {"duc2004", {6, 26, 1}},   {"gigaword", {4, 24, 4}},
    };
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig config;
    if (j.contains("filter")) {
        const auto& f = j.at("filter");
        auto get_size = [&](const char* key, std::size_t fallback) {
            return f.contains(key) ? f.at(key).get<std::size_t>() : fallback;
        };
        config.filter.lead_min_words = get_size("lead_min_words", config.filter.lead_min_words);
        config.filter.lead_max_words = get_size("lead_max_words", config.filter.lead_max_words);
        config.filter.rest_min_words = get_size("rest_min_words", config.filter.rest_min_words);
        config.filter.rest_max_words = get_size("rest_max_words", config.filter.rest_max_words);
        config.filter.min_sentences = get_size("min_sentences", config.filter.min_sentences);
        config.filter.lead_k = get_size("lead_k", config.filter.lead_k);
        if (f.contains("overlap_threshold")) {
            config.filter.overlap_threshold = f.at("overlap_threshold").get<double>();
        }
        config.filter.validate();
    }
    if (j.contains("scoring")) {
        const auto& s = j.at("scoring");
        if (s.contains("variant")) {
            config.scoring.variant = ScoringPolicy::parse_variant(s.at("variant").get<std::string>());
        }
        if (s.contains("report")) {
            config.scoring.report = ScoringPolicy::parse_report(s.at("report").get<std::string>());
        }
        if (s.contains("truncate")) {
            config.scoring.truncation = ScoringPolicy::parse_truncation(s.at("truncate").get<std::string>());
        }
        if (s.contains("multi_ref")) {
            config.scoring.multi_ref = ScoringPolicy::parse_multi_ref(s.at("multi_ref").get<std::string>());
        }
    }
    if (j.contains("stopwords_path")) config.stopwords_path = j.at("stopwords_path");
    if (j.contains("prefix_patterns_path")) {
        config.prefix_patterns_path = j.at("prefix_patterns_path");
    }
    if (j.contains("workers")) {
        config.workers = j.at("workers").get<std::size_t>();
        if (config.workers == 0) throw std::invalid_argument("workers must be >= 1");
    }
    if (j.contains("io")) {
        const auto& io = j.at("io");
        auto get_str = [&](const char* key) {
            return io.contains(key) ? io.at(key).get<std::string>() : std::string();
        };
        config.io.input = get_str("input");
        config.io.output = get_str("output");
        config.io.audit = get_str("audit");
        config.io.stats = get_str("stats");
        config.io.dedup_against = get_str("dedup_against");
    }
    if (j.contains("decode")) {
        for (const auto& [dataset, params] : j.at("decode").items()) {
            DecodeParams p;
            p.min_length = params.value("min_length", 0);
            p.max_length = params.value("max_length", 0);
            p.beam_width = params.value("beam_width", 0);
            config.decode[dataset] = p;
        }
    }
    return config;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);
    return from_json(j);
}

void PipelineConfig::apply_env() {
    auto override_from = [](const char* name, std::string& target) {
        if (const char* value = std::getenv(name); value != nullptr && *value != '\0') {
            target = value;
        }
    };
    override_from("NEWSLEAD_INPUT", io.input);
    override_from("NEWSLEAD_OUTPUT", io.output);
    override_from("NEWSLEAD_AUDIT", io.audit);
    override_from("NEWSLEAD_STATS", io.stats);
}

json PipelineConfig::to_json() const {
    json decode_json = json::object();
    for (const auto& [dataset, p] : decode) {
        decode_json[dataset] = {{"min_length", p.min_length},
                                {"max_length", p.max_length},
                                {"beam_width", p.beam_width}};
    }
    return json{
        {"filter",
         {{"lead_min_words", filter.lead_min_words},
          {"lead_max_words", filter.lead_max_words},
          {"rest_min_words", filter.rest_min_words},
          {"rest_max_words", filter.rest_max_words},
          {"min_sentences", filter.min_sentences},
          {"overlap_threshold", filter.overlap_threshold},
          {"lead_k", filter.lead_k}}},
        {"scoring",
         {{"variant", std::string(to_string(scoring.variant))},
          {"report", std::string(to_string(scoring.report))},
          {"truncate", to_string(scoring.truncation)},
          {"multi_ref", std::string(to_string(scoring.multi_ref))}}},
        {"stopwords_path", stopwords_path},
        {"prefix_patterns_path", prefix_patterns_path},
        {"workers", workers},
        {"io",
         {{"input", io.input},
          {"output", io.output},
          {"audit", io.audit},
          {"stats", io.stats},
          {"dedup_against", io.dedup_against}}},
        {"decode", decode_json},
    };
}

Stopwords PipelineConfig::load_stopwords() const {
    return stopwords_path.empty() ? Stopwords::bundled() : Stopwords::from_file(stopwords_path);
}

PrefixRules PipelineConfig::load_prefix_rules() const {
    return prefix_patterns_path.empty() ? PrefixRules::bundled()
                                        : PrefixRules::from_file(prefix_patterns_path);
}

// ---------------------------------------------------------------------------
// JSONL encodings
// ---------------------------------------------------------------------------

std::string decision_to_jsonl(const FilterDecision& decision) {
    ordered_json j;
    j["id"] = decision.id;
    j["passed"] = decision.passed;
    json reasons = json::array();
    for (FilterReason reason : decision.reasons) reasons.push_back(to_string(reason));
    j["reasons"] = reasons;
    if (decision.overlap_ratio.has_value()) {
        j["overlap_ratio"] = *decision.overlap_ratio;
    } else {
        j["overlap_ratio"] = nullptr;
    }
    j["lead_words"] = decision.lead_words;
    j["rest_words"] = decision.rest_words;
    j["sentences"] = decision.sentence_count;
    return j.dump();
}

FilterDecision decision_from_jsonl(const std::string& line) {
    json j = json::parse(line);
    FilterDecision decision;
    decision.id = j.at("id").get<std::string>();
    decision.passed = j.at("passed").get<bool>();
    for (const auto& reason : j.at("reasons")) {
        decision.reasons.push_back(filter_reason_from_string(reason.get<std::string>()));
    }
    if (j.contains("overlap_ratio") && !j.at("overlap_ratio").is_null()) {
        decision.overlap_ratio = j.at("overlap_ratio").get<double>();
    }
    decision.lead_words = j.at("lead_words").get<std::size_t>();
    decision.rest_words = j.at("rest_words").get<std::size_t>();
    decision.sentence_count = j.at("sentences").get<std::size_t>();
    return decision;
}

std::string pair_to_jsonl(const TrainingPair& pair) {
    ordered_json j;
    j["id"] = pair.id;
    j["source"] = pair.source;
    j["target"] = pair.target;
    j["overlap_ratio"] = pair.overlap_ratio;
    return j.dump();
}

json stats_to_json(const CorpusStats& stats) {
    json rejections = json::object();
    for (const auto& [reason, count] : stats.rejection_counts) {
        rejections[std::string(to_string(reason))] = count;
    }
    json j{
        {"articles", stats.article_count},
        {"passed", stats.passed_count},
        {"retention_ratio", stats.retention_ratio},
        {"mean_lead_words", stats.mean_lead_words},
        {"mean_rest_words", stats.mean_rest_words},
        {"total_words", stats.total_words},
        {"rejections", rejections},
    };
    if (stats.median_retained_overlap.has_value()) {
        j["median_retained_overlap"] = *stats.median_retained_overlap;
    } else {
        j["median_retained_overlap"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

namespace {

struct WorkItem {
    std::uint64_t seq = 0;
    std::string line;
    bool malformed = false;      // set by the worker
    bool duplicate_id = false;   // set by the collector (id bookkeeping)
    std::string id;
    std::string decision_line;
    std::string pair_line;  // empty unless passed
    FilterDecision decision;
};

// Per-document work: parse, clean, segment, filter, serialize. Pure; safe
// from any worker thread.
void process_item(WorkItem& item, const PipelineConfig& config, const Stopwords& stopwords,
                  const PrefixRules& rules, const Blocklist* blocklist) {
    auto record = parse_corpus_record(item.line);
    if (!record.has_value()) {
        item.malformed = true;
        return;
    }
    item.id = record->id;
    SegmentedArticle article =
        segment_article(std::move(record->id), record->text, stopwords, rules);
    FilterDecision decision = filter_article(article, config.filter);
    if (blocklist != nullptr && !dedup_filter(article, *blocklist)) {
        decision.reasons.push_back(FilterReason::Duplicate);
        decision.passed = false;
    }
    item.decision_line = decision_to_jsonl(decision);
    if (decision.passed) {
        TrainingPair pair = emit_training_pair(article, decision, config.filter.lead_k);
        item.pair_line = pair_to_jsonl(pair);
    }
    item.decision = std::move(decision);
}

}  // namespace

PipelineResult run_filter_pipeline(std::istream& input, std::ostream* pairs_out,
                                   std::ostream* decisions_out, const PipelineConfig& config,
                                   const Stopwords& stopwords, const PrefixRules& rules,
                                   const Blocklist* blocklist) {
    if (config.workers == 0) throw std::invalid_argument("workers must be >= 1");
    config.filter.validate();

    PipelineResult result;
    CorpusStatsAccumulator stats;
    std::unordered_set<std::string> seen_ids;
    std::string io_error;  // first write failure; drained without writing

    // Collector-side emission, always called in input order.
    auto emit = [&](WorkItem& item) {
        if (item.malformed) {
            ++result.malformed_lines;
            return;
        }
        if (!seen_ids.insert(item.id).second) ++result.duplicate_ids;
        if (io_error.empty() && decisions_out != nullptr) {
            *decisions_out << item.decision_line << '\n';
            if (!*decisions_out) io_error = "decisions output stream failed";
        }
        if (io_error.empty() && !item.pair_line.empty() && pairs_out != nullptr) {
            *pairs_out << item.pair_line << '\n';
            if (!*pairs_out) io_error = "pairs output stream failed";
        }
        stats.add(item.decision);
    };

    if (config.workers == 1) {
        std::string line;
        std::uint64_t seq = 0;
        while (std::getline(input, line)) {
            if (line.empty()) continue;
            WorkItem item;
            item.seq = seq++;
            item.line = std::move(line);
            process_item(item, config, stopwords, rules, blocklist);
            emit(item);
        }
    } else {
        // Bounded work queue feeding a worker pool, with a re-sequencing map
        // in front of the single writer. in_flight caps total residency.
        const std::size_t max_in_flight = config.workers * 8;

        std::mutex mu;
        std::condition_variable queue_cv;    // workers wait for work
        std::condition_variable done_cv;     // collector waits for next seq
        std::condition_variable backpressure_cv;  // reader waits for room
        std::deque<WorkItem> queue;
        std::map<std::uint64_t, WorkItem> finished;
        std::uint64_t next_to_emit = 0;
        std::size_t in_flight = 0;
        bool input_done = false;

        std::vector<std::thread> workers;
        workers.reserve(config.workers);
        for (std::size_t w = 0; w < config.workers; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    WorkItem item;
                    {
                        std::unique_lock lock(mu);
                        queue_cv.wait(lock, [&] { return !queue.empty() || input_done; });
                        if (queue.empty()) return;
                        item = std::move(queue.front());
                        queue.pop_front();
                    }
                    process_item(item, config, stopwords, rules, blocklist);
                    {
                        std::lock_guard lock(mu);
                        finished.emplace(item.seq, std::move(item));
                    }
                    done_cv.notify_one();
                }
            });
        }

        std::thread collector([&] {
            for (;;) {
                WorkItem item;
                {
                    std::unique_lock lock(mu);
                    done_cv.wait(lock, [&] {
                        auto it = finished.find(next_to_emit);
                        return it != finished.end() || (input_done && in_flight == 0);
                    });
                    auto it = finished.find(next_to_emit);
                    if (it == finished.end()) return;  // drained
                    item = std::move(it->second);
                    finished.erase(it);
                    ++next_to_emit;
                    --in_flight;
                }
                backpressure_cv.notify_one();
                emit(item);
            }
        });

        std::string line;
        std::uint64_t seq = 0;
        while (std::getline(input, line)) {
            if (line.empty()) continue;
            WorkItem item;
            item.seq = seq++;
            item.line = std::move(line);
            {
                std::unique_lock lock(mu);
                backpressure_cv.wait(lock, [&] { return in_flight < max_in_flight; });
                ++in_flight;
                queue.push_back(std::move(item));
            }
            queue_cv.notify_one();
        }
        {
            std::lock_guard lock(mu);
            input_done = true;
        }
        queue_cv.notify_all();
        done_cv.notify_all();

        for (auto& worker : workers) worker.join();
        done_cv.notify_all();  // wake collector for the drained check
        collector.join();
    }

    if (input.bad()) throw std::runtime_error("run_filter_pipeline: input stream failed");
    if (pairs_out != nullptr) {
        pairs_out->flush();
        if (!*pairs_out && io_error.empty()) io_error = "pairs output stream failed";
    }
    if (decisions_out != nullptr) {
        decisions_out->flush();
        if (!*decisions_out && io_error.empty()) io_error = "decisions output stream failed";
    }
    if (!io_error.empty()) throw std::runtime_error("run_filter_pipeline: " + io_error);
    result.stats = stats.finish();
    return result;
}

Blocklist build_blocklist(std::istream& input, const PrefixRules& rules) {
    Blocklist blocklist;
    std::string line;
    while (std::getline(input, line)) {
        if (line.empty()) continue;
        auto record = parse_corpus_record(line);
        if (!record.has_value()) continue;
        blocklist.add_text(rules.clean(record->text));
    }
    return blocklist;
}

}  // namespace newslead
