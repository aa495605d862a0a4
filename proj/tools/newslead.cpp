// newslead: corpus filtering, lead baselines, ROUGE scoring and report
// generation over JSONL corpora. See README.md for the file formats.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "newslead/analysis.hpp"
#include "newslead/pipeline.hpp"
#include "newslead/rouge.hpp"
#include "newslead/service.hpp"
#include "newslead/version.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file: " + path);
    return out;
}

// id -> summary texts, preserving file order of first appearance.
struct SummaryFile {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<std::string>> by_id;
};

SummaryFile load_summaries(const std::string& path, const char* field) {
    SummaryFile file;
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains(field)) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected JSON object with 'id' and '" + field + "'");
        }
        std::vector<std::string> texts;
        if (j[field].is_string()) {
            texts.push_back(j[field].get<std::string>());
        } else if (j[field].is_array()) {
            for (const auto& part : j[field]) texts.push_back(part.get<std::string>());
        } else {
            throw DataError(path + ":" + std::to_string(line_no) + ": '" + field +
                            "' must be a string or array of strings");
        }
        const std::string id = j["id"].get<std::string>();
        if (file.by_id.emplace(id, std::move(texts)).second) {
            file.order.push_back(id);
        }
    }
    return file;
}

void write_report(const ordered_json& report, const std::string& json_path,
                  const std::string& csv_path, const std::string& csv_header,
                  const std::vector<std::string>& csv_rows) {
    if (!csv_path.empty()) {
        auto out = open_output(csv_path);
        out << csv_header << '\n';
        for (const auto& row : csv_rows) out << row << '\n';
    }
    if (!json_path.empty()) {
        auto out = open_output(json_path);
        out << report.dump(2) << '\n';
    } else {
        std::cout << report.dump(2) << '\n';
    }
}

std::string format_double(double value) {
    return json(value).dump();  // shortest round-trip form, locale-free
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int run_clean(const std::string& in_path, const std::string& out_path,
              const std::string& patterns_path) {
    const newslead::PrefixRules rules = patterns_path.empty()
                                            ? newslead::PrefixRules::bundled()
                                            : newslead::PrefixRules::from_file(patterns_path);
    auto in = open_input(in_path);
    auto out = open_output(out_path);
    std::string line;
    std::size_t malformed = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
            ++malformed;
            continue;
        }
        j["text"] = rules.clean(j["text"].get<std::string>());
        out << j.dump() << '\n';
    }
    if (malformed > 0) {
        std::cerr << "clean: skipped " << malformed << " malformed line(s)\n";
    }
    return kExitOk;
}

int run_filter(newslead::PipelineConfig config, bool pairs_only) {
    if (config.io.input.empty()) throw DataError("no input file (--in or config io.input)");
    if (config.io.output.empty() && config.io.audit.empty()) {
        throw DataError("nothing to write: set --out and/or --audit");
    }
    const newslead::Stopwords stopwords = config.load_stopwords();
    const newslead::PrefixRules rules = config.load_prefix_rules();

    std::optional<newslead::Blocklist> blocklist;
    if (!config.io.dedup_against.empty()) {
        auto eval_in = open_input(config.io.dedup_against);
        blocklist = newslead::build_blocklist(eval_in, rules);
    }

    auto in = open_input(config.io.input);
    std::ofstream pairs_out, decisions_out;
    std::ostream* pairs = nullptr;
    std::ostream* decisions = nullptr;
    if (!config.io.output.empty()) {
        pairs_out = open_output(config.io.output);
        pairs = &pairs_out;
    }
    if (!pairs_only && !config.io.audit.empty()) {
        decisions_out = open_output(config.io.audit);
        decisions = &decisions_out;
    }

    newslead::PipelineResult result;
    try {
        result = newslead::run_filter_pipeline(in, pairs, decisions, config, stopwords, rules,
                                               blocklist.has_value() ? &*blocklist : nullptr);
    } catch (const std::exception& e) {
        // Fatal I/O failure: report what was written before the failure.
        pairs_out.close();
        decisions_out.close();
        json manifest{{"error", e.what()}, {"partial_outputs", json::object()}};
        auto add_partial = [&](const char* role, const std::string& path) {
            if (path.empty()) return;
            std::error_code ec;
            const auto size = std::filesystem::file_size(path, ec);
            manifest["partial_outputs"][role] = {{"path", path},
                                                 {"bytes", ec ? 0 : size}};
        };
        add_partial("pairs", config.io.output);
        add_partial("decisions", pairs_only ? std::string() : config.io.audit);
        std::cerr << "filter: fatal failure, partial-output manifest:\n"
                  << manifest.dump(2) << '\n';
        return kExitData;
    }

    json stats = newslead::stats_to_json(result.stats);
    stats["malformed_lines"] = result.malformed_lines;
    stats["duplicate_ids"] = result.duplicate_ids;
    json decode = json::object();
    for (const auto& [dataset, p] : config.decode) {
        decode[dataset] = {{"min_length", p.min_length},
                           {"max_length", p.max_length},
                           {"beam_width", p.beam_width}};
    }
    stats["decode_defaults"] = decode;  // downstream decoding contract, echoed only
    if (!config.io.stats.empty()) {
        auto stats_out = open_output(config.io.stats);
        stats_out << stats.dump(2) << '\n';
    }
    std::cerr << "filter: " << result.stats.article_count << " article(s), "
              << result.stats.passed_count << " passed\n";
    if (config.io.stats.empty()) std::cout << stats.dump(2) << '\n';
    return kExitOk;
}

int run_stats(const std::string& decisions_path, const std::string& pairs_path,
              const std::string& json_path, const std::string& csv_path) {
    auto in = open_input(decisions_path);
    newslead::CorpusStatsAccumulator acc;
    std::unordered_map<std::string, bool> decided;  // id -> passed
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto decision = newslead::decision_from_jsonl(line);
            decided[decision.id] = decision.passed;
            acc.add(decision);
        } catch (const std::exception& e) {
            throw DataError(decisions_path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    const auto stats = acc.finish();

    std::size_t pair_mismatches = 0;
    if (!pairs_path.empty()) {
        auto pairs_in = open_input(pairs_path);
        while (std::getline(pairs_in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
                ++pair_mismatches;
                continue;
            }
            auto it = decided.find(j["id"].get<std::string>());
            if (it == decided.end() || !it->second) ++pair_mismatches;
        }
    }

    ordered_json report = newslead::stats_to_json(stats);
    if (!pairs_path.empty()) report["pair_id_mismatches"] = pair_mismatches;

    std::vector<std::string> rows;
    for (const auto& [reason, count] : stats.rejection_counts) {
        rows.push_back(std::string(newslead::to_string(reason)) + "," + std::to_string(count));
    }
    write_report(report, json_path, csv_path, "reason,count", rows);
    if (pair_mismatches > 0) {
        std::cerr << "stats: " << pair_mismatches << " pair id(s) not matching a passed decision\n";
        return kExitData;
    }
    return kExitOk;
}

int run_rouge(const std::string& candidates_path, const std::string& references_path,
              const newslead::ScoringPolicy& policy) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto candidates = load_summaries(candidates_path, "summary");
    const auto references = load_summaries(references_path, "summary");

    newslead::CorpusScorer scorer;
    std::size_t missing = 0;
    std::string first_missing;
    for (const auto& id : candidates.order) {
        auto it = references.by_id.find(id);
        if (it == references.by_id.end()) {
            if (missing == 0) first_missing = id;
            ++missing;
            continue;
        }
        scorer.add(newslead::score_multi_reference(candidates.by_id.at(id)[0], it->second,
                                                   policy, stopwords));
    }
    if (missing > 0) {
        std::cerr << "rouge: " << missing << " candidate id(s) without references (first: "
                  << first_missing << ")\n";
    }
    if (scorer.count() == 0) throw DataError("no candidate/reference pairs matched by id");

    const auto mean = scorer.mean();
    ordered_json out{
        {"variant", newslead::to_string(policy.variant)},
        {"report", newslead::to_string(policy.report)},
        {"truncate", newslead::to_string(policy.truncation)},
        {"multi_ref", newslead::to_string(policy.multi_ref)},
        {"documents", scorer.count()},
        {"precision", mean.precision},
        {"recall", mean.recall},
        {"f1", mean.f1},
        {"headline", newslead::headline(mean, policy.report)},
    };
    std::cout << out.dump(2) << '\n';
    return missing > 0 ? kExitData : kExitOk;
}

int run_novelty(const std::string& articles_path, const std::string& candidates_path,
                std::size_t max_n, std::size_t lead_k, bool base_article,
                const std::string& json_path, const std::string& csv_path) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto rules = newslead::PrefixRules::bundled();
    const auto candidates = load_summaries(candidates_path, "summary");

    newslead::NoveltyAccumulator acc(max_n);
    auto in = open_input(articles_path);
    std::string line;
    std::size_t matched = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto record = newslead::parse_corpus_record(line);
        if (!record.has_value()) continue;
        auto it = candidates.by_id.find(record->id);
        if (it == candidates.by_id.end()) continue;
        ++matched;

        const auto article = newslead::segment_article(record->id, record->text, stopwords, rules);
        std::vector<std::string> base;
        const std::size_t take =
            base_article ? article.sentences.size() : std::min(lead_k, article.sentences.size());
        for (std::size_t i = 0; i < take; ++i) {
            for (const auto& token : article.tokens[i]) base.push_back(token.surface);
        }
        const auto summary_tokens =
            newslead::surfaces(newslead::tokenize(it->second[0], stopwords));
        acc.add(summary_tokens, base);
    }
    if (matched == 0) throw DataError("no candidate ids matched the articles file");

    const auto report = acc.finish();
    ordered_json j;
    j["base"] = base_article ? "article" : "lead:" + std::to_string(lead_k);
    j["documents"] = matched;
    ordered_json per_n = ordered_json::object();
    std::vector<std::string> rows;
    for (const auto& [n, ratio] : report.per_n) {
        per_n[std::to_string(n)] = ratio;
        rows.push_back(std::to_string(n) + "," + format_double(ratio) + "," +
                       std::to_string(report.defined_docs.at(n)));
    }
    j["novel_ngram_ratio"] = per_n;
    write_report(j, json_path, csv_path, "n,mean_novel_ratio,documents", rows);
    return kExitOk;
}

int run_profile_position(const std::string& in_path, double bin_width,
                         const std::string& json_path, const std::string& csv_path) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto rules = newslead::PrefixRules::bundled();
    newslead::PositionProfileAccumulator acc(bin_width);

    auto in = open_input(in_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto record = newslead::parse_corpus_record(line);
        if (!record.has_value()) continue;
        if (!record->has_summary()) {
            acc.add_skipped();
            continue;
        }
        const auto article = newslead::segment_article(record->id, record->text, stopwords, rules);
        const auto summary_tokens = newslead::tokenize(record->joined_summary(), stopwords);
        acc.add(article, summary_tokens);
    }
    const auto profile = acc.finish();

    ordered_json j;
    j["bin_width"] = profile.bin_width;
    j["skipped_no_summary"] = profile.skipped_no_summary;
    ordered_json bins = ordered_json::array();
    std::vector<std::string> rows;
    for (const auto& bin : profile.bins) {
        bins.push_back(ordered_json{
            {"bin_start", bin.bin_start}, {"mean", bin.mean}, {"count", bin.count}});
        rows.push_back(format_double(bin.bin_start) + "," + format_double(bin.mean) + "," +
                       std::to_string(bin.count));
    }
    j["bins"] = bins;
    write_report(j, json_path, csv_path, "bin_start,mean,count", rows);
    return kExitOk;
}

int run_profile_overlap(const std::string& in_path, const std::string& pairing_name,
                        double bin_width, std::size_t lead_k, const std::string& json_path,
                        const std::string& csv_path) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto rules = newslead::PrefixRules::bundled();
    const auto pairing = newslead::overlap_pairing_from_string(pairing_name);
    newslead::OverlapDistributionAccumulator acc(pairing, bin_width, lead_k);

    auto in = open_input(in_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto record = newslead::parse_corpus_record(line);
        if (!record.has_value()) continue;
        const auto article = newslead::segment_article(record->id, record->text, stopwords, rules);
        const auto summary_tokens = newslead::tokenize(record->joined_summary(), stopwords);
        acc.add(article, summary_tokens, record->has_summary());
    }
    if (acc.count() == 0) throw DataError("no usable articles for the requested pairing");
    const auto dist = acc.finish();

    ordered_json j;
    j["pairing"] = newslead::to_string(dist.label);
    j["bin_width"] = dist.bin_width;
    j["count"] = dist.count;
    j["skipped"] = dist.skipped;
    j["median"] = dist.median;
    ordered_json bins = ordered_json::array();
    std::vector<std::string> rows;
    for (const auto& bin : dist.histogram) {
        bins.push_back(ordered_json{{"bin_start", bin.bin_start}, {"density", bin.density}});
        rows.push_back(format_double(bin.bin_start) + "," + format_double(bin.density));
    }
    j["histogram"] = bins;
    write_report(j, json_path, csv_path, "bin_start,density", rows);
    return kExitOk;
}

int run_buckets(const std::string& references_path, const std::string& candidates_a_path,
                const std::string& candidates_b_path, const newslead::ScoringPolicy& policy,
                const std::string& json_path, const std::string& csv_path) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto references = load_summaries(references_path, "summary");
    const auto side_a = load_summaries(candidates_a_path, "summary");
    const auto side_b = load_summaries(candidates_b_path, "summary");

    std::vector<newslead::BucketRecord> records;
    for (const auto& id : references.order) {
        auto a = side_a.by_id.find(id);
        auto b = side_b.by_id.find(id);
        if (a == side_a.by_id.end() || b == side_b.by_id.end()) continue;
        const auto& refs = references.by_id.at(id);
        newslead::BucketRecord record;
        std::string joined;
        for (const auto& ref : refs) {
            if (!joined.empty()) joined.push_back(' ');
            joined += ref;
        }
        record.ref_length = newslead::tokenize(joined, stopwords).size();
        record.score_a = newslead::headline(
            newslead::score_multi_reference(a->second[0], refs, policy, stopwords), policy.report);
        record.score_b = newslead::headline(
            newslead::score_multi_reference(b->second[0], refs, policy, stopwords), policy.report);
        records.push_back(record);
    }
    if (records.size() < 5) {
        throw DataError("need at least 5 documents present in all three files");
    }
    const auto report = newslead::length_bucket_delta(std::move(records));

    ordered_json j;
    j["variant"] = newslead::to_string(policy.variant);
    j["report"] = newslead::to_string(policy.report);
    ordered_json buckets = ordered_json::array();
    std::vector<std::string> rows;
    static const char* kLabels[5] = {"0-20%", "20-40%", "40-60%", "60-80%", "80-100%"};
    for (std::size_t i = 0; i < report.buckets.size(); ++i) {
        buckets.push_back(ordered_json{{"bucket", kLabels[i]},
                                       {"mean_delta", report.buckets[i].mean_delta},
                                       {"count", report.buckets[i].count}});
        rows.push_back(std::string(kLabels[i]) + "," +
                       format_double(report.buckets[i].mean_delta) + "," +
                       std::to_string(report.buckets[i].count));
    }
    j["buckets"] = buckets;
    write_report(j, json_path, csv_path, "bucket,mean_delta,count", rows);
    return kExitOk;
}

int run_baseline(const std::string& in_path, const std::string& out_path,
                 const std::string& policy_descriptor) {
    const auto stopwords = newslead::Stopwords::bundled();
    const auto rules = newslead::PrefixRules::bundled();
    const auto policy = newslead::LeadPolicy::parse(policy_descriptor);

    auto in = open_input(in_path);
    auto out = open_output(out_path);
    std::string line;
    std::size_t skipped = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto record = newslead::parse_corpus_record(line);
        if (!record.has_value()) {
            ++skipped;
            continue;
        }
        const auto article = newslead::segment_article(record->id, record->text, stopwords, rules);
        if (article.sentences.empty()) {
            ++skipped;
            continue;
        }
        ordered_json j;
        j["id"] = article.id;
        j["summary"] = newslead::lead_baseline(article, policy);
        out << j.dump() << '\n';
    }
    if (skipped > 0) std::cerr << "baseline: skipped " << skipped << " record(s)\n";
    return kExitOk;
}

int run_serve(const std::string& host, int port) {
    newslead::ScoringService service(newslead::Stopwords::bundled(),
                                     newslead::PrefixRules::bundled());
    std::cerr << "serving on " << host << ":" << port << "\n";
    if (!service.run(host, port)) {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"newslead: lead-bias corpus filtering and summarization evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(newslead::kVersion));

    // clean
    auto* clean = app.add_subcommand("clean", "strip article prefixes from a JSONL corpus");
    std::string clean_in, clean_out, clean_patterns;
    clean->add_option("--in", clean_in, "input JSONL")->required();
    clean->add_option("--out", clean_out, "output JSONL")->required();
    clean->add_option("--patterns", clean_patterns, "prefix pattern file (default: bundled)");

    // filter / pairs (shared options)
    std::string config_path;
    newslead::PipelineConfig cli_config;
    std::string f_in, f_out, f_audit, f_stats, f_dedup, f_stopwords, f_patterns;
    std::size_t f_workers = 0;
    auto add_pipeline_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "pipeline config JSON");
        cmd->add_option("--in", f_in, "input corpus JSONL");
        cmd->add_option("--out", f_out, "training pairs JSONL");
        cmd->add_option("--audit", f_audit, "filter decisions JSONL");
        cmd->add_option("--stats", f_stats, "corpus stats JSON");
        cmd->add_option("--dedup-against", f_dedup, "evaluation-set JSONL to blocklist");
        cmd->add_option("--stopwords", f_stopwords, "stopword list file");
        cmd->add_option("--patterns", f_patterns, "prefix pattern file");
        cmd->add_option("--workers", f_workers, "worker threads (default 1)");
    };
    auto* filter = app.add_subcommand("filter", "filter a corpus into training pairs + audit log");
    add_pipeline_options(filter);
    auto* pairs = app.add_subcommand("pairs", "emit training pairs only (no audit log)");
    add_pipeline_options(pairs);

    // stats
    auto* stats = app.add_subcommand("stats", "recompute corpus stats from an audit log");
    std::string stats_decisions, stats_pairs, stats_json, stats_csv;
    stats->add_option("--decisions", stats_decisions, "decisions JSONL")->required();
    stats->add_option("--pairs", stats_pairs, "pairs JSONL to cross-check ids");
    stats->add_option("--json", stats_json, "JSON output path (default: stdout)");
    stats->add_option("--csv", stats_csv, "CSV output path (rejections per rule)");

    // rouge
    auto* rouge = app.add_subcommand("rouge", "corpus ROUGE score for candidates vs references");
    std::string r_candidates, r_references;
    std::string r_variant = "R1", r_report = "F1", r_truncate = "none", r_multi = "max";
    std::string r_config;
    rouge->add_option("--candidates", r_candidates, "candidates JSONL (id, summary)")->required();
    rouge->add_option("--references", r_references, "references JSONL (id, summary)")->required();
    rouge->add_option("--config", r_config, "config JSON supplying scoring defaults");
    auto* r_variant_opt = rouge->add_option("--variant", r_variant, "R1|R2|RL");
    auto* r_report_opt = rouge->add_option("--report", r_report, "F1|Recall");
    auto* r_truncate_opt = rouge->add_option("--truncate", r_truncate, "none|chars:N|match_reference");
    auto* r_multi_opt = rouge->add_option("--multi-ref", r_multi, "max|mean");

    // novelty
    auto* novelty = app.add_subcommand("novelty", "novel n-gram ratios of summaries vs base text");
    std::string n_articles, n_candidates, n_json, n_csv;
    std::size_t n_max = 4, n_lead_k = 3;
    bool n_base_article = false;
    novelty->add_option("--articles", n_articles, "articles JSONL")->required();
    novelty->add_option("--candidates", n_candidates, "candidates JSONL")->required();
    novelty->add_option("--max-n", n_max, "largest n (default 4)");
    novelty->add_option("--lead-k", n_lead_k, "lead sentences as base (default 3)");
    novelty->add_flag("--base-article", n_base_article, "use the whole article as base");
    novelty->add_option("--json", n_json, "JSON output path (default: stdout)");
    novelty->add_option("--csv", n_csv, "CSV output path");

    // profile
    auto* profile = app.add_subcommand(
        "profile", "positional lead-bias profile or overlap-ratio distribution");
    std::string p_in, p_kind = "position", p_pairing = "Lead3VsRest", p_json, p_csv;
    double p_bin_width = 0.05;
    std::size_t p_lead_k = 3;
    profile->add_option("--in", p_in, "corpus JSONL")->required();
    profile->add_option("--kind", p_kind, "position|overlap (default position)");
    profile->add_option("--pairing", p_pairing,
                        "SummaryVsArticle|SummaryVsRest|Lead3VsRest (overlap kind)");
    profile->add_option("--bin-width", p_bin_width, "bin width, must divide 1 (default 0.05)");
    profile->add_option("--lead-k", p_lead_k, "lead size for Rest pairings (default 3)");
    profile->add_option("--json", p_json, "JSON output path (default: stdout)");
    profile->add_option("--csv", p_csv, "CSV output path");

    // buckets
    auto* buckets = app.add_subcommand(
        "buckets", "score deltas between two candidate sets by reference-length quintile");
    std::string b_references, b_cand_a, b_cand_b, b_json, b_csv;
    std::string b_variant = "R1", b_report = "F1", b_truncate = "none", b_multi = "max";
    buckets->add_option("--references", b_references, "references JSONL")->required();
    buckets->add_option("--candidates-a", b_cand_a, "baseline candidates JSONL")->required();
    buckets->add_option("--candidates-b", b_cand_b, "improved candidates JSONL")->required();
    std::string b_config;
    buckets->add_option("--config", b_config, "config JSON supplying scoring defaults");
    auto* b_variant_opt = buckets->add_option("--variant", b_variant, "R1|R2|RL");
    auto* b_report_opt = buckets->add_option("--report", b_report, "F1|Recall");
    auto* b_truncate_opt = buckets->add_option("--truncate", b_truncate, "none|chars:N|match_reference");
    auto* b_multi_opt = buckets->add_option("--multi-ref", b_multi, "max|mean");
    buckets->add_option("--json", b_json, "JSON output path (default: stdout)");
    buckets->add_option("--csv", b_csv, "CSV output path");

    // baseline
    auto* baseline = app.add_subcommand("baseline", "generate extractive lead summaries");
    std::string base_in, base_out, base_policy = "sentences:3";
    baseline->add_option("--in", base_in, "corpus JSONL")->required();
    baseline->add_option("--out", base_out, "candidates JSONL")->required();
    baseline->add_option("--policy", base_policy, "sentences:K or chars:N (default sentences:3)");

    // serve
    auto* serve = app.add_subcommand("serve", "run the summarize/score HTTP service");
    std::string s_host = "127.0.0.1";
    int s_port = 8080;
    serve->add_option("--host", s_host, "bind address (default 127.0.0.1)");
    serve->add_option("--port", s_port, "port (default 8080)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (clean->parsed()) return run_clean(clean_in, clean_out, clean_patterns);
        if (filter->parsed() || pairs->parsed()) {
            newslead::PipelineConfig config = config_path.empty()
                                                  ? newslead::PipelineConfig{}
                                                  : newslead::PipelineConfig::from_file(config_path);
            config.apply_env();
            if (!f_in.empty()) config.io.input = f_in;
            if (!f_out.empty()) config.io.output = f_out;
            if (!f_audit.empty()) config.io.audit = f_audit;
            if (!f_stats.empty()) config.io.stats = f_stats;
            if (!f_dedup.empty()) config.io.dedup_against = f_dedup;
            if (!f_stopwords.empty()) config.stopwords_path = f_stopwords;
            if (!f_patterns.empty()) config.prefix_patterns_path = f_patterns;
            if (f_workers > 0) config.workers = f_workers;
            return run_filter(std::move(config), pairs->parsed());
        }
        if (stats->parsed()) return run_stats(stats_decisions, stats_pairs, stats_json, stats_csv);
        if (rouge->parsed()) {
            newslead::ScoringPolicy policy;
            if (!r_config.empty()) {
                policy = newslead::PipelineConfig::from_file(r_config).scoring;
            }
            if (r_variant_opt->count() > 0) {
                policy.variant = newslead::ScoringPolicy::parse_variant(r_variant);
            }
            if (r_report_opt->count() > 0) {
                policy.report = newslead::ScoringPolicy::parse_report(r_report);
            }
            if (r_truncate_opt->count() > 0) {
                policy.truncation = newslead::ScoringPolicy::parse_truncation(r_truncate);
            }
            if (r_multi_opt->count() > 0) {
                policy.multi_ref = newslead::ScoringPolicy::parse_multi_ref(r_multi);
            }
            return run_rouge(r_candidates, r_references, policy);
        }
        if (novelty->parsed()) {
            return run_novelty(n_articles, n_candidates, n_max, n_lead_k, n_base_article, n_json,
                               n_csv);
        }
        if (profile->parsed()) {
            if (p_kind == "position") {
                return run_profile_position(p_in, p_bin_width, p_json, p_csv);
            }
            if (p_kind == "overlap") {
                return run_profile_overlap(p_in, p_pairing, p_bin_width, p_lead_k, p_json, p_csv);
            }
            std::cerr << "profile: unknown --kind '" << p_kind << "' (position|overlap)\n";
            return kExitUsage;
        }
        if (buckets->parsed()) {
            newslead::ScoringPolicy policy;
            if (!b_config.empty()) {
                policy = newslead::PipelineConfig::from_file(b_config).scoring;
            }
            if (b_variant_opt->count() > 0) {
                policy.variant = newslead::ScoringPolicy::parse_variant(b_variant);
            }
            if (b_report_opt->count() > 0) {
                policy.report = newslead::ScoringPolicy::parse_report(b_report);
            }
            if (b_truncate_opt->count() > 0) {
                policy.truncation = newslead::ScoringPolicy::parse_truncation(b_truncate);
            }
            if (b_multi_opt->count() > 0) {
                policy.multi_ref = newslead::ScoringPolicy::parse_multi_ref(b_multi);
            }
            return run_buckets(b_references, b_cand_a, b_cand_b, policy, b_json, b_csv);
        }
        if (baseline->parsed()) return run_baseline(base_in, base_out, base_policy);
        if (serve->parsed()) return run_serve(s_host, s_port);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
