#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newslead/lead_filter.hpp"
#include "newslead/text.hpp"

// Corpus-level statistics: positional lead-bias profile, overlap-ratio
// distributions with exact medians, novel n-gram ratios, length-bucket score
// deltas, and filter-run summary stats. All accumulators merge per-article
// contributions with plain count/sum state, so results do not depend on how
// work was parallelized as long as accumulation order is fixed.

namespace newslead {

/// Mean value per normalized-position bin over [0,1).
struct BinnedProfile {
    struct Bin {
        double bin_start = 0.0;
        double mean = 0.0;
        std::size_t count = 0;
    };
    double bin_width = 0.05;
    std::vector<Bin> bins;
    std::size_t skipped_no_summary = 0;
};

/// Per-sentence summary-overlap ratios bucketed by normalized sentence
/// position. The per-sentence ratio uses all word types, stopwords included.
class PositionProfileAccumulator {
public:
    /// Throws std::invalid_argument unless bin_width evenly divides 1.
    explicit PositionProfileAccumulator(double bin_width = 0.05);

    /// Articles without a summary are counted and skipped.
    void add(const SegmentedArticle& article, std::span<const Token> summary_tokens);
    void add_skipped() { ++skipped_; }

    BinnedProfile finish() const;

private:
    double bin_width_;
    std::vector<double> sums_;
    std::vector<std::size_t> counts_;
    std::size_t skipped_ = 0;
};

enum class OverlapPairing { SummaryVsArticle, SummaryVsRest, Lead3VsRest };

std::string_view to_string(OverlapPairing pairing);
OverlapPairing overlap_pairing_from_string(std::string_view name);

/// Histogram (normalized to unit area) and exact median of per-article
/// overlap ratios under one pairing.
struct RatioDistribution {
    struct Bin {
        double bin_start = 0.0;
        double density = 0.0;
    };
    OverlapPairing label = OverlapPairing::Lead3VsRest;
    double bin_width = 0.05;
    std::vector<Bin> histogram;
    double median = 0.0;
    std::size_t count = 0;
    std::size_t skipped = 0;
};

/// Per-article type-level non-stopword overlap ratio under the pairing.
/// nullopt when the numerator side has no non-stopword types or a required
/// summary is missing.
std::optional<double> pairing_ratio(const SegmentedArticle& article,
                                    std::span<const Token> summary_tokens, bool has_summary,
                                    OverlapPairing pairing, std::size_t lead_k);

class OverlapDistributionAccumulator {
public:
    explicit OverlapDistributionAccumulator(OverlapPairing pairing, double bin_width = 0.05,
                                            std::size_t lead_k = 3);

    void add(const SegmentedArticle& article, std::span<const Token> summary_tokens,
             bool has_summary);

    /// Exact median via selection (lower middle for even counts, so the
    /// median is always an observed ratio). Throws std::invalid_argument when
    /// no ratios were collected.
    RatioDistribution finish() const;

    std::size_t count() const { return ratios_.size(); }

private:
    OverlapPairing pairing_;
    double bin_width_;
    std::size_t lead_k_;
    std::vector<double> ratios_;
    std::size_t skipped_ = 0;
};

/// Exact selection median: lower middle element for even counts.
double selection_median(std::vector<double> values);

/// Fraction of distinct n-grams in `summary` that do not occur in `base`.
/// nullopt when the summary yields no n-grams.
std::optional<double> novel_ngram_ratio(std::span<const std::string> summary,
                                        std::span<const std::string> base, std::size_t n);

/// Corpus means of novel n-gram ratios for n in [1, max_n].
struct NoveltyReport {
    std::map<std::size_t, double> per_n;            // mean ratio over defined documents
    std::map<std::size_t, std::size_t> defined_docs;
};

class NoveltyAccumulator {
public:
    explicit NoveltyAccumulator(std::size_t max_n = 4);
    void add(std::span<const std::string> summary, std::span<const std::string> base);
    NoveltyReport finish() const;

private:
    std::size_t max_n_;
    std::vector<double> sums_;
    std::vector<std::size_t> counts_;
};

/// One scored document for the length-bucket analysis.
struct BucketRecord {
    std::size_t ref_length = 0;
    double score_a = 0.0;
    double score_b = 0.0;
};

/// Mean (score_b - score_a) per reference-length quintile.
struct BucketDeltaReport {
    struct Bucket {
        double mean_delta = 0.0;
        std::size_t count = 0;
    };
    std::array<Bucket, 5> buckets{};
};

/// Sort by ref_length (stable), split into five contiguous buckets with the
/// remainder spread to the earliest buckets, and average the deltas.
/// Throws std::invalid_argument on fewer than 5 records.
BucketDeltaReport length_bucket_delta(std::vector<BucketRecord> records);

/// Aggregates over a filter run. Word statistics cover the retained set (the
/// emitted training data); rejection counts cover every decision.
struct CorpusStats {
    std::size_t article_count = 0;
    std::size_t passed_count = 0;
    double retention_ratio = 0.0;
    double mean_lead_words = 0.0;   // over passed articles
    double mean_rest_words = 0.0;   // over passed articles
    unsigned long long total_words = 0;  // lead + rest over passed articles
    std::map<FilterReason, std::size_t> rejection_counts;
    std::optional<double> median_retained_overlap;
};

class CorpusStatsAccumulator {
public:
    void add(const FilterDecision& decision);
    CorpusStats finish() const;
    std::size_t count() const { return total_; }

private:
    std::size_t total_ = 0;
    std::size_t passed_ = 0;
    unsigned long long lead_words_ = 0;
    unsigned long long rest_words_ = 0;
    std::map<FilterReason, std::size_t> rejections_;
    std::vector<double> retained_ratios_;
};

}  // namespace newslead
