#include "newslead/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace newslead {

namespace {

std::size_t bin_count_for(double bin_width) {
    if (bin_width <= 0.0 || bin_width > 1.0) {
        throw std::invalid_argument("bin width must be in (0, 1]");
    }
    const double bins = 1.0 / bin_width;
    const double rounded = std::round(bins);
    if (std::abs(bins - rounded) > 1e-9) {
        throw std::invalid_argument("bin width must divide 1 evenly");
    }
    return static_cast<std::size_t>(rounded);
}

std::size_t bin_index(double value, double bin_width, std::size_t bins) {
    auto idx = static_cast<std::size_t>(value / bin_width);
    return std::min(idx, bins - 1);  // ratio 1.0 lands in the last bin
}

std::unordered_set<std::string> token_types(std::span<const Token> tokens,
                                            bool non_stopwords_only) {
    std::unordered_set<std::string> types;
    for (const auto& token : tokens) {
        if (non_stopwords_only && token.is_stopword) continue;
        types.insert(token.surface);
    }
    return types;
}

std::size_t intersection_size(const std::unordered_set<std::string>& a,
                              const std::unordered_set<std::string>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t shared = 0;
    for (const auto& item : small) {
        if (large.contains(item)) ++shared;
    }
    return shared;
}

}  // namespace

// ---------------------------------------------------------------------------
// Position profile (lead-bias curve)
// ---------------------------------------------------------------------------

PositionProfileAccumulator::PositionProfileAccumulator(double bin_width)
    : bin_width_(bin_width) {
    const std::size_t bins = bin_count_for(bin_width);
    sums_.assign(bins, 0.0);
    counts_.assign(bins, 0);
}

void PositionProfileAccumulator::add(const SegmentedArticle& article,
                                     std::span<const Token> summary_tokens) {
    const auto summary_types = token_types(summary_tokens, /*non_stopwords_only=*/false);
    const std::size_t n = article.sentences.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto sentence_types =
            token_types(article.tokens[i], /*non_stopwords_only=*/false);
        if (sentence_types.empty()) continue;
        const double ratio =
            static_cast<double>(intersection_size(sentence_types, summary_types)) /
            static_cast<double>(sentence_types.size());
        const double position = static_cast<double>(i) / static_cast<double>(n);
        const std::size_t bin = bin_index(position, bin_width_, sums_.size());
        sums_[bin] += ratio;
        counts_[bin] += 1;
    }
}

BinnedProfile PositionProfileAccumulator::finish() const {
    BinnedProfile profile;
    profile.bin_width = bin_width_;
    profile.skipped_no_summary = skipped_;
    profile.bins.reserve(sums_.size());
    for (std::size_t i = 0; i < sums_.size(); ++i) {
        BinnedProfile::Bin bin;
        bin.bin_start = static_cast<double>(i) * bin_width_;
        bin.count = counts_[i];
        bin.mean = counts_[i] > 0 ? sums_[i] / static_cast<double>(counts_[i]) : 0.0;
        profile.bins.push_back(bin);
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Overlap-ratio distribution
// ---------------------------------------------------------------------------

std::string_view to_string(OverlapPairing pairing) {
    switch (pairing) {
        case OverlapPairing::SummaryVsArticle: return "SummaryVsArticle";
        case OverlapPairing::SummaryVsRest: return "SummaryVsRest";
        case OverlapPairing::Lead3VsRest: return "Lead3VsRest";
    }
    return "Lead3VsRest";
}

OverlapPairing overlap_pairing_from_string(std::string_view name) {
    if (name == "SummaryVsArticle" || name == "summary-article") {
        return OverlapPairing::SummaryVsArticle;
    }
    if (name == "SummaryVsRest" || name == "summary-rest") return OverlapPairing::SummaryVsRest;
    if (name == "Lead3VsRest" || name == "lead-rest") return OverlapPairing::Lead3VsRest;
    throw std::invalid_argument("unknown overlap pairing: " + std::string(name));
}

std::optional<double> pairing_ratio(const SegmentedArticle& article,
                                    std::span<const Token> summary_tokens, bool has_summary,
                                    OverlapPairing pairing, std::size_t lead_k) {
    std::unordered_set<std::string> numerator_types;
    std::unordered_set<std::string> base_types;

    const std::size_t lead_n = std::min(lead_k, article.sentences.size());
    auto all_tokens = std::span<const std::vector<Token>>(article.tokens);

    switch (pairing) {
        case OverlapPairing::SummaryVsArticle:
            if (!has_summary) return std::nullopt;
            numerator_types = token_types(summary_tokens, true);
            base_types = type_set(all_tokens, true);
            break;
        case OverlapPairing::SummaryVsRest:
            if (!has_summary) return std::nullopt;
            numerator_types = token_types(summary_tokens, true);
            base_types = type_set(all_tokens.subspan(lead_n), true);
            break;
        case OverlapPairing::Lead3VsRest:
            numerator_types = type_set(all_tokens.first(lead_n), true);
            base_types = type_set(all_tokens.subspan(lead_n), true);
            break;
    }
    if (numerator_types.empty()) return std::nullopt;
    return static_cast<double>(intersection_size(numerator_types, base_types)) /
           static_cast<double>(numerator_types.size());
}

OverlapDistributionAccumulator::OverlapDistributionAccumulator(OverlapPairing pairing,
                                                               double bin_width,
                                                               std::size_t lead_k)
    : pairing_(pairing), bin_width_(bin_width), lead_k_(lead_k) {
    bin_count_for(bin_width);  // validate
}

void OverlapDistributionAccumulator::add(const SegmentedArticle& article,
                                         std::span<const Token> summary_tokens,
                                         bool has_summary) {
    const auto ratio = pairing_ratio(article, summary_tokens, has_summary, pairing_, lead_k_);
    if (ratio.has_value()) {
        ratios_.push_back(*ratio);
    } else {
        ++skipped_;
    }
}

double selection_median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    return values[mid];
}

RatioDistribution OverlapDistributionAccumulator::finish() const {
    if (ratios_.empty()) {
        throw std::invalid_argument("overlap distribution: no ratios collected");
    }
    RatioDistribution dist;
    dist.label = pairing_;
    dist.bin_width = bin_width_;
    dist.count = ratios_.size();
    dist.skipped = skipped_;

    const std::size_t bins = bin_count_for(bin_width_);
    std::vector<std::size_t> counts(bins, 0);
    for (double r : ratios_) counts[bin_index(r, bin_width_, bins)] += 1;
    dist.histogram.reserve(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        RatioDistribution::Bin bin;
        bin.bin_start = static_cast<double>(i) * bin_width_;
        bin.density = static_cast<double>(counts[i]) /
                      (static_cast<double>(ratios_.size()) * bin_width_);
        dist.histogram.push_back(bin);
    }
    dist.median = selection_median(ratios_);
    return dist;
}

// ---------------------------------------------------------------------------
// Novel n-grams
// ---------------------------------------------------------------------------

std::optional<double> novel_ngram_ratio(std::span<const std::string> summary,
                                        std::span<const std::string> base, std::size_t n) {
    const auto summary_grams = ngrams(summary, n);
    if (summary_grams.empty()) return std::nullopt;
    const auto base_grams = ngrams(base, n);
    std::size_t novel = 0;
    for (const auto& gram : summary_grams) {
        if (!base_grams.contains(gram)) ++novel;
    }
    return static_cast<double>(novel) / static_cast<double>(summary_grams.size());
}

NoveltyAccumulator::NoveltyAccumulator(std::size_t max_n) : max_n_(max_n) {
    sums_.assign(max_n_, 0.0);
    counts_.assign(max_n_, 0);
}

void NoveltyAccumulator::add(std::span<const std::string> summary,
                             std::span<const std::string> base) {
    for (std::size_t n = 1; n <= max_n_; ++n) {
        const auto ratio = novel_ngram_ratio(summary, base, n);
        if (ratio.has_value()) {
            sums_[n - 1] += *ratio;
            counts_[n - 1] += 1;
        }
    }
}

NoveltyReport NoveltyAccumulator::finish() const {
    NoveltyReport report;
    for (std::size_t n = 1; n <= max_n_; ++n) {
        report.defined_docs[n] = counts_[n - 1];
        if (counts_[n - 1] > 0) {
            report.per_n[n] = sums_[n - 1] / static_cast<double>(counts_[n - 1]);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Length-bucket deltas
// ---------------------------------------------------------------------------

BucketDeltaReport length_bucket_delta(std::vector<BucketRecord> records) {
    if (records.size() < 5) {
        throw std::invalid_argument("length_bucket_delta: need at least 5 records");
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const BucketRecord& a, const BucketRecord& b) {
                         return a.ref_length < b.ref_length;
                     });

    BucketDeltaReport report;
    const std::size_t base = records.size() / 5;
    const std::size_t remainder = records.size() % 5;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < 5; ++b) {
        const std::size_t size = base + (b < remainder ? 1 : 0);
        double sum = 0.0;
        for (std::size_t i = offset; i < offset + size; ++i) {
            sum += records[i].score_b - records[i].score_a;
        }
        report.buckets[b].count = size;
        report.buckets[b].mean_delta = size > 0 ? sum / static_cast<double>(size) : 0.0;
        offset += size;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Corpus stats
// ---------------------------------------------------------------------------

void CorpusStatsAccumulator::add(const FilterDecision& decision) {
    ++total_;
    for (FilterReason reason : decision.reasons) rejections_[reason] += 1;
    if (decision.passed) {
        ++passed_;
        lead_words_ += decision.lead_words;
        rest_words_ += decision.rest_words;
        if (decision.overlap_ratio.has_value()) {
            retained_ratios_.push_back(*decision.overlap_ratio);
        }
    }
}

CorpusStats CorpusStatsAccumulator::finish() const {
    CorpusStats stats;
    stats.article_count = total_;
    stats.passed_count = passed_;
    stats.retention_ratio =
        total_ > 0 ? static_cast<double>(passed_) / static_cast<double>(total_) : 0.0;
    stats.mean_lead_words =
        passed_ > 0 ? static_cast<double>(lead_words_) / static_cast<double>(passed_) : 0.0;
    stats.mean_rest_words =
        passed_ > 0 ? static_cast<double>(rest_words_) / static_cast<double>(passed_) : 0.0;
    stats.total_words = lead_words_ + rest_words_;
    stats.rejection_counts = rejections_;
    if (!retained_ratios_.empty()) {
        stats.median_retained_overlap = selection_median(retained_ratios_);
    }
    return stats;
}

}  // namespace newslead
