#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "newslead/text.hpp"

// Lead/Rest splitting, the overlap-ratio statistic, the five-rule article
// filter, evaluation-set dedup and training-pair emission.

namespace newslead {

/// Sentence- and token-level view of one document. `text` is the cleaned
/// source; `word_count` is the sum of per-sentence token counts, stopwords
/// included.
struct SegmentedArticle {
    std::string id;
    std::string text;
    std::vector<Sentence> sentences;
    std::vector<std::vector<Token>> tokens;  // parallel to sentences
    std::size_t word_count = 0;
};

/// Clean, segment and tokenize one document.
SegmentedArticle segment_article(std::string id, std::string_view raw_text,
                                 const Stopwords& stopwords, const PrefixRules& rules);

/// Segment and tokenize already-cleaned text.
SegmentedArticle segment_article(std::string id, std::string_view cleaned_text,
                                 const Stopwords& stopwords);

/// First-k / remainder partition of an article. Views into the article; the
/// article must outlive the split.
struct LeadSplit {
    std::span<const Sentence> lead;
    std::span<const Sentence> rest;
    std::span<const std::vector<Token>> lead_tokens;
    std::span<const std::vector<Token>> rest_tokens;
    std::size_t lead_words = 0;
    std::size_t rest_words = 0;
};

/// Split into the first min(k, n) sentences and the remainder.
/// Throws std::invalid_argument when k == 0 or the article has no sentences.
LeadSplit split_lead(const SegmentedArticle& article, std::size_t k);

/// Fraction of distinct non-stopword types in `lead` that also occur in
/// `rest`. nullopt when the lead has no non-stopword types (the
/// EmptyLeadContent signal).
std::optional<double> overlap_ratio(std::span<const std::vector<Token>> lead,
                                    std::span<const std::vector<Token>> rest);

/// Type set helper shared with the analysis module: distinct token surfaces,
/// optionally restricted to non-stopwords.
std::unordered_set<std::string> type_set(std::span<const std::vector<Token>> sentences,
                                         bool non_stopwords_only);

/// True when some rest sentence equals the lead sentence after trimming and
/// collapsing internal whitespace. Case-sensitive.
bool exact_repeat_check(const Sentence& lead_sentence, std::span<const Sentence> rest);

/// Word-count bounds, sentence-count floor and overlap threshold. Defaults
/// are the production filter values.
struct FilterConfig {
    std::size_t lead_min_words = 10;
    std::size_t lead_max_words = 150;
    std::size_t rest_min_words = 150;
    std::size_t rest_max_words = 1200;
    std::size_t min_sentences = 6;
    double overlap_threshold = 0.65;
    std::size_t lead_k = 3;

    /// Throws std::invalid_argument when bounds are inconsistent.
    void validate() const;
};

enum class FilterReason {
    LeadTooShort,
    LeadTooLong,
    RestTooShort,
    RestTooLong,
    TooFewSentences,
    LeadRepeatedInRest,
    OverlapBelowThreshold,
    EmptyLeadContent,
    Duplicate,
};

std::string_view to_string(FilterReason reason);
FilterReason filter_reason_from_string(std::string_view name);

/// Verdict for one article: every violated rule, in rule order, plus the
/// measured quantities. passed ⇔ reasons is empty.
struct FilterDecision {
    std::string id;
    bool passed = false;
    std::vector<FilterReason> reasons;
    std::optional<double> overlap_ratio;
    std::size_t lead_words = 0;
    std::size_t rest_words = 0;
    std::size_t sentence_count = 0;
};

/// Apply every rule (sentence count, lead/rest word bounds, exact repeat,
/// overlap threshold) without short-circuiting, so the decision reports all
/// violations. An article passes the threshold rule when ratio >= threshold.
FilterDecision filter_article(const SegmentedArticle& article, const FilterConfig& config);

/// Fingerprint set built from evaluation articles; read-only after building.
class Blocklist {
public:
    void add_text(std::string_view text) { fingerprints_.insert(fingerprint(text)); }
    bool contains_text(std::string_view text) const {
        return fingerprints_.contains(fingerprint(text));
    }
    std::size_t size() const { return fingerprints_.size(); }

private:
    std::unordered_set<std::uint64_t> fingerprints_;
};

/// True (keep) iff the article's fingerprint is not blocklisted.
bool dedup_filter(const SegmentedArticle& article, const Blocklist& blocklist);

/// One (Rest -> Lead) example ready for seq2seq training. Sentence texts are
/// whitespace-collapsed and joined by single spaces.
struct TrainingPair {
    std::string id;
    std::string source;
    std::string target;
    double overlap_ratio = 0.0;
};

/// Emit the pair for a passing article. Throws std::logic_error when called
/// with a failed decision.
TrainingPair emit_training_pair(const SegmentedArticle& article, const FilterDecision& decision,
                                std::size_t lead_k);

}  // namespace newslead
