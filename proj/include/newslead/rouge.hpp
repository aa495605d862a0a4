#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newslead/lead_filter.hpp"
#include "newslead/text.hpp"

// ROUGE-1/2/L scoring with per-dataset truncation and aggregation policies,
// plus extractive lead-baseline generation.

namespace newslead {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

enum class RougeVariant { R1, R2, RL };
enum class ReportField { F1, Recall };
enum class MultiRef { Max, Mean };

/// Candidate truncation applied before scoring.
struct Truncation {
    enum class Kind { None, Chars, MatchReferenceTokens };
    Kind kind = Kind::None;
    std::size_t chars = 75;  // code points, used when kind == Chars
};

struct ScoringPolicy {
    RougeVariant variant = RougeVariant::R1;
    ReportField report = ReportField::F1;
    Truncation truncation;
    MultiRef multi_ref = MultiRef::Max;

    /// Round-trip string forms used by CLI flags and the scoring service:
    /// variant "R1"|"R2"|"RL", report "F1"|"Recall",
    /// truncation "none"|"chars:N"|"match_reference", multi_ref "max"|"mean".
    static RougeVariant parse_variant(std::string_view s);
    static ReportField parse_report(std::string_view s);
    static Truncation parse_truncation(std::string_view s);
    static MultiRef parse_multi_ref(std::string_view s);
};

std::string_view to_string(RougeVariant v);
std::string_view to_string(ReportField r);
std::string_view to_string(MultiRef m);
std::string to_string(const Truncation& t);

/// Clipped n-gram overlap. Zero counts yield zero scores, not errors.
/// Throws std::invalid_argument when n == 0.
RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
                   std::size_t n);

/// Longest-common-subsequence score with balanced F1.
RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

/// LCS length (exposed for tests and the RL variant).
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Tokenize the candidate under the policy's truncation rule: Chars cuts the
/// raw string first (partial trailing word kept); MatchReferenceTokens keeps
/// the first reference_token_count tokens.
std::vector<std::string> apply_truncation(std::string_view candidate_text,
                                          std::size_t reference_token_count,
                                          const ScoringPolicy& policy,
                                          const Stopwords& stopwords);

/// Score one candidate against one reference under the policy.
RougeScore score_pair(std::string_view candidate, std::string_view reference,
                      const ScoringPolicy& policy, const Stopwords& stopwords);

/// Score against several references, combined per policy.multi_ref: Max picks
/// the reference maximizing the report field (ties: first), Mean averages
/// component-wise. Throws std::invalid_argument on an empty reference list.
RougeScore score_multi_reference(std::string_view candidate,
                                 std::span<const std::string> references,
                                 const ScoringPolicy& policy, const Stopwords& stopwords);

/// The headline number selected by the policy's report field.
double headline(const RougeScore& score, ReportField report);

/// Streaming corpus aggregation: arithmetic mean of per-document scores.
/// Compensated summation keeps the result independent of how documents were
/// scored in parallel, as long as add() is called in a fixed order.
class CorpusScorer {
public:
    void add(const RougeScore& score);
    std::size_t count() const { return count_; }
    /// Throws std::invalid_argument when no documents were added.
    RougeScore mean() const;

private:
    struct KahanSum {
        double sum = 0.0;
        double carry = 0.0;
        void add(double x);
    };
    KahanSum precision_, recall_, f1_;
    std::size_t count_ = 0;
};

/// Extractive lead summary: first k sentences or the leading N characters.
struct LeadPolicy {
    enum class Kind { Sentences, Chars };
    Kind kind = Kind::Sentences;
    std::size_t k = 3;
    std::size_t chars = 75;

    /// Parses "sentences:K" or "chars:N". Throws std::invalid_argument.
    static LeadPolicy parse(std::string_view descriptor);
    std::string to_string() const;
};

/// Generate the lead-baseline summary. Sentences(k): first min(k, n)
/// sentences joined by single spaces; Chars(n): first n code points of the
/// whitespace-normalized article. Throws std::invalid_argument when the
/// article has no sentences.
std::string lead_baseline(const SegmentedArticle& article, const LeadPolicy& policy);

}  // namespace newslead
