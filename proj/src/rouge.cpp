#include "newslead/rouge.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <unordered_map>

namespace newslead {

namespace {

double f1_of(double precision, double recall) {
    const double denom = precision + recall;
    if (denom == 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

// Joined n-gram keys; '\x1f' cannot appear in token surfaces.
std::unordered_map<std::string, std::size_t> ngram_counts(std::span<const std::string> tokens,
                                                          std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference,
                   std::size_t n) {
    if (n == 0) throw std::invalid_argument("rouge_n: n must be positive");

    const std::size_t cand_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    const std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;

    RougeScore score;
    if (cand_total == 0 || ref_total == 0) return score;

    const auto cand_counts = ngram_counts(candidate, n);
    const auto ref_counts = ngram_counts(reference, n);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) clipped += std::min(count, it->second);
    }

    score.precision = static_cast<double>(clipped) / static_cast<double>(cand_total);
    score.recall = static_cast<double>(clipped) / static_cast<double>(ref_total);
    score.f1 = f1_of(score.precision, score.recall);
    return score;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0;
    // Two-row DP over the shorter sequence.
    if (b.size() > a.size()) std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
    RougeScore score;
    if (candidate.empty() || reference.empty()) return score;
    const double lcs = static_cast<double>(lcs_length(candidate, reference));
    score.precision = lcs / static_cast<double>(candidate.size());
    score.recall = lcs / static_cast<double>(reference.size());
    score.f1 = f1_of(score.precision, score.recall);
    return score;
}

std::vector<std::string> apply_truncation(std::string_view candidate_text,
                                          std::size_t reference_token_count,
                                          const ScoringPolicy& policy,
                                          const Stopwords& stopwords) {
    switch (policy.truncation.kind) {
        case Truncation::Kind::None:
            return surfaces(tokenize(candidate_text, stopwords));
        case Truncation::Kind::Chars: {
            const auto cut = utf8_prefix(candidate_text, policy.truncation.chars);
            return surfaces(tokenize(cut, stopwords));
        }
        case Truncation::Kind::MatchReferenceTokens: {
            auto tokens = surfaces(tokenize(candidate_text, stopwords));
            if (tokens.size() > reference_token_count) tokens.resize(reference_token_count);
            return tokens;
        }
    }
    return {};
}

RougeScore score_pair(std::string_view candidate, std::string_view reference,
                      const ScoringPolicy& policy, const Stopwords& stopwords) {
    const auto ref_tokens = surfaces(tokenize(reference, stopwords));
    const auto cand_tokens = apply_truncation(candidate, ref_tokens.size(), policy, stopwords);
    switch (policy.variant) {
        case RougeVariant::R1: return rouge_n(cand_tokens, ref_tokens, 1);
        case RougeVariant::R2: return rouge_n(cand_tokens, ref_tokens, 2);
        case RougeVariant::RL: return rouge_l(cand_tokens, ref_tokens);
    }
    return {};
}

RougeScore score_multi_reference(std::string_view candidate,
                                 std::span<const std::string> references,
                                 const ScoringPolicy& policy, const Stopwords& stopwords) {
    if (references.empty()) {
        throw std::invalid_argument("score_multi_reference: reference list is empty");
    }
    if (policy.multi_ref == MultiRef::Max) {
        RougeScore best;
        bool first = true;
        for (const auto& reference : references) {
            RougeScore s = score_pair(candidate, reference, policy, stopwords);
            if (first || headline(s, policy.report) > headline(best, policy.report)) {
                best = s;
                first = false;
            }
        }
        return best;
    }
    RougeScore mean;
    for (const auto& reference : references) {
        RougeScore s = score_pair(candidate, reference, policy, stopwords);
        mean.precision += s.precision;
        mean.recall += s.recall;
        mean.f1 += s.f1;
    }
    const double n = static_cast<double>(references.size());
    mean.precision /= n;
    mean.recall /= n;
    mean.f1 /= n;
    return mean;
}

double headline(const RougeScore& score, ReportField report) {
    return report == ReportField::F1 ? score.f1 : score.recall;
}

void CorpusScorer::KahanSum::add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
}

void CorpusScorer::add(const RougeScore& score) {
    precision_.add(score.precision);
    recall_.add(score.recall);
    f1_.add(score.f1);
    ++count_;
}

RougeScore CorpusScorer::mean() const {
    if (count_ == 0) throw std::invalid_argument("CorpusScorer: no documents scored");
    const double n = static_cast<double>(count_);
    return RougeScore{precision_.sum / n, recall_.sum / n, f1_.sum / n};
}

// ---------------------------------------------------------------------------
// Policy string forms
// ---------------------------------------------------------------------------

std::string_view to_string(RougeVariant v) {
    switch (v) {
        case RougeVariant::R1: return "R1";
        case RougeVariant::R2: return "R2";
        case RougeVariant::RL: return "RL";
    }
    return "R1";
}

std::string_view to_string(ReportField r) {
    return r == ReportField::F1 ? "F1" : "Recall";
}

std::string_view to_string(MultiRef m) { return m == MultiRef::Max ? "max" : "mean"; }

std::string to_string(const Truncation& t) {
    switch (t.kind) {
        case Truncation::Kind::None: return "none";
        case Truncation::Kind::Chars: return "chars:" + std::to_string(t.chars);
        case Truncation::Kind::MatchReferenceTokens: return "match_reference";
    }
    return "none";
}

RougeVariant ScoringPolicy::parse_variant(std::string_view s) {
    if (s == "R1" || s == "r1") return RougeVariant::R1;
    if (s == "R2" || s == "r2") return RougeVariant::R2;
    if (s == "RL" || s == "rl") return RougeVariant::RL;
    throw std::invalid_argument("unknown ROUGE variant: " + std::string(s));
}

ReportField ScoringPolicy::parse_report(std::string_view s) {
    if (s == "F1" || s == "f1") return ReportField::F1;
    if (s == "Recall" || s == "recall") return ReportField::Recall;
    throw std::invalid_argument("unknown report field: " + std::string(s));
}

Truncation ScoringPolicy::parse_truncation(std::string_view s) {
    Truncation t;
    if (s == "none" || s.empty()) {
        t.kind = Truncation::Kind::None;
        return t;
    }
    if (s == "match_reference") {
        t.kind = Truncation::Kind::MatchReferenceTokens;
        return t;
    }
    if (s.starts_with("chars:")) {
        const auto num = s.substr(6);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec == std::errc() && ptr == num.data() + num.size() && value >= 1) {
            t.kind = Truncation::Kind::Chars;
            t.chars = value;
            return t;
        }
    }
    throw std::invalid_argument("unknown truncation: " + std::string(s));
}

MultiRef ScoringPolicy::parse_multi_ref(std::string_view s) {
    if (s == "max") return MultiRef::Max;
    if (s == "mean") return MultiRef::Mean;
    throw std::invalid_argument("unknown multi-reference mode: " + std::string(s));
}

// ---------------------------------------------------------------------------
// Lead baseline
// ---------------------------------------------------------------------------

LeadPolicy LeadPolicy::parse(std::string_view descriptor) {
    LeadPolicy policy;
    std::string_view num;
    if (descriptor.starts_with("sentences:")) {
        policy.kind = Kind::Sentences;
        num = descriptor.substr(10);
    } else if (descriptor.starts_with("chars:")) {
        policy.kind = Kind::Chars;
        num = descriptor.substr(6);
    } else {
        throw std::invalid_argument("unknown lead policy: " + std::string(descriptor));
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size() || value == 0) {
        throw std::invalid_argument("invalid lead policy count: " + std::string(descriptor));
    }
    (policy.kind == Kind::Sentences ? policy.k : policy.chars) = value;
    return policy;
}

std::string LeadPolicy::to_string() const {
    return kind == Kind::Sentences ? "sentences:" + std::to_string(k)
                                   : "chars:" + std::to_string(chars);
}

std::string lead_baseline(const SegmentedArticle& article, const LeadPolicy& policy) {
    if (article.sentences.empty()) {
        throw std::invalid_argument("lead_baseline: article has no sentences");
    }
    std::string joined;
    const std::size_t take = policy.kind == LeadPolicy::Kind::Sentences
                                 ? std::min(policy.k, article.sentences.size())
                                 : article.sentences.size();
    for (std::size_t i = 0; i < take; ++i) {
        if (!joined.empty()) joined.push_back(' ');
        joined += collapse_whitespace(article.sentences[i].text);
    }
    if (policy.kind == LeadPolicy::Kind::Chars) {
        return std::string(utf8_prefix(joined, policy.chars));
    }
    return joined;
}

}  // namespace newslead
