#include "newslead/lead_filter.hpp"

#include <algorithm>
#include <stdexcept>

namespace newslead {

SegmentedArticle segment_article(std::string id, std::string_view cleaned_text,
                                 const Stopwords& stopwords) {
    SegmentedArticle article;
    article.id = std::move(id);
    article.text = std::string(cleaned_text);
    article.sentences = segment_sentences(article.text);
    article.tokens.reserve(article.sentences.size());
    for (const auto& sentence : article.sentences) {
        article.tokens.push_back(tokenize(sentence.text, stopwords));
        article.word_count += article.tokens.back().size();
    }
    return article;
}

SegmentedArticle segment_article(std::string id, std::string_view raw_text,
                                 const Stopwords& stopwords, const PrefixRules& rules) {
    return segment_article(std::move(id), rules.clean(raw_text), stopwords);
}

LeadSplit split_lead(const SegmentedArticle& article, std::size_t k) {
    if (k == 0) throw std::invalid_argument("split_lead: k must be positive");
    if (article.sentences.empty()) {
        throw std::invalid_argument("split_lead: article has no sentences");
    }
    const std::size_t n = article.sentences.size();
    const std::size_t lead_n = std::min(k, n);

    LeadSplit split;
    split.lead = std::span<const Sentence>(article.sentences).first(lead_n);
    split.rest = std::span<const Sentence>(article.sentences).subspan(lead_n);
    split.lead_tokens = std::span<const std::vector<Token>>(article.tokens).first(lead_n);
    split.rest_tokens = std::span<const std::vector<Token>>(article.tokens).subspan(lead_n);
    for (const auto& t : split.lead_tokens) split.lead_words += t.size();
    for (const auto& t : split.rest_tokens) split.rest_words += t.size();
    return split;
}

std::unordered_set<std::string> type_set(std::span<const std::vector<Token>> sentences,
                                         bool non_stopwords_only) {
    std::unordered_set<std::string> types;
    for (const auto& sentence : sentences) {
        for (const auto& token : sentence) {
            if (non_stopwords_only && token.is_stopword) continue;
            types.insert(token.surface);
        }
    }
    return types;
}

std::optional<double> overlap_ratio(std::span<const std::vector<Token>> lead,
                                    std::span<const std::vector<Token>> rest) {
    const auto lead_types = type_set(lead, /*non_stopwords_only=*/true);
    if (lead_types.empty()) return std::nullopt;
    const auto rest_types = type_set(rest, /*non_stopwords_only=*/true);
    std::size_t shared = 0;
    for (const auto& type : lead_types) {
        if (rest_types.contains(type)) ++shared;
    }
    return static_cast<double>(shared) / static_cast<double>(lead_types.size());
}

bool exact_repeat_check(const Sentence& lead_sentence, std::span<const Sentence> rest) {
    const std::string needle = collapse_whitespace(lead_sentence.text);
    for (const auto& sentence : rest) {
        if (collapse_whitespace(sentence.text) == needle) return true;
    }
    return false;
}

void FilterConfig::validate() const {
    if (lead_min_words > lead_max_words || rest_min_words > rest_max_words) {
        throw std::invalid_argument("FilterConfig: min bound exceeds max bound");
    }
    if (overlap_threshold < 0.0 || overlap_threshold > 1.0) {
        throw std::invalid_argument("FilterConfig: overlap_threshold outside [0,1]");
    }
    if (lead_k == 0) throw std::invalid_argument("FilterConfig: lead_k must be positive");
}

std::string_view to_string(FilterReason reason) {
    switch (reason) {
        case FilterReason::LeadTooShort: return "LeadTooShort";
        case FilterReason::LeadTooLong: return "LeadTooLong";
        case FilterReason::RestTooShort: return "RestTooShort";
        case FilterReason::RestTooLong: return "RestTooLong";
        case FilterReason::TooFewSentences: return "TooFewSentences";
        case FilterReason::LeadRepeatedInRest: return "LeadRepeatedInRest";
        case FilterReason::OverlapBelowThreshold: return "OverlapBelowThreshold";
        case FilterReason::EmptyLeadContent: return "EmptyLeadContent";
        case FilterReason::Duplicate: return "Duplicate";
    }
    return "Unknown";
}

FilterReason filter_reason_from_string(std::string_view name) {
    for (FilterReason r :
         {FilterReason::LeadTooShort, FilterReason::LeadTooLong, FilterReason::RestTooShort,
          FilterReason::RestTooLong, FilterReason::TooFewSentences,
          FilterReason::LeadRepeatedInRest, FilterReason::OverlapBelowThreshold,
          FilterReason::EmptyLeadContent, FilterReason::Duplicate}) {
        if (to_string(r) == name) return r;
    }
    throw std::invalid_argument("unknown filter reason: " + std::string(name));
}

FilterDecision filter_article(const SegmentedArticle& article, const FilterConfig& config) {
    config.validate();

    FilterDecision decision;
    decision.id = article.id;
    decision.sentence_count = article.sentences.size();

    std::span<const Sentence> lead, rest;
    std::span<const std::vector<Token>> lead_tokens, rest_tokens;
    if (!article.sentences.empty()) {
        LeadSplit split = split_lead(article, config.lead_k);
        lead = split.lead;
        rest = split.rest;
        lead_tokens = split.lead_tokens;
        rest_tokens = split.rest_tokens;
        decision.lead_words = split.lead_words;
        decision.rest_words = split.rest_words;
    }

    // Rules run in a fixed order and never short-circuit, so the decision
    // carries every violation.
    if (decision.sentence_count < config.min_sentences) {
        decision.reasons.push_back(FilterReason::TooFewSentences);
    }
    if (decision.lead_words < config.lead_min_words) {
        decision.reasons.push_back(FilterReason::LeadTooShort);
    } else if (decision.lead_words > config.lead_max_words) {
        decision.reasons.push_back(FilterReason::LeadTooLong);
    }
    if (decision.rest_words < config.rest_min_words) {
        decision.reasons.push_back(FilterReason::RestTooShort);
    } else if (decision.rest_words > config.rest_max_words) {
        decision.reasons.push_back(FilterReason::RestTooLong);
    }
    if (std::any_of(lead.begin(), lead.end(),
                    [&](const Sentence& s) { return exact_repeat_check(s, rest); })) {
        decision.reasons.push_back(FilterReason::LeadRepeatedInRest);
    }
    decision.overlap_ratio = overlap_ratio(lead_tokens, rest_tokens);
    if (!decision.overlap_ratio.has_value()) {
        decision.reasons.push_back(FilterReason::EmptyLeadContent);
    } else if (*decision.overlap_ratio < config.overlap_threshold) {
        decision.reasons.push_back(FilterReason::OverlapBelowThreshold);
    }

    decision.passed = decision.reasons.empty();
    return decision;
}

bool dedup_filter(const SegmentedArticle& article, const Blocklist& blocklist) {
    return !blocklist.contains_text(article.text);
}

TrainingPair emit_training_pair(const SegmentedArticle& article, const FilterDecision& decision,
                                std::size_t lead_k) {
    if (!decision.passed) {
        throw std::logic_error("emit_training_pair: decision did not pass for id " + decision.id);
    }
    LeadSplit split = split_lead(article, lead_k);

    auto join = [](std::span<const Sentence> sentences) {
        std::string joined;
        for (const auto& sentence : sentences) {
            if (!joined.empty()) joined.push_back(' ');
            joined += collapse_whitespace(sentence.text);
        }
        return joined;
    };

    TrainingPair pair;
    pair.id = article.id;
    pair.source = join(split.rest);
    pair.target = join(split.lead);
    pair.overlap_ratio = decision.overlap_ratio.value_or(0.0);
    return pair;
}

}  // namespace newslead
