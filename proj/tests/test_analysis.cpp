#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "newslead/analysis.hpp"

using namespace newslead;

namespace {

const Stopwords& stopwords() {
    static const Stopwords sw = Stopwords::bundled();
    return sw;
}

// Article assembled straight from token lists, bypassing segmentation, so
// type sets are exactly what the test planned.
SegmentedArticle token_article(const std::string& id,
                               const std::vector<std::vector<std::string>>& sentences) {
    SegmentedArticle article;
    article.id = id;
    for (const auto& words : sentences) {
        std::string text;
        std::vector<Token> tokens;
        for (const auto& w : words) {
            if (!text.empty()) text.push_back(' ');
            text += w;
            tokens.push_back(Token{w, stopwords().contains(w)});
        }
        article.sentences.push_back(Sentence{text, 0, 0});
        article.tokens.push_back(std::move(tokens));
        article.word_count += words.size();
    }
    return article;
}

std::vector<Token> token_list(const std::vector<std::string>& words) {
    std::vector<Token> tokens;
    for (const auto& w : words) tokens.push_back(Token{w, stopwords().contains(w)});
    return tokens;
}

}  // namespace

TEST_CASE("position profile definition cases") {
    PositionProfileAccumulator acc(0.05);

    // Single-sentence article identical to its summary: bin 0 mean is 1.0.
    const auto article = token_article("a", {{"storm", "hits", "the", "coast"}});
    acc.add(article, token_list({"storm", "hits", "the", "coast"}));
    auto profile = acc.finish();
    REQUIRE(profile.bins.size() == 20);
    CHECK(profile.bins[0].mean == 1.0);
    CHECK(profile.bins[0].count == 1);
    for (std::size_t i = 1; i < profile.bins.size(); ++i) CHECK(profile.bins[i].count == 0);
}

TEST_CASE("position profile isolates leading-sentence overlap") {
    PositionProfileAccumulator acc(0.25);
    // Four-sentence articles whose first sentence alone shares words with the
    // summary; later sentences are disjoint from it.
    for (int doc = 0; doc < 5; ++doc) {
        const std::string tag = std::to_string(doc);
        const auto article = token_article(
            "d" + tag, {{"shared" + tag, "words" + tag},
                        {"other" + tag, "stuff" + tag},
                        {"more" + tag, "stuff" + tag},
                        {"tail" + tag, "bits" + tag}});
        acc.add(article, token_list({"shared" + tag, "words" + tag}));
    }
    const auto profile = acc.finish();
    REQUIRE(profile.bins.size() == 4);
    CHECK(profile.bins[0].mean == 1.0);
    CHECK(profile.bins[1].mean == 0.0);
    CHECK(profile.bins[2].mean == 0.0);
    CHECK(profile.bins[3].mean == 0.0);
}

TEST_CASE("position profile matches an independent recomputation") {
    std::mt19937 rng(909);
    PositionProfileAccumulator acc(0.05);

    long double global_sum = 0.0L;
    std::size_t global_count = 0;
    std::vector<long double> bin_sums(20, 0.0L);
    std::vector<std::size_t> bin_counts(20, 0);

    for (int doc = 0; doc < 20; ++doc) {
        const std::size_t n_sentences = 1 + rng() % 8;
        std::vector<std::vector<std::string>> sentences;
        for (std::size_t s = 0; s < n_sentences; ++s) {
            std::vector<std::string> words;
            const std::size_t n_words = 1 + rng() % 6;
            for (std::size_t w = 0; w < n_words; ++w) {
                words.push_back("w" + std::to_string(rng() % 30));
            }
            sentences.push_back(words);
        }
        std::vector<std::string> summary;
        const std::size_t n_summary = 1 + rng() % 8;
        for (std::size_t w = 0; w < n_summary; ++w) {
            summary.push_back("w" + std::to_string(rng() % 30));
        }

        const auto article = token_article("doc" + std::to_string(doc), sentences);
        acc.add(article, token_list(summary));

        // Recompute by hand: distinct types per sentence vs summary types.
        std::unordered_set<std::string> summary_types(summary.begin(), summary.end());
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            std::unordered_set<std::string> sentence_types(sentences[s].begin(),
                                                           sentences[s].end());
            std::size_t shared = 0;
            for (const auto& t : sentence_types) {
                if (summary_types.contains(t)) ++shared;
            }
            const long double ratio = static_cast<long double>(shared) /
                                      static_cast<long double>(sentence_types.size());
            const double position =
                static_cast<double>(s) / static_cast<double>(sentences.size());
            const auto bin = std::min(static_cast<std::size_t>(position / 0.05),
                                      static_cast<std::size_t>(19));
            bin_sums[bin] += ratio;
            bin_counts[bin] += 1;
            global_sum += ratio;
            ++global_count;
        }
    }

    const auto profile = acc.finish();
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(profile.bins[i].count == bin_counts[i]);
        if (bin_counts[i] > 0) {
            const double expected =
                static_cast<double>(bin_sums[i] / static_cast<long double>(bin_counts[i]));
            CHECK(profile.bins[i].mean == doctest::Approx(expected).epsilon(1e-9));
        }
    }

    // Count-weighted mean over bins equals the global mean.
    long double weighted = 0.0L;
    std::size_t total = 0;
    for (const auto& bin : profile.bins) {
        weighted += static_cast<long double>(bin.mean) * static_cast<long double>(bin.count);
        total += bin.count;
    }
    REQUIRE(total == global_count);
    const double global_mean = static_cast<double>(global_sum / global_count);
    CHECK(static_cast<double>(weighted / total) == doctest::Approx(global_mean).epsilon(1e-9));
}

TEST_CASE("position profile validates bin width and counts skips") {
    CHECK_THROWS_AS(PositionProfileAccumulator(0.3), std::invalid_argument);
    CHECK_THROWS_AS(PositionProfileAccumulator(0.0), std::invalid_argument);

    PositionProfileAccumulator acc(0.5);
    acc.add_skipped();
    acc.add_skipped();
    CHECK(acc.finish().skipped_no_summary == 2);
}

TEST_CASE("overlap distribution medians and histogram") {
    // Ratios 0.2, 0.4 and 0.9 by construction: ten lead types, of which
    // 2 / 4 / 9 also occur in the rest.
    OverlapDistributionAccumulator acc(OverlapPairing::Lead3VsRest, 0.05, 3);
    for (std::size_t shared : {2u, 4u, 9u}) {
        std::vector<std::string> lead;
        std::vector<std::string> rest = {"restonly1", "restonly2"};
        for (std::size_t i = 0; i < 10; ++i) lead.push_back("t" + std::to_string(i));
        for (std::size_t i = 0; i < shared; ++i) rest.push_back("t" + std::to_string(i));
        // "the" pads are stopwords, so the lead type set stays at exactly 10.
        const auto article = token_article("a", {lead, {"the"}, {"the"}, rest});
        acc.add(article, {}, false);
    }
    const auto dist = acc.finish();
    CHECK(dist.count == 3);
    CHECK(dist.median == 0.4);

    // Histogram integrates to one.
    long double area = 0.0L;
    for (const auto& bin : dist.histogram) {
        area += static_cast<long double>(bin.density) * 0.05L;
    }
    CHECK(static_cast<double>(area) == doctest::Approx(1.0).epsilon(1e-9));

    // The median sits in a bin with positive density.
    const auto median_bin = std::min(static_cast<std::size_t>(dist.median / 0.05),
                                     dist.histogram.size() - 1);
    CHECK(dist.histogram[median_bin].density > 0.0);
}

TEST_CASE("overlap distribution: containment means median 1.0") {
    OverlapDistributionAccumulator acc(OverlapPairing::Lead3VsRest, 0.05, 3);
    for (int doc = 0; doc < 7; ++doc) {
        const std::string tag = std::to_string(doc);
        const auto article = token_article(
            "c" + tag, {{"lead" + tag, "words" + tag},
                        {"the"},
                        {"the"},
                        {"lead" + tag, "words" + tag, "extra" + tag}});
        acc.add(article, {}, false);
    }
    const auto dist = acc.finish();
    CHECK(dist.median == 1.0);
    CHECK(dist.histogram.back().density > 0.0);
}

TEST_CASE("overlap distribution pairings use the right sides") {
    // Summary shares types with lead only; Rest shares nothing with it.
    const auto article = token_article(
        "p", {{"alpha", "bravo"}, {"the"}, {"the"}, {"charlie", "delta"}});
    const auto summary = token_list({"alpha", "bravo"});

    CHECK(pairing_ratio(article, summary, true, OverlapPairing::SummaryVsArticle, 3) == 1.0);
    CHECK(pairing_ratio(article, summary, true, OverlapPairing::SummaryVsRest, 3) == 0.0);
    // Lead types {alpha, bravo} vs rest {charlie, delta}: no overlap.
    CHECK(pairing_ratio(article, summary, false, OverlapPairing::Lead3VsRest, 3) == 0.0);

    // Missing summary and empty numerators are undefined.
    CHECK_FALSE(pairing_ratio(article, {}, false, OverlapPairing::SummaryVsArticle, 3)
                    .has_value());
    const auto stops = token_article("s", {{"the"}, {"of"}, {"and"}, {"words"}});
    CHECK_FALSE(pairing_ratio(stops, {}, false, OverlapPairing::Lead3VsRest, 3).has_value());

    CHECK_THROWS_AS(OverlapDistributionAccumulator(OverlapPairing::Lead3VsRest, 0.05).finish(),
                    std::invalid_argument);
}

TEST_CASE("selection median picks an observed value") {
    CHECK(selection_median({0.2, 0.4, 0.9}) == 0.4);
    CHECK(selection_median({0.9, 0.2, 0.4}) == 0.4);
    CHECK(selection_median({0.5}) == 0.5);
    CHECK(selection_median({0.2, 0.8}) == 0.2);  // lower middle for even counts
    CHECK_THROWS_AS(selection_median({}), std::invalid_argument);
}

TEST_CASE("novel_ngram_ratio definition cases") {
    const std::vector<std::string> abc = {"a", "b", "c"};
    for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(novel_ngram_ratio(abc, abc, n) == 0.0);
    }

    const std::vector<std::string> other = {"x", "y", "z"};
    for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(novel_ngram_ratio(abc, other, n) == 1.0);
    }

    const std::vector<std::string> base = {"b", "c", "d"};
    CHECK(novel_ngram_ratio(abc, base, 2) == 0.5);

    // Summary shorter than n: undefined.
    const std::vector<std::string> single = {"a"};
    CHECK_FALSE(novel_ngram_ratio(single, abc, 2).has_value());
}

TEST_CASE("novelty accumulator aggregates per n") {
    NoveltyAccumulator acc(4);
    const std::vector<std::string> summary = {"a", "b", "c"};
    acc.add(summary, summary);                       // novel 0 for n in 1..3
    const std::vector<std::string> xyz = {"x", "y", "z"};
    acc.add(summary, xyz);  // novel 1 for n in 1..3
    const auto report = acc.finish();
    CHECK(report.per_n.at(1) == 0.5);
    CHECK(report.per_n.at(2) == 0.5);
    CHECK(report.per_n.at(3) == 0.5);
    CHECK(report.defined_docs.at(3) == 2);
    CHECK(report.defined_docs.at(4) == 0);  // summary too short for 4-grams
    CHECK_FALSE(report.per_n.contains(4));
}

TEST_CASE("length_bucket_delta quintiles") {
    // All deltas equal.
    std::vector<BucketRecord> records;
    for (std::size_t i = 0; i < 15; ++i) records.push_back({i + 1, 0.1, 0.1 + 0.25});
    auto report = length_bucket_delta(records);
    for (const auto& bucket : report.buckets) {
        CHECK(bucket.mean_delta == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(bucket.count == 3);
    }

    // Ten records with deltas 0..9 ascending with length.
    records.clear();
    for (std::size_t i = 0; i < 10; ++i) {
        records.push_back({10 * (i + 1), 0.0, static_cast<double>(i)});
    }
    report = length_bucket_delta(records);
    const double expected[5] = {0.5, 2.5, 4.5, 6.5, 8.5};
    for (std::size_t b = 0; b < 5; ++b) {
        CHECK(report.buckets[b].mean_delta == doctest::Approx(expected[b]).epsilon(1e-12));
        CHECK(report.buckets[b].count == 2);
    }

    // Identical score streams give all-zero deltas.
    records.clear();
    for (std::size_t i = 0; i < 9; ++i) {
        records.push_back({i, 0.3 + static_cast<double>(i), 0.3 + static_cast<double>(i)});
    }
    report = length_bucket_delta(records);
    for (const auto& bucket : report.buckets) CHECK(bucket.mean_delta == 0.0);

    // Remainder goes to the earliest buckets: 7 = 2+2+1+1+1.
    records.clear();
    for (std::size_t i = 0; i < 7; ++i) records.push_back({i, 0.0, 1.0});
    report = length_bucket_delta(records);
    CHECK(report.buckets[0].count == 2);
    CHECK(report.buckets[1].count == 2);
    CHECK(report.buckets[2].count == 1);
    CHECK(report.buckets[3].count == 1);
    CHECK(report.buckets[4].count == 1);

    CHECK_THROWS_AS(length_bucket_delta({{1, 0, 0}, {2, 0, 0}}), std::invalid_argument);
}

TEST_CASE("length_bucket_delta is permutation invariant") {
    std::mt19937 rng(4242);
    std::vector<BucketRecord> records;
    for (std::size_t i = 0; i < 23; ++i) {
        records.push_back({rng() % 100, static_cast<double>(rng() % 50) / 50.0,
                           static_cast<double>(rng() % 50) / 50.0});
    }
    const auto baseline = length_bucket_delta(records);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        std::shuffle(records.begin(), records.end(), rng);
        const auto report = length_bucket_delta(records);
        for (std::size_t b = 0; b < 5; ++b) {
            CHECK(report.buckets[b].count == baseline.buckets[b].count);
            CHECK(report.buckets[b].mean_delta ==
                  doctest::Approx(baseline.buckets[b].mean_delta).epsilon(1e-12));
        }
    }
}

TEST_CASE("corpus stats aggregate decisions") {
    CorpusStatsAccumulator acc;
    for (int i = 0; i < 10; ++i) {
        FilterDecision d;
        d.id = "d" + std::to_string(i);
        d.passed = i < 4;
        if (!d.passed) {
            d.reasons.push_back(FilterReason::OverlapBelowThreshold);
            if (i % 2 == 0) d.reasons.push_back(FilterReason::LeadTooShort);
        }
        d.lead_words = 50 + static_cast<std::size_t>(i);
        d.rest_words = 500 + static_cast<std::size_t>(10 * i);
        d.sentence_count = 8;
        d.overlap_ratio = 0.60 + 0.01 * i;
        acc.add(d);
    }
    const auto stats = acc.finish();
    CHECK(stats.article_count == 10);
    CHECK(stats.passed_count == 4);
    CHECK(stats.retention_ratio == 0.4);
    CHECK(stats.rejection_counts.at(FilterReason::OverlapBelowThreshold) == 6);
    CHECK(stats.rejection_counts.at(FilterReason::LeadTooShort) == 3);
    // Passed set: i in 0..3 -> lead 50..53 (mean 51.5), rest 500..530 (mean 515).
    CHECK(stats.mean_lead_words == doctest::Approx(51.5).epsilon(1e-12));
    CHECK(stats.mean_rest_words == doctest::Approx(515.0).epsilon(1e-12));
    CHECK(stats.total_words == (50 + 51 + 52 + 53) + (500 + 510 + 520 + 530));
    // Retained ratios 0.60..0.63, lower middle 0.61.
    CHECK(stats.median_retained_overlap == 0.61);
    // Retention equals 1 - rejected/total exactly.
    CHECK(stats.retention_ratio == 1.0 - 6.0 / 10.0);
}

TEST_CASE("corpus stats with no passes") {
    CorpusStatsAccumulator acc;
    for (int i = 0; i < 3; ++i) {
        FilterDecision d;
        d.id = std::to_string(i);
        d.passed = false;
        d.reasons.push_back(FilterReason::TooFewSentences);
        acc.add(d);
    }
    const auto stats = acc.finish();
    CHECK(stats.retention_ratio == 0.0);
    CHECK_FALSE(stats.median_retained_overlap.has_value());
    CHECK(stats.mean_lead_words == 0.0);

    CHECK(CorpusStatsAccumulator{}.finish().article_count == 0);
}
