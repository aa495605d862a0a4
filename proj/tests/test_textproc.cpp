#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "newslead/text.hpp"

using namespace newslead;

namespace {

// Hand-written sentence pool for the segmentation fixture. Every entry is one
// complete sentence; composing documents from the pool gives a segmentation
// oracle by construction. Entries deliberately exercise titles, dotted
// acronyms, initials, decimals, quotes and non-period terminators.
const std::vector<std::string> kSentencePool = {
    "It rained all night.",
    "Dr. Smith left the building.",
    "The U.S. economy grew last quarter.",
    "Mr. and Mrs. Jones arrived late.",
    "Costs rose 3.5 percent in March.",
    "\"It works,\" she said.",
    "He shouted \"stop.\"",
    "Prof. Lee teaches on Mon. and Wed. afternoons.",
    "J. K. Rowling wrote the series.",
    "The firm filed with the S.E.C. on Tuesday.",
    "Done!",
    "Really?",
    "Officials from the U.N. met in Geneva.",
    "Prices fell to 1.25 dollars.",
    "Gen. Carter briefed the press corps.",
    "She lives on Main St. near the park.",
    "1990 was a difficult year.",
    "The meeting starts at 9 a.m. sharp.",
    "Sales hit 4,000 units!",
    "Acme Inc. reported record profits.",
    "Is this the right address?",
    "Sen. Davis voted against the bill.",
    "The storm hit the coast overnight.",
    "Residents fled to higher ground.",
    "Nobody was hurt, officials said.",
    "Capt. Reyes commands the vessel.",
    "Engineers tested the bridge for 12 days.",
    "\"We will rebuild,\" the mayor promised.",
    "Water levels dropped by half a meter.",
    "Rescue teams searched until dawn.",
    "The report cites Fig. 4 of the study.",
    "Visitors came from as far as the U.K. and Japan.",
    "Two camps disagreed about the plan.",
    "A vote is scheduled for next week.",
    "Markets rose today.",
    "No. 7 finished first in the heat.",
    "Ms. Alvarez chairs the committee.",
    "The trail climbs Mt. Hood from the east.",
    "Traders sold 2.4 million shares.",
    "That claim proved false.",
};

std::vector<std::string> extract_texts(const std::vector<Sentence>& sentences) {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.push_back(s.text);
    return out;
}

std::string strip_all_whitespace(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') {
            out.push_back(c);
        }
    }
    return out;
}

void check_span_invariants(std::string_view source, const std::vector<Sentence>& sentences) {
    std::size_t prev_end = 0;
    std::string joined;
    for (const auto& s : sentences) {
        CHECK(s.begin >= prev_end);
        CHECK(s.end > s.begin);
        CHECK(s.end <= source.size());
        CHECK(s.text == std::string(source.substr(s.begin, s.end - s.begin)));
        CHECK_FALSE(s.text.empty());
        prev_end = s.end;
        joined += s.text;
    }
    CHECK(strip_all_whitespace(joined) == strip_all_whitespace(source));
}

}  // namespace

TEST_CASE("clean_prefix removes the documented prefixes") {
    const auto rules = PrefixRules::bundled();
    CHECK(rules.clean("New York (CNN) -- The storm hit the coast.") ==
          "The storm hit the coast.");
    CHECK(rules.clean("Jones Smith, May 10th, 2018: Markets rose today.") ==
          "Markets rose today.");
    CHECK(rules.clean("Markets rose today.") == "Markets rose today.");
    CHECK(rules.clean("") == "");
    // Variants of the agency shape.
    CHECK(rules.clean("WASHINGTON, May 10 (Reuters) -- Stocks fell.") == "Stocks fell.");
    CHECK(rules.clean("(AP) -- A quake struck the region.") == "A quake struck the region.");
    // Mid-document matches are left alone.
    const std::string mid = "The storm hit. New York (CNN) -- is not a prefix here.";
    CHECK(rules.clean(mid) == mid);
}

TEST_CASE("clean_prefix is idempotent, including stacked prefixes") {
    const auto rules = PrefixRules::bundled();
    std::mt19937 rng(7);
    const std::vector<std::string> prefixes = {
        "New York (CNN) -- ",
        "Jones Smith, May 10th, 2018: ",
        "LONDON (Reuters) -- ",
        "",
    };
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        const int stacked = static_cast<int>(rng() % 3);
        for (int p = 0; p < stacked; ++p) text += prefixes[rng() % prefixes.size()];
        text += kSentencePool[rng() % kSentencePool.size()];
        const std::string once = rules.clean(text);
        CHECK(rules.clean(once) == once);
    }
}

TEST_CASE("prefix rules load from a file") {
    const std::string path = "custom_patterns_test.txt";
    {
        std::ofstream out(path);
        out << "# test rules\n^FLASH:\\s*\n";
    }
    const auto rules = PrefixRules::from_file(path);
    CHECK(rules.size() == 1);
    CHECK(rules.clean("FLASH: quake hits city.") == "quake hits city.");
    CHECK(rules.clean("No flash here.") == "No flash here.");
    std::remove(path.c_str());
    CHECK_THROWS_AS(PrefixRules::from_file("does_not_exist.txt"), std::runtime_error);
}

TEST_CASE("segment_sentences handles the documented cases") {
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("   \n\t ").empty());

    auto sents = segment_sentences("It rained. Dr. Smith left. Done!");
    CHECK(extract_texts(sents) ==
          std::vector<std::string>{"It rained.", "Dr. Smith left.", "Done!"});

    sents = segment_sentences("no terminator");
    CHECK(extract_texts(sents) == std::vector<std::string>{"no terminator"});

    // Blank line breaks a sentence even without a terminator.
    sents = segment_sentences("first paragraph\n\nSecond one here.");
    CHECK(extract_texts(sents) ==
          std::vector<std::string>{"first paragraph", "Second one here."});

    // Lowercase continuation after an abbreviation does not split.
    sents = segment_sentences("He visited the U.S. last year. Then he left.");
    CHECK(extract_texts(sents) ==
          std::vector<std::string>{"He visited the U.S. last year.", "Then he left."});
}

TEST_CASE("segment_sentences reproduces the composed fixture corpus") {
    std::mt19937 rng(20240527);
    const std::vector<std::string> separators = {" ", "  ", "\n", " \n ", "\n\n"};

    std::size_t consumed = 0;
    std::size_t docs = 0;
    while (consumed < 200) {
        const std::size_t doc_len = 1 + rng() % 8;
        std::vector<std::string> expected;
        std::string text;
        for (std::size_t i = 0; i < doc_len; ++i) {
            const auto& sentence = kSentencePool[rng() % kSentencePool.size()];
            if (!text.empty()) text += separators[rng() % separators.size()];
            text += sentence;
            expected.push_back(sentence);
        }
        consumed += doc_len;
        ++docs;

        const auto sentences = segment_sentences(text);
        CHECK(extract_texts(sentences) == expected);
        check_span_invariants(text, sentences);
    }
    CHECK(docs > 20);
}

TEST_CASE("segment_sentences span invariants hold on messy input") {
    const std::vector<std::string> inputs = {
        "word",
        "Multiple   spaces.   Between!  These?",
        "Ends mid air and then\n\n\nrestarts lower. Final.",
        "Ellipsis... And more.",
        "Tabs\tinside one sentence. Next.",
        "A)? weird ([brackets]). Next one.",
        "\"Quoted start.\" Unquoted end.",
    };
    for (const auto& input : inputs) {
        check_span_invariants(input, segment_sentences(input));
    }
}

TEST_CASE("tokenize matches the documented cases") {
    const auto sw = Stopwords::bundled();
    CHECK(tokenize("", sw).empty());

    auto tokens = tokenize("Hello HELLO", sw);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].surface == "hello");
    CHECK(tokens[1].surface == "hello");

    tokens = tokenize("The cat's hat, 2018.", sw);
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].surface == "the");
    CHECK(tokens[0].is_stopword);
    CHECK(tokens[1].surface == "cat's");
    CHECK_FALSE(tokens[1].is_stopword);
    CHECK(tokens[2].surface == "hat");
    CHECK(tokens[3].surface == "2018");

    // Punctuation-only fragments vanish; hyphens split words.
    tokens = tokenize("-- ... !!! self-taught", sw);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].surface == "self");
    CHECK(tokens[1].surface == "taught");

    // Curly apostrophes normalize; trailing apostrophe is dropped.
    tokens = tokenize("the cat\xE2\x80\x99s toys'", sw);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[1].surface == "cat's");
    CHECK(tokens[2].surface == "toys");

    // Latin-1 letters fold and stay inside words.
    tokens = tokenize("R\xC3\x89SUM\xC3\x89 caf\xC3\xA9", sw);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].surface == "r\xC3\xA9sum\xC3\xA9");
    CHECK(tokens[1].surface == "caf\xC3\xA9");
}

TEST_CASE("tokenize is invariant under case changes") {
    const auto sw = Stopwords::bundled();
    std::mt19937 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const int words = 1 + static_cast<int>(rng() % 12);
        for (int w = 0; w < words; ++w) {
            if (w > 0) text.push_back(' ');
            const int len = 1 + static_cast<int>(rng() % 8);
            for (int c = 0; c < len; ++c) {
                text.push_back(static_cast<char>('a' + rng() % 26));
            }
        }
        std::string upper = text;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        CHECK(tokenize(text, sw) == tokenize(upper, sw));
    }
}

TEST_CASE("word count equals the sum of per-sentence token counts") {
    const auto sw = Stopwords::bundled();
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::string text;
        const std::size_t doc_len = 1 + rng() % 6;
        for (std::size_t i = 0; i < doc_len; ++i) {
            if (!text.empty()) text += " ";
            text += kSentencePool[rng() % kSentencePool.size()];
        }
        std::size_t per_sentence = 0;
        for (const auto& sentence : segment_sentences(text)) {
            per_sentence += tokenize(sentence.text, sw).size();
        }
        CHECK(per_sentence == tokenize(text, sw).size());
    }
}

TEST_CASE("ngrams definition cases") {
    const std::vector<std::string> abc = {"a", "b", "c"};
    auto grams = ngrams(std::span<const std::string>(abc), 2);
    CHECK(grams == std::set<NGram>{NGram{{"a", "b"}}, NGram{{"b", "c"}}});

    const std::vector<std::string> a = {"a"};
    CHECK(ngrams(std::span<const std::string>(a), 2).empty());

    const std::vector<std::string> abab = {"a", "b", "a", "b"};
    grams = ngrams(std::span<const std::string>(abab), 2);
    CHECK(grams == std::set<NGram>{NGram{{"a", "b"}}, NGram{{"b", "a"}}});

    CHECK_THROWS_AS(ngrams(std::span<const std::string>(abc), 0), std::invalid_argument);
}

TEST_CASE("ngram count is bounded by window count") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::string> tokens;
        const std::size_t len = rng() % 12;
        for (std::size_t i = 0; i < len; ++i) {
            tokens.push_back(std::string(1, static_cast<char>('a' + rng() % 4)));
        }
        const std::size_t n = 1 + rng() % 5;
        const auto grams = ngrams(std::span<const std::string>(tokens), n);
        const std::size_t bound = tokens.size() >= n ? tokens.size() - n + 1 : 0;
        CHECK(grams.size() <= bound);
        for (const auto& gram : grams) CHECK(gram.n() == n);
    }
}

TEST_CASE("stopword list basics") {
    const auto sw = Stopwords::bundled();
    CHECK(sw.size() >= 150);
    CHECK(sw.size() <= 200);
    CHECK(sw.contains("the"));
    CHECK(sw.contains("don't"));
    CHECK_FALSE(sw.contains("storm"));

    const auto custom = Stopwords::from_text("# comment\nfoo\nBAR\n");
    CHECK(custom.size() == 2);
    CHECK(custom.contains("foo"));
    CHECK(custom.contains("bar"));  // entries fold to lowercase
}

TEST_CASE("whitespace collapse and utf8 helpers") {
    CHECK(collapse_whitespace("  a \t b\n\nc ") == "a b c");
    CHECK(collapse_whitespace("") == "");
    CHECK(collapse_whitespace("plain") == "plain");

    CHECK(utf8_prefix("hello", 75) == "hello");
    CHECK(utf8_prefix("hello", 2) == "he");
    // Multibyte characters are never split.
    const std::string euro = "\xE2\x82\xAC\xE2\x82\xAC";  // two euro signs
    CHECK(utf8_prefix(euro, 1) == "\xE2\x82\xAC");
    CHECK(utf8_length(euro) == 2);
    CHECK(utf8_length("abc") == 3);
}

TEST_CASE("fingerprint normalizes case and whitespace") {
    CHECK(fingerprint("The Storm") == fingerprint("the  storm"));
    CHECK(fingerprint("The Storm") == fingerprint("THE\nSTORM"));
    CHECK(fingerprint("storm a") != fingerprint("storm b"));
}
