#pragma once

#include <cstddef>
#include <cstdint>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

// Deterministic text substrate: prefix cleaning, sentence segmentation,
// tokenization, stopword lookup and n-gram extraction. Everything here is a
// pure function of its inputs; all other modules build on these definitions,
// so changing any rule changes every ratio downstream.

namespace newslead {

/// One sentence of a source document. `begin`/`end` are byte offsets into the
/// source; the span covers exactly the trimmed sentence, so inter-sentence
/// whitespace lies outside every span.
struct Sentence {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Sentence& other) const = default;
};

/// A case-folded word token. Punctuation-only fragments never become tokens;
/// intra-word apostrophes are kept ("cat's" stays one token).
struct Token {
    std::string surface;
    bool is_stopword = false;

    bool operator==(const Token& other) const = default;
};

/// A contiguous n-gram of token surfaces.
struct NGram {
    std::vector<std::string> tokens;

    std::size_t n() const { return tokens.size(); }
    auto operator<=>(const NGram& other) const = default;
};

/// Fixed stopword vocabulary. The bundled list is versioned data
/// (data/stopwords_en.txt); alternative lists load from UTF-8 files with one
/// entry per line, '#' comments allowed.
class Stopwords {
public:
    static Stopwords bundled();
    static Stopwords from_file(const std::string& path);
    static Stopwords from_text(std::string_view text);

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Ordered list of anchored prefix-removal regexes. `clean` strips matching
/// prefixes from the start of a document until no pattern matches, so the
/// result is a fixed point of the rule set.
class PrefixRules {
public:
    static PrefixRules bundled();
    static PrefixRules from_file(const std::string& path);
    static PrefixRules from_text(std::string_view text);

    std::string clean(std::string_view text) const;
    std::size_t size() const { return patterns_.size(); }

private:
    std::vector<std::regex> patterns_;
};

/// Rule-based sentence segmentation: terminator punctuation plus an
/// abbreviation-exception list; blank lines also break sentences. Spans are
/// sorted and disjoint, and rejoining the trimmed spans reproduces all
/// non-whitespace characters of the input in order.
std::vector<Sentence> segment_sentences(std::string_view text);

/// Case-folded word tokens split on word boundaries. Numbers are kept,
/// punctuation-only fragments dropped, curly apostrophes normalized.
std::vector<Token> tokenize(std::string_view text, const Stopwords& stopwords);

/// Token surfaces only, for callers that don't care about stopword flags.
std::vector<std::string> surfaces(std::span<const Token> tokens);

/// Distinct contiguous n-grams. Empty when tokens.size() < n.
/// Throws std::invalid_argument when n == 0.
std::set<NGram> ngrams(std::span<const Token> tokens, std::size_t n);
std::set<NGram> ngrams(std::span<const std::string> tokens, std::size_t n);

/// Case fold for the subset of Unicode this toolkit handles (ASCII plus
/// Latin-1/Latin-Extended-A letters); other code points pass through.
std::string fold_case(std::string_view text);

/// Trim ends and collapse every internal whitespace run to a single space.
std::string collapse_whitespace(std::string_view text);

/// First `count` code points of a UTF-8 string (cut at a code-point
/// boundary, never mid-sequence).
std::string_view utf8_prefix(std::string_view text, std::size_t count);

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

/// Stable 64-bit fingerprint of case-folded, whitespace-collapsed text.
/// Identical across runs and platforms; used for evaluation-set dedup.
std::uint64_t fingerprint(std::string_view text);

}  // namespace newslead
