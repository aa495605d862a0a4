#include "newslead/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "newslead/bundled_data.hpp"

namespace newslead {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes the UTF-8 sequence starting at i and advances i past it.
// Malformed bytes decode as U+FFFD, consuming one byte.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacement;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\f':
        case U'\v':
        case 0x00A0:  // no-break space
        case 0x2028:  // line separator
        case 0x2029:  // paragraph separator
        case 0x202F:
        case 0x3000:
            return true;
        default:
            return (cp >= 0x2000 && cp <= 0x200A);
    }
}

bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_letter_cp(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;  // Latin-1 + Extended-A/B
    return false;
}

bool is_word_cp(char32_t cp) { return is_letter_cp(cp) || is_digit_cp(cp); }

char32_t fold_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1 capitals
    if (cp == 0x178) return 0xFF;                                  // Y with diaeresis
    if (cp == 0x130) return U'i';                                  // dotted capital I
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    return cp;
}

bool is_upper_cp(char32_t cp) { return is_letter_cp(cp) && fold_cp(cp) != cp; }

bool is_apostrophe_cp(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

// Sentence terminators and trailing closers that stay with their sentence.
bool is_terminator_cp(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_closer_cp(char32_t cp) {
    switch (cp) {
        case U'"':
        case U'\'':
        case U')':
        case U']':
        case 0x2019:  // right single quote
        case 0x201D:  // right double quote
            return true;
        default:
            return false;
    }
}

bool is_opener_cp(char32_t cp) {
    switch (cp) {
        case U'"':
        case U'\'':
        case U'(':
        case U'[':
        case 0x2018:
        case 0x201C:
            return true;
        default:
            return false;
    }
}

// Titles and other abbreviations that keep their trailing period inside the
// sentence. Stored lowercase; dotted acronyms ("U.S.") are caught by shape.
const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> kAbbrev = {
        "mr.",   "mrs.",  "ms.",   "dr.",   "prof.", "rev.",  "hon.",  "gen.",  "sen.",
        "rep.",  "gov.",  "capt.", "col.",  "lt.",   "sgt.",  "det.",  "pres.", "supt.",
        "st.",   "mt.",   "ft.",   "jr.",   "sr.",   "inc.",  "ltd.",  "co.",   "corp.",
        "dept.", "est.",  "fig.",  "no.",   "vs.",   "ave.",  "blvd.", "rd.",   "jan.",
        "feb.",  "mar.",  "apr.",  "jun.",  "jul.",  "aug.",  "sep.",  "sept.", "oct.",
        "nov.",  "dec.",  "mon.",  "tue.",  "wed.",  "thu.",  "fri.",  "sat.",  "sun.",
    };
    return kAbbrev;
}

// Word ending at byte position `end` (exclusive of the '.'), including any
// internal dots, e.g. "U.S." for the final period of "U.S.".
std::string dotted_word_before(std::string_view text, std::size_t dot_pos) {
    std::size_t start = dot_pos;
    while (start > 0) {
        unsigned char c = static_cast<unsigned char>(text[start - 1]);
        if (std::isalpha(c) || c == '.' || c >= 0x80) {
            --start;
        } else {
            break;
        }
    }
    return std::string(text.substr(start, dot_pos - start + 1));
}

// True when the period at dot_pos ends an abbreviation rather than a
// sentence: a known title, a dotted acronym like "U.S.", or an initial "J.".
bool period_is_abbreviation(std::string_view text, std::size_t dot_pos) {
    std::string word = dotted_word_before(text, dot_pos);
    if (word.size() <= 1) return false;  // bare "." has no word attached
    std::string folded = fold_case(word);
    if (abbreviations().contains(folded)) return true;
    // Dotted acronym: alternating letters and dots, "U.S.", "a.m.", "D.C.".
    if (word.find('.') != word.size() - 1) {
        bool shape_ok = true;
        bool expect_letter = true;
        for (std::size_t i = 0; i < word.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(word[i]);
            if (expect_letter ? !std::isalpha(c) : c != '.') {
                shape_ok = false;
                break;
            }
            expect_letter = !expect_letter;
        }
        if (shape_ok) return true;
    }
    // Single-letter initial: "J. K. Rowling".
    if (word.size() == 2 && std::isupper(static_cast<unsigned char>(word[0]))) return true;
    return false;
}

}  // namespace

std::string fold_case(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        append_utf8(out, fold_cp(decode_utf8(text, i)));
    }
    return out;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        char32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.append(text.substr(start, i - start));
    }
    return out;
}

std::string_view utf8_prefix(std::string_view text, std::size_t count) {
    std::size_t i = 0;
    std::size_t seen = 0;
    while (i < text.size() && seen < count) {
        decode_utf8(text, i);
        ++seen;
    }
    return text.substr(0, i);
}

std::size_t utf8_length(std::string_view text) {
    std::size_t i = 0;
    std::size_t n = 0;
    while (i < text.size()) {
        decode_utf8(text, i);
        ++n;
    }
    return n;
}

std::uint64_t fingerprint(std::string_view text) {
    std::string normalized = fold_case(collapse_whitespace(text));
    // FNV-1a, 64-bit.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : normalized) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Stopwords
// ---------------------------------------------------------------------------

Stopwords Stopwords::from_text(std::string_view text) {
    Stopwords sw;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        sw.words_.insert(fold_case(line));
    }
    return sw;
}

Stopwords Stopwords::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

Stopwords Stopwords::bundled() { return from_text(bundled::stopwords_text()); }

bool Stopwords::contains(std::string_view word) const {
    return words_.contains(std::string(word));
}

// ---------------------------------------------------------------------------
// PrefixRules
// ---------------------------------------------------------------------------

PrefixRules PrefixRules::from_text(std::string_view text) {
    PrefixRules rules;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        rules.patterns_.emplace_back(std::string(line), std::regex::ECMAScript | std::regex::optimize);
    }
    return rules;
}

PrefixRules PrefixRules::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open prefix pattern file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

PrefixRules PrefixRules::bundled() { return from_text(bundled::prefix_patterns_text()); }

std::string PrefixRules::clean(std::string_view text) const {
    std::string current(text);
    // Strip to a fixed point so the operation is idempotent even when
    // prefixes stack. Each removal strictly shortens the text.
    bool changed = true;
    while (changed && !current.empty()) {
        changed = false;
        for (const auto& pattern : patterns_) {
            std::smatch m;
            if (std::regex_search(current, m, pattern,
                                  std::regex_constants::match_continuous) &&
                m.length(0) > 0) {
                current.erase(0, static_cast<std::size_t>(m.length(0)));
                changed = true;
                break;
            }
        }
    }
    return current;
}

// ---------------------------------------------------------------------------
// Sentence segmentation
// ---------------------------------------------------------------------------

std::vector<Sentence> segment_sentences(std::string_view text) {
    std::vector<Sentence> out;

    // Walk code points tracking the current sentence's trimmed extent; cut at
    // terminators followed by whitespace and a plausible sentence start, and
    // at blank lines.
    std::size_t i = 0;
    std::size_t sent_begin = std::string_view::npos;  // first non-ws byte
    std::size_t sent_end = 0;                         // one past last non-ws byte

    auto flush = [&]() {
        if (sent_begin == std::string_view::npos) return;
        out.push_back(Sentence{std::string(text.substr(sent_begin, sent_end - sent_begin)),
                               sent_begin, sent_end});
        sent_begin = std::string_view::npos;
    };

    while (i < text.size()) {
        std::size_t cp_pos = i;
        char32_t cp = decode_utf8(text, i);

        if (is_space_cp(cp)) {
            // Blank line (two or more newlines in one whitespace run) always
            // ends the sentence in progress.
            int newlines = (cp == U'\n') ? 1 : 0;
            while (i < text.size()) {
                std::size_t probe = i;
                char32_t next = decode_utf8(text, probe);
                if (!is_space_cp(next)) break;
                if (next == U'\n') ++newlines;
                i = probe;
            }
            if (newlines >= 2) flush();
            continue;
        }

        if (sent_begin == std::string_view::npos) sent_begin = cp_pos;
        sent_end = i;

        if (!is_terminator_cp(cp)) continue;
        if (cp == U'.' && period_is_abbreviation(text, cp_pos)) continue;

        // Pull trailing closers into the sentence.
        std::size_t j = i;
        while (j < text.size()) {
            std::size_t probe = j;
            char32_t closer = decode_utf8(text, probe);
            if (!is_closer_cp(closer)) break;
            j = probe;
            sent_end = j;
        }

        // End of text is always a boundary.
        if (j >= text.size()) {
            i = j;
            flush();
            continue;
        }

        // Otherwise require whitespace, then a sentence-start character.
        std::size_t probe = j;
        char32_t after = decode_utf8(text, probe);
        if (!is_space_cp(after)) {
            i = j;
            continue;
        }
        std::size_t k = probe;
        char32_t next_start = 0;
        bool has_next = false;
        while (k < text.size()) {
            std::size_t p2 = k;
            char32_t c2 = decode_utf8(text, p2);
            if (!is_space_cp(c2)) {
                next_start = c2;
                has_next = true;
                break;
            }
            k = p2;
        }
        if (!has_next || is_upper_cp(next_start) || is_digit_cp(next_start) ||
            is_opener_cp(next_start)) {
            i = j;
            flush();
        } else {
            i = j;
        }
    }
    flush();
    return out;
}

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view text, const Stopwords& stopwords) {
    std::vector<Token> out;
    std::string current;
    bool has_word_char = false;

    auto flush = [&]() {
        if (!current.empty() && has_word_char) {
            bool stop = stopwords.contains(current);
            out.push_back(Token{std::move(current), stop});
        }
        current.clear();
        has_word_char = false;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (is_word_cp(cp)) {
            append_utf8(current, fold_cp(cp));
            has_word_char = true;
            continue;
        }
        if (is_apostrophe_cp(cp) && has_word_char && i < text.size()) {
            std::size_t probe = i;
            char32_t next = decode_utf8(text, probe);
            if (is_word_cp(next)) {
                current.push_back('\'');  // normalize curly apostrophes
                continue;
            }
        }
        flush();
    }
    flush();
    return out;
}

std::vector<std::string> surfaces(std::span<const Token> tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

// ---------------------------------------------------------------------------
// N-grams
// ---------------------------------------------------------------------------

std::set<NGram> ngrams(std::span<const std::string> tokens, std::size_t n) {
    if (n == 0) throw std::invalid_argument("ngrams: n must be positive");
    std::set<NGram> out;
    if (tokens.size() < n) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        NGram gram;
        gram.tokens.assign(tokens.begin() + i, tokens.begin() + i + n);
        out.insert(std::move(gram));
    }
    return out;
}

std::set<NGram> ngrams(std::span<const Token> tokens, std::size_t n) {
    std::vector<std::string> surf = surfaces(tokens);
    return ngrams(std::span<const std::string>(surf), n);
}

}  // namespace newslead
