#include "relsim/patterns.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <sstream>

namespace relsim::patterns {

namespace {

using textcorpus::PatternToken;
using textcorpus::PhrasePattern;

std::string normalize_term(std::string_view raw) {
    std::istringstream in{std::string(raw)};
    std::string word, out;
    while (in >> word) {
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

// Byte offset of the n-th code point.
std::size_t utf8_offset(std::string_view s, std::size_t n) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            if (seen == n) return i;
            ++seen;
        }
    }
    return s.size();
}

bool is_possessive(std::string_view tok) { return tok == "'s" || tok == "'S" || tok == "’s" || tok == "’S"; }

} // namespace

JoiningTermTable::JoiningTermTable(std::vector<std::string> terms) : terms_(std::move(terms)) {
    if (terms_.size() != kJoiningTermCount)
        throw DataError("joining-term table must have " + std::to_string(kJoiningTermCount) +
                        " terms, got " + std::to_string(terms_.size()));
    std::string joined = std::to_string(terms_.size()) + "\n";
    for (auto& t : terms_) {
        t = normalize_term(t);
        joined += t;
        joined.push_back('\n');
    }
    hash_ = sha256_hex(joined);
}

const JoiningTermTable& JoiningTermTable::defaults() {
    static const JoiningTermTable table(std::vector<std::string>{
        "",          "* not",     "* very",     "after",      "and not", "are",
        "at",        "at the",    "become*",    "but not",    "contain*", "for",
        "for example", "for the", "from",       "from the",   "get*",    "give*",
        "go",        "goes",      "has",        "have",       "in",      "in the",
        "instead of", "into",     "is",         "is *",       "is the",  "lack*",
        "like",      "like *",    "like the",   "make*",      "need*",   "not",
        "not the",   "of",        "of the",     "on",         "onto",    "or",
        "rather than", "such as", "than",       "that",       "the",     "their",
        "then",      "this",      "to",         "to the",     "turn*",   "use*",
        "when",      "which",     "will",       "with",       "with the", "within",
        "without",   "yet",       "'s",         "'s *",
    });
    return table;
}

JoiningTermTable JoiningTermTable::parse(std::string_view text) {
    std::vector<std::string> terms;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& line : lines) {
        std::string_view l = line;
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        if (trim(l).starts_with('#')) continue;
        terms.push_back(normalize_term(l));
    }
    return JoiningTermTable(std::move(terms));
}

JoiningTermTable JoiningTermTable::load(const std::filesystem::path& path) {
    try {
        return parse(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string JoiningTermTable::to_config() const {
    std::string out = "# joining terms, one per line; a blank line is the empty term\n";
    for (const auto& t : terms_) {
        out += t;
        out.push_back('\n');
    }
    return out;
}

StemmedWord stem(std::string_view word) {
    if (word.empty()) throw DataError("cannot stem an empty word");
    for (char c : word)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
            throw DataError("cannot stem '" + std::string(word) + "': contains whitespace");
    const std::size_t length = utf8_length(word);
    std::string stemmed;
    if (length > 10) {
        stemmed = std::string(word.substr(0, utf8_offset(word, length - 4))) + "*";
    } else if (length > 8) {
        stemmed = std::string(word.substr(0, utf8_offset(word, length - 3))) + "*";
    } else if (length > 2) {
        stemmed = std::string(word) + "*";
    } else {
        stemmed = std::string(word);
    }
    return {std::string(word), std::move(stemmed)};
}

std::string to_string(const WordPair& pair) { return pair.first + ":" + pair.second; }

QueryPair generate_queries(const WordPair& pair, const JoiningTermTable& table) {
    const std::string x = stem(pair.first).stemmed;
    const std::string y = stem(pair.second).stemmed;
    auto join = [](const std::string& a, const std::string& term, const std::string& b) {
        return term.empty() ? a + " " + b : a + " " + term + " " + b;
    };
    QueryPair out{pair, {}};
    out.queries.reserve(table.dimension());
    for (const auto& term : table.terms()) {
        out.queries.push_back(join(x, term, y));
        out.queries.push_back(join(y, term, x));
    }
    return out;
}

PhrasePattern parse_pattern(std::string_view query_text) {
    PhrasePattern pattern;
    std::istringstream in{std::string(query_text)};
    std::string raw;
    while (in >> raw) {
        if (raw == "*") {
            pattern.tokens.push_back(PatternToken::any_word());
            continue;
        }
        if (is_possessive(raw)) {
            pattern.tokens.push_back(PatternToken::literal("'s"));
            continue;
        }
        auto star = raw.find('*');
        bool prefix = star != std::string::npos;
        if (prefix && star != raw.size() - 1)
            throw DataError("invalid pattern token '" + raw + "': '*' must end the token");
        auto words = textcorpus::tokenize(prefix ? raw.substr(0, star) : raw, "query");
        if (words.empty())
            throw DataError("invalid pattern token '" + raw + "': no word characters");
        for (std::size_t i = 0; i < words.size(); ++i) {
            bool last = i + 1 == words.size();
            pattern.tokens.push_back(prefix && last ? PatternToken::prefix(std::move(words[i]))
                                                    : PatternToken::literal(std::move(words[i])));
        }
    }
    pattern.validate();
    return pattern;
}

} // namespace relsim::patterns
