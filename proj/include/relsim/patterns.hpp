#pragma once

#include "relsim/textcorpus.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsim::patterns {

inline constexpr std::size_t kJoiningTermCount = 64;

/// Ordered list of joining terms. Position i defines vector components 2i
/// (forward) and 2i+1 (reversed), so the order is part of every vector's
/// meaning.
class JoiningTermTable {
public:
    /// Throws DataError unless exactly kJoiningTermCount terms are given.
    explicit JoiningTermTable(std::vector<std::string> terms);

    /// The standard 64 terms, starting with the empty term.
    static const JoiningTermTable& defaults();

    /// Config grammar: one term per line, lines starting with '#' are
    /// comments, a blank line is the empty term. A final newline does not
    /// start another term.
    static JoiningTermTable parse(std::string_view text);
    static JoiningTermTable load(const std::filesystem::path& path);

    std::string to_config() const;

    std::span<const std::string> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    std::size_t dimension() const { return 2 * terms_.size(); }

    /// Hex SHA-256 identifying the term list; stamped into vector files.
    const std::string& hash() const { return hash_; }

private:
    std::vector<std::string> terms_;
    std::string hash_;
};

struct StemmedWord {
    std::string original;
    std::string stemmed;
};

/// Truncation stemmer keyed on word length L (in characters):
///   L > 10      drop the last 4 characters, append '*'
///   8 < L <= 10 drop the last 3 characters, append '*'
///   2 < L <= 8  append '*'
///   L <= 2      unchanged
StemmedWord stem(std::string_view word);

struct WordPair {
    std::string first;
    std::string second;

    bool operator==(const WordPair&) const = default;
    auto operator<=>(const WordPair&) const = default;
};

std::string to_string(const WordPair& pair); // "first:second"

struct QueryPair {
    WordPair pair;
    /// queries[2i] = "X J_i Y", queries[2i+1] = "Y J_i X", with stemmed words.
    std::vector<std::string> queries;
};

QueryPair generate_queries(const WordPair& pair,
                           const JoiningTermTable& table = JoiningTermTable::defaults());

/// Parses space-separated query text. A lone "*" matches any one word; a
/// trailing '*' makes a prefix; anything else is literal text run through
/// the tokenizer (so "six-hour" becomes two literals).
textcorpus::PhrasePattern parse_pattern(std::string_view query_text);

} // namespace relsim::patterns
