#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relsim::textcorpus {

/// Bumped whenever tokenize() changes output for some input. Persisted in
/// index files and folded into the corpus fingerprint.
inline constexpr std::uint32_t kTokenizerVersion = 1;

struct Document {
    std::uint32_t id = 0;
    std::vector<std::string> tokens;
};

/// Lowercases and splits `text` into word tokens. Runs of letters and digits
/// form tokens; an apostrophe-s closing a word becomes its own "'s" token;
/// every other character separates. `source` names the input in errors.
std::vector<std::string> tokenize(std::string_view text, std::string_view source = "<text>");

enum class DocMode { FilePerDoc, BlankLine };

/// Reads every file under `sources` (directories are walked recursively,
/// in path order) and returns documents with dense ids in reading order.
std::vector<Document> ingest(std::span<const std::filesystem::path> sources, DocMode mode);

/// Splits already-loaded text into documents as ingest() would for one file.
std::vector<Document> documents_from_text(std::string_view text, DocMode mode,
                                          std::string_view source = "<text>");

struct PatternToken {
    enum class Kind { Literal, AnyWord, Prefix };

    /// Extra characters a Prefix may absorb beyond its stem.
    static constexpr std::size_t kMaxPrefixExtra = 5;
    /// Alphanumeric characters required before a trailing asterisk.
    static constexpr std::size_t kMinPrefixStem = 3;

    Kind kind = Kind::Literal;
    std::string text; // literal text or prefix stem; empty for AnyWord

    static PatternToken literal(std::string text) { return {Kind::Literal, std::move(text)}; }
    static PatternToken any_word() { return {Kind::AnyWord, {}}; }
    static PatternToken prefix(std::string stem) { return {Kind::Prefix, std::move(stem)}; }

    /// True when `token` satisfies this pattern position.
    bool matches(std::string_view token) const;

    bool operator==(const PatternToken&) const = default;
};

std::string to_string(const PatternToken& token);

struct PhrasePattern {
    std::vector<PatternToken> tokens;

    /// Throws DataError if the pattern is empty, starts or ends with AnyWord,
    /// or has a Prefix stem that is too short.
    void validate() const;

    bool operator==(const PhrasePattern&) const = default;
};

std::string to_string(const PhrasePattern& pattern);

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t pos = 0;
    auto operator<=>(const Posting&) const = default;
};

using TokenId = std::uint32_t;

/// Positional inverted index over an immutable corpus snapshot.
///
/// The dictionary is sorted, so all tokens sharing a prefix occupy one
/// contiguous id range. Postings per token are sorted by (doc, pos). A
/// forward copy of each document's token ids is kept for verifying phrase
/// candidates in constant time per position.
class CorpusIndex {
public:
    CorpusIndex() = default;

    /// Deterministic for any `jobs`; the serialized form is byte-identical.
    static CorpusIndex build(std::span<const Document> docs, unsigned jobs = 1);

    static CorpusIndex deserialize(std::string_view bytes);
    static CorpusIndex load(const std::filesystem::path& path);

    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    std::size_t document_count() const { return doc_tokens_.size(); }
    std::span<const std::string> dictionary() const { return dictionary_; }
    std::optional<TokenId> lookup(std::string_view token) const;

    /// Half-open id range of dictionary entries starting with `stem`.
    std::pair<TokenId, TokenId> prefix_range(std::string_view stem) const;

    std::span<const Posting> postings(TokenId id) const;
    std::span<const Posting> postings(std::string_view token) const;
    std::span<const TokenId> document(std::uint32_t doc) const { return doc_tokens_.at(doc); }

    /// Hex SHA-256 over the tokenized corpus and the tokenizer version.
    const std::string& fingerprint() const { return fingerprint_; }
    std::uint32_t tokenizer_version() const { return kTokenizerVersion; }

    /// Number of distinct documents with at least one contiguous match.
    std::uint64_t count_documents(const PhrasePattern& pattern) const;

private:
    void finish(); // builds postings and fingerprint from dictionary_ + doc_tokens_

    std::vector<std::string> dictionary_;
    std::vector<std::uint32_t> token_lengths_; // code points per dictionary entry
    std::vector<std::vector<TokenId>> doc_tokens_;
    std::vector<std::size_t> posting_offsets_;
    std::vector<Posting> postings_;
    std::string fingerprint_;
};

} // namespace relsim::textcorpus
