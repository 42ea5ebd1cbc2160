#include "relsim/textcorpus.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <algorithm>
#include <limits>

namespace relsim::textcorpus {

namespace {

// Letters and digits before a prefix asterisk. Non-ASCII code points count
// as letters; the tokenizer only keeps Latin letters outside ASCII.
std::size_t stem_alnum_count(std::string_view stem) {
    std::size_t n = 0;
    for (unsigned char c : stem) {
        if (c >= 0x80) {
            if ((c & 0xC0) != 0x80) ++n;
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z')) {
            ++n;
        }
    }
    return n;
}

} // namespace

bool PatternToken::matches(std::string_view token) const {
    switch (kind) {
    case Kind::Literal:
        return token == text;
    case Kind::AnyWord:
        return true;
    case Kind::Prefix:
        return token.starts_with(text) &&
               utf8_length(token) - utf8_length(text) <= kMaxPrefixExtra;
    }
    return false;
}

std::string to_string(const PatternToken& token) {
    switch (token.kind) {
    case PatternToken::Kind::Literal:
        return token.text;
    case PatternToken::Kind::AnyWord:
        return "*";
    case PatternToken::Kind::Prefix:
        return token.text + "*";
    }
    return {};
}

std::string to_string(const PhrasePattern& pattern) {
    std::string out;
    for (const auto& t : pattern.tokens) {
        if (!out.empty()) out.push_back(' ');
        out += to_string(t);
    }
    return out;
}

void PhrasePattern::validate() const {
    if (tokens.empty()) throw DataError("invalid pattern: empty");
    if (tokens.front().kind == PatternToken::Kind::AnyWord)
        throw DataError("invalid pattern '" + to_string(*this) + "': leading '*'");
    if (tokens.back().kind == PatternToken::Kind::AnyWord)
        throw DataError("invalid pattern '" + to_string(*this) + "': trailing '*'");
    for (const auto& t : tokens) {
        if (t.kind == PatternToken::Kind::Prefix &&
            stem_alnum_count(t.text) < PatternToken::kMinPrefixStem) {
            throw DataError("invalid pattern token '" + to_string(t) + "': need at least " +
                            std::to_string(PatternToken::kMinPrefixStem) +
                            " alphanumeric characters before '*'");
        }
        if (t.kind == PatternToken::Kind::Literal && t.text.empty())
            throw DataError("invalid pattern '" + to_string(*this) + "': empty literal");
    }
}

CorpusIndex CorpusIndex::build(std::span<const Document> docs, unsigned jobs) {
    if (docs.size() > std::numeric_limits<std::uint32_t>::max())
        throw DataError("corpus too large");

    // Distinct tokens per chunk, merged into one sorted dictionary.
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(jobs, docs.size()));
    std::vector<std::vector<std::string>> partial(chunks);
    auto chunk_range = [&](std::size_t c) {
        std::size_t lo = docs.size() * c / chunks;
        std::size_t hi = docs.size() * (c + 1) / chunks;
        return std::pair{lo, hi};
    };
    parallel_for(chunks, jobs, [&](std::size_t c) {
        auto [lo, hi] = chunk_range(c);
        auto& words = partial[c];
        for (std::size_t d = lo; d < hi; ++d)
            words.insert(words.end(), docs[d].tokens.begin(), docs[d].tokens.end());
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
    });

    CorpusIndex index;
    for (auto& words : partial) {
        auto mid = index.dictionary_.size();
        index.dictionary_.insert(index.dictionary_.end(), std::make_move_iterator(words.begin()),
                                 std::make_move_iterator(words.end()));
        std::inplace_merge(index.dictionary_.begin(), index.dictionary_.begin() + mid,
                           index.dictionary_.end());
        index.dictionary_.erase(std::unique(index.dictionary_.begin(), index.dictionary_.end()),
                                index.dictionary_.end());
    }

    index.doc_tokens_.resize(docs.size());
    parallel_for(docs.size(), jobs, [&](std::size_t d) {
        auto& ids = index.doc_tokens_[d];
        ids.reserve(docs[d].tokens.size());
        for (const auto& tok : docs[d].tokens) ids.push_back(*index.lookup(tok));
    });
    index.finish();
    return index;
}

void CorpusIndex::finish() {
    token_lengths_.resize(dictionary_.size());
    for (std::size_t i = 0; i < dictionary_.size(); ++i)
        token_lengths_[i] = static_cast<std::uint32_t>(utf8_length(dictionary_[i]));

    // Counting sort over token ids; walking documents in order leaves every
    // posting list sorted by (doc, pos).
    posting_offsets_.assign(dictionary_.size() + 1, 0);
    for (const auto& doc : doc_tokens_)
        for (TokenId id : doc) ++posting_offsets_[id + 1];
    for (std::size_t i = 1; i < posting_offsets_.size(); ++i)
        posting_offsets_[i] += posting_offsets_[i - 1];
    postings_.resize(posting_offsets_.back());
    std::vector<std::size_t> fill(posting_offsets_.begin(), posting_offsets_.end() - 1);
    std::string digest_input = "tokenizer-v" + std::to_string(kTokenizerVersion) + "\n";
    for (std::uint32_t d = 0; d < doc_tokens_.size(); ++d) {
        const auto& doc = doc_tokens_[d];
        for (std::uint32_t p = 0; p < doc.size(); ++p) {
            postings_[fill[doc[p]]++] = Posting{d, p};
            if (p) digest_input.push_back(' ');
            digest_input += dictionary_[doc[p]];
        }
        digest_input.push_back('\n');
    }
    fingerprint_ = sha256_hex(digest_input);
}

std::optional<TokenId> CorpusIndex::lookup(std::string_view token) const {
    auto it = std::lower_bound(dictionary_.begin(), dictionary_.end(), token);
    if (it == dictionary_.end() || *it != token) return std::nullopt;
    return static_cast<TokenId>(it - dictionary_.begin());
}

std::pair<TokenId, TokenId> CorpusIndex::prefix_range(std::string_view stem) const {
    auto lo = std::lower_bound(dictionary_.begin(), dictionary_.end(), stem);
    auto hi = std::partition_point(lo, dictionary_.end(),
                                   [&](const std::string& s) { return s.starts_with(stem); });
    return {static_cast<TokenId>(lo - dictionary_.begin()),
            static_cast<TokenId>(hi - dictionary_.begin())};
}

std::span<const Posting> CorpusIndex::postings(TokenId id) const {
    if (id >= dictionary_.size()) return {};
    return std::span<const Posting>(postings_).subspan(
        posting_offsets_[id], posting_offsets_[id + 1] - posting_offsets_[id]);
}

std::span<const Posting> CorpusIndex::postings(std::string_view token) const {
    auto id = lookup(token);
    return id ? postings(*id) : std::span<const Posting>{};
}

namespace {

// A resolved pattern position: the set of token ids it accepts.
struct Slot {
    bool any = false;
    TokenId lo = 0, hi = 0;      // candidate id range
    std::uint32_t max_len = 0;   // Prefix only: longest accepted token
    bool prefix = false;

    bool accepts(TokenId id, std::span<const std::uint32_t> lengths) const {
        if (any) return true;
        if (id < lo || id >= hi) return false;
        return !prefix || lengths[id] <= max_len;
    }
};

} // namespace

std::uint64_t CorpusIndex::count_documents(const PhrasePattern& pattern) const {
    pattern.validate();
    const std::size_t width = pattern.tokens.size();

    std::vector<Slot> slots(width);
    std::size_t anchor = width;
    std::size_t anchor_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < width; ++k) {
        const auto& tok = pattern.tokens[k];
        auto& slot = slots[k];
        switch (tok.kind) {
        case PatternToken::Kind::AnyWord:
            slot.any = true;
            continue;
        case PatternToken::Kind::Literal: {
            auto id = lookup(tok.text);
            if (!id) return 0;
            slot.lo = *id;
            slot.hi = *id + 1;
            break;
        }
        case PatternToken::Kind::Prefix: {
            std::tie(slot.lo, slot.hi) = prefix_range(tok.text);
            slot.prefix = true;
            slot.max_len = static_cast<std::uint32_t>(utf8_length(tok.text) +
                                                      PatternToken::kMaxPrefixExtra);
            break;
        }
        }
        std::size_t cost = posting_offsets_[slot.hi] - posting_offsets_[slot.lo];
        if (cost == 0) return 0;
        if (cost < anchor_cost) {
            anchor_cost = cost;
            anchor = k;
        }
    }

    const Slot& a = slots[anchor];
    std::vector<std::uint32_t> matched;
    for (TokenId id = a.lo; id < a.hi; ++id) {
        if (!a.accepts(id, token_lengths_)) continue;
        std::uint32_t last_doc = std::numeric_limits<std::uint32_t>::max();
        for (const Posting& p : postings(id)) {
            if (p.doc == last_doc) continue; // this doc already matched via this id
            if (p.pos < anchor) continue;
            const auto& doc = doc_tokens_[p.doc];
            std::size_t start = p.pos - anchor;
            if (start + width > doc.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < width && ok; ++k)
                ok = k == anchor || slots[k].accepts(doc[start + k], token_lengths_);
            if (ok) {
                matched.push_back(p.doc);
                last_doc = p.doc;
            }
        }
    }
    std::sort(matched.begin(), matched.end());
    return static_cast<std::uint64_t>(std::unique(matched.begin(), matched.end()) - matched.begin());
}

} // namespace relsim::textcorpus
