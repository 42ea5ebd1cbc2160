#include "relsim/textcorpus.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <cstring>

// Layout (little endian):
//   "RSIDX1" | u32 tokenizer version | 64 bytes hex fingerprint
//   u64 dictionary size | { u32 length, bytes }*
//   u64 document count  | { u32 length, u32 token id* }*
// Postings are rebuilt on load; the fingerprint is recomputed and checked.

namespace relsim::textcorpus {

namespace {

constexpr std::string_view kMagic = "RSIDX1";

class Writer {
public:
    void bytes(std::string_view s) { out_.append(s); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::string_view bytes(std::size_t n) {
        need(n);
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
    std::uint64_t u64() { return uint(8); }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw DataError("index file truncated");
    }
    std::uint64_t uint(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

} // namespace

std::string CorpusIndex::serialize() const {
    Writer w;
    w.bytes(kMagic);
    w.u32(kTokenizerVersion);
    w.bytes(fingerprint_);
    w.u64(dictionary_.size());
    for (const auto& s : dictionary_) {
        w.u32(static_cast<std::uint32_t>(s.size()));
        w.bytes(s);
    }
    w.u64(doc_tokens_.size());
    for (const auto& doc : doc_tokens_) {
        w.u32(static_cast<std::uint32_t>(doc.size()));
        for (TokenId id : doc) w.u32(id);
    }
    return w.take();
}

CorpusIndex CorpusIndex::deserialize(std::string_view bytes) {
    Reader r(bytes);
    if (bytes.size() < kMagic.size() || r.bytes(kMagic.size()) != kMagic)
        throw DataError("not an index file (bad magic)");
    auto version = r.u32();
    if (version != kTokenizerVersion)
        throw DataError("index tokenizer version " + std::to_string(version) +
                        " does not match this build (version " +
                        std::to_string(kTokenizerVersion) + ")");
    std::string stored_fingerprint(r.bytes(64));

    CorpusIndex index;
    auto n_words = r.u64();
    if (n_words > bytes.size()) throw DataError("index file corrupt");
    index.dictionary_.reserve(n_words);
    for (std::uint64_t i = 0; i < n_words; ++i) {
        auto len = r.u32();
        index.dictionary_.emplace_back(r.bytes(len));
        if (i && !(index.dictionary_[i - 1] < index.dictionary_[i]))
            throw DataError("index file corrupt: dictionary not sorted");
    }
    auto n_docs = r.u64();
    if (n_docs > bytes.size()) throw DataError("index file corrupt");
    index.doc_tokens_.resize(n_docs);
    for (auto& doc : index.doc_tokens_) {
        auto len = r.u32();
        doc.resize(len);
        for (auto& id : doc) {
            id = r.u32();
            if (id >= n_words) throw DataError("index file corrupt: token id out of range");
        }
    }
    if (!r.done()) throw DataError("index file corrupt: trailing bytes");
    index.finish();
    if (index.fingerprint_ != stored_fingerprint)
        throw DataError("index file corrupt: fingerprint mismatch");
    return index;
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    try {
        return deserialize(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void CorpusIndex::save(const std::filesystem::path& path) const {
    write_file_atomic(path, serialize());
}

} // namespace relsim::textcorpus
