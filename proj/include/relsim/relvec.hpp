#pragma once

#include "relsim/patterns.hpp"
#include "relsim/textcorpus.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relsim::relvec {

using patterns::JoiningTermTable;
using patterns::WordPair;

/// Source of phrase hit counts. Implementations must be deterministic for a
/// fixed corpus snapshot.
class CountProvider {
public:
    virtual ~CountProvider() = default;

    virtual std::uint64_t count(std::string_view query_text) const = 0;

    /// Stable identity; cache entries are keyed on it.
    virtual std::string identity() const = 0;

    /// Pause required between consecutive queries.
    virtual std::chrono::milliseconds courtesy_delay() const { return {}; }

    /// Maximum concurrent queries; 0 means unlimited.
    virtual unsigned max_in_flight() const { return 0; }
};

/// Counts against a local CorpusIndex.
class IndexCountProvider final : public CountProvider {
public:
    explicit IndexCountProvider(const textcorpus::CorpusIndex& index) : index_(&index) {}

    std::uint64_t count(std::string_view query_text) const override;
    std::string identity() const override;

private:
    const textcorpus::CorpusIndex* index_;
};

/// Settings for a remote hit-count service. No concrete client ships; the
/// struct documents the contract a client would honour.
struct RemoteProviderConfig {
    static constexpr std::chrono::milliseconds kDefaultDelay{5000};

    std::string endpoint;
    std::chrono::milliseconds delay = kDefaultDelay;
    unsigned max_in_flight = 1;
};

/// Serializes calls to an inner provider and spaces them by its courtesy
/// delay (or an override).
class ThrottledProvider final : public CountProvider {
public:
    explicit ThrottledProvider(const CountProvider& inner,
                               std::optional<std::chrono::milliseconds> delay = std::nullopt);

    std::uint64_t count(std::string_view query_text) const override;
    std::string identity() const override { return inner_->identity(); }
    std::chrono::milliseconds courtesy_delay() const override { return delay_; }
    unsigned max_in_flight() const override { return 1; }

private:
    const CountProvider* inner_;
    std::chrono::milliseconds delay_;
    mutable std::mutex mu_;
    mutable std::optional<std::chrono::steady_clock::time_point> last_;
};

/// Persistent (provider identity, query) -> count map.
///
/// Backed by an append-only UTF-8 file of lines
///   <sha256 of provider identity> TAB <query> TAB <count>
/// where the last line for a key wins. Without a path the cache lives in
/// memory only. Reads may run concurrently; writes are serialized.
class CountCache {
public:
    CountCache() = default;
    explicit CountCache(std::filesystem::path path);

    std::optional<std::uint64_t> lookup(std::string_view provider_id, std::string_view query) const;
    void store(std::string_view provider_id, std::string_view query, std::uint64_t count);

    std::size_t size() const;

private:
    static std::string key(std::string_view provider_hash, std::string_view query);

    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, std::uint64_t> entries_;
    mutable std::unordered_map<std::string, std::string> provider_hashes_;
    mutable std::mutex hash_mu_;

    std::string provider_hash(std::string_view provider_id) const;
};

struct RelationVector {
    WordPair pair;
    std::string terms_hash;
    std::vector<std::uint64_t> raw_counts;
    std::vector<double> components; // ln(raw_count + 1)
    bool zero = true;                // every raw count is 0

    /// Builds components and the zero flag from raw counts.
    static RelationVector from_counts(WordPair pair, std::string terms_hash,
                                      std::vector<std::uint64_t> raw_counts);

    std::size_t dimension() const { return components.size(); }
};

/// Pair list TSV: the first two tab-separated fields of each line form a
/// pair, further fields are ignored ('#' comments and blank lines skipped).
/// Duplicates are dropped, first occurrence wins.
std::vector<WordPair> parse_pairs(std::string_view text);

RelationVector build_vector(const WordPair& pair, const JoiningTermTable& table,
                            const CountProvider& provider, CountCache& cache);

/// Builds vectors for many pairs, honouring the provider's concurrency
/// limit. Output order follows `pairs`.
std::vector<RelationVector> build_vectors(std::span<const WordPair> pairs,
                                          const JoiningTermTable& table,
                                          const CountProvider& provider, CountCache& cache,
                                          unsigned jobs = 1);

/// Cosine of the angle between component vectors; 0 if either norm is 0.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const RelationVector& a, const RelationVector& b);

/// Vectors keyed by word pair, tagged with the joining-term table hash.
///
/// File format (UTF-8 text):
///   RSVEC1 TAB <terms hash> TAB <dimension>
///   <first> TAB <second> TAB <count> SP <count> ...   (one line per pair)
/// Raw counts are stored so the transform can change without re-querying.
class VectorStore {
public:
    VectorStore(std::string terms_hash, std::size_t dimension)
        : terms_hash_(std::move(terms_hash)), dimension_(dimension) {}

    static VectorStore parse(std::string_view text);
    static VectorStore load(const std::filesystem::path& path);
    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    void add(RelationVector v);
    const RelationVector* find(const WordPair& pair) const;
    /// Throws DataError naming the missing pair.
    const RelationVector& at(const WordPair& pair) const;

    const std::string& terms_hash() const { return terms_hash_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }

    /// Throws DataError naming both hashes if they differ.
    void require_terms_hash(std::string_view expected) const;

private:
    std::string terms_hash_;
    std::size_t dimension_;
    std::map<WordPair, RelationVector> vectors_;
};

} // namespace relsim::relvec
