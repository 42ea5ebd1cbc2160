#include "relsim/relvec.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace relsim::relvec {

RelationVector RelationVector::from_counts(WordPair pair, std::string terms_hash,
                                           std::vector<std::uint64_t> raw_counts) {
    RelationVector v;
    v.pair = std::move(pair);
    v.terms_hash = std::move(terms_hash);
    v.components.reserve(raw_counts.size());
    v.zero = true;
    for (auto c : raw_counts) {
        v.components.push_back(std::log1p(static_cast<double>(c)));
        if (c != 0) v.zero = false;
    }
    v.raw_counts = std::move(raw_counts);
    return v;
}

std::vector<WordPair> parse_pairs(std::string_view text) {
    std::vector<WordPair> out;
    std::set<WordPair> seen;
    auto lines = split(text, '\n');
    for (std::size_t n = 0; n < lines.size(); ++n) {
        std::string_view line = lines[n];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).starts_with('#')) continue;
        auto f = split(line, '\t');
        if (f.size() < 2 || trim(f[0]).empty() || trim(f[1]).empty())
            throw DataError("pair file line " + std::to_string(n + 1) +
                            ": expected two tab-separated words");
        WordPair p{std::string(trim(f[0])), std::string(trim(f[1]))};
        if (seen.insert(p).second) out.push_back(std::move(p));
    }
    return out;
}

RelationVector build_vector(const WordPair& pair, const JoiningTermTable& table,
                            const CountProvider& provider, CountCache& cache) {
    const auto queries = patterns::generate_queries(pair, table).queries;
    const auto id = provider.identity();
    std::vector<std::uint64_t> counts;
    counts.reserve(queries.size());
    for (const auto& q : queries) {
        if (auto hit = cache.lookup(id, q)) {
            counts.push_back(*hit);
            continue;
        }
        std::uint64_t n;
        try {
            n = provider.count(q);
        } catch (const std::exception& e) {
            throw ProviderError("query '" + q + "' failed: " + e.what());
        }
        cache.store(id, q, n);
        counts.push_back(n);
    }
    return RelationVector::from_counts(pair, table.hash(), std::move(counts));
}

std::vector<RelationVector> build_vectors(std::span<const WordPair> pairs,
                                          const JoiningTermTable& table,
                                          const CountProvider& provider, CountCache& cache,
                                          unsigned jobs) {
    if (auto limit = provider.max_in_flight(); limit != 0) jobs = std::min(jobs, limit);
    std::vector<RelationVector> out(pairs.size());
    parallel_for(pairs.size(), jobs,
                 [&](std::size_t i) { out[i] = build_vector(pairs[i], table, provider, cache); });
    return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("cosine of vectors with different dimensions (" +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    double dot = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0 || bb == 0) return 0.0;
    double c = dot / (std::sqrt(aa) * std::sqrt(bb));
    return std::clamp(c, 0.0, 1.0);
}

double cosine(const RelationVector& a, const RelationVector& b) {
    return cosine(a.components, b.components);
}

namespace {

constexpr std::string_view kMagic = "RSVEC1";

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw DataError("bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

} // namespace

VectorStore VectorStore::parse(std::string_view text) {
    auto lines = split(text, '\n');
    if (lines.empty() || !lines[0].starts_with(kMagic))
        throw DataError("not a vector file (missing RSVEC1 header)");
    auto header = split(lines[0], '\t');
    if (header.size() != 3 || header[0] != kMagic) throw DataError("malformed vector file header");
    VectorStore store(header[1], parse_u64(header[2], "dimension"));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split(lines[i], '\t');
        if (fields.size() != 3)
            throw DataError("vector file line " + std::to_string(i + 1) + ": expected 3 fields");
        std::vector<std::uint64_t> counts;
        counts.reserve(store.dimension_);
        for (const auto& c : split(fields[2], ' ')) counts.push_back(parse_u64(c, "count"));
        if (counts.size() != store.dimension_)
            throw DataError("vector file line " + std::to_string(i + 1) + ": expected " +
                            std::to_string(store.dimension_) + " counts, got " +
                            std::to_string(counts.size()));
        store.add(RelationVector::from_counts({fields[0], fields[1]}, store.terms_hash_,
                                              std::move(counts)));
    }
    return store;
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
    try {
        return parse(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string VectorStore::serialize() const {
    std::string out = std::string(kMagic) + "\t" + terms_hash_ + "\t" + std::to_string(dimension_) + "\n";
    for (const auto& [pair, v] : vectors_) {
        out += pair.first + "\t" + pair.second + "\t";
        for (std::size_t i = 0; i < v.raw_counts.size(); ++i) {
            if (i) out.push_back(' ');
            out += std::to_string(v.raw_counts[i]);
        }
        out.push_back('\n');
    }
    return out;
}

void VectorStore::save(const std::filesystem::path& path) const {
    write_file_atomic(path, serialize());
}

void VectorStore::add(RelationVector v) {
    if (v.terms_hash != terms_hash_)
        throw DataError("vector for " + to_string(v.pair) + " built with terms " + v.terms_hash +
                        ", store uses " + terms_hash_);
    if (v.dimension() != dimension_)
        throw DataError("vector for " + to_string(v.pair) + " has dimension " +
                        std::to_string(v.dimension()) + ", store expects " +
                        std::to_string(dimension_));
    auto key = v.pair;
    vectors_.insert_or_assign(std::move(key), std::move(v));
}

const RelationVector* VectorStore::find(const WordPair& pair) const {
    auto it = vectors_.find(pair);
    return it == vectors_.end() ? nullptr : &it->second;
}

const RelationVector& VectorStore::at(const WordPair& pair) const {
    if (auto* v = find(pair)) return *v;
    throw DataError("no vector for pair " + to_string(pair));
}

void VectorStore::require_terms_hash(std::string_view expected) const {
    if (terms_hash_ != expected)
        throw DataError("joining-term hash mismatch: vectors use " + terms_hash_ +
                        ", expected " + std::string(expected));
}

} // namespace relsim::relvec
