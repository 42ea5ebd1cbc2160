#include "relsim/relvec.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <charconv>
#include <fstream>
#include <thread>

namespace relsim::relvec {

std::uint64_t IndexCountProvider::count(std::string_view query_text) const {
    return index_->count_documents(patterns::parse_pattern(query_text));
}

std::string IndexCountProvider::identity() const {
    return "local-index:tokenizer-v" + std::to_string(index_->tokenizer_version()) + ":" +
           index_->fingerprint();
}

ThrottledProvider::ThrottledProvider(const CountProvider& inner,
                                     std::optional<std::chrono::milliseconds> delay)
    : inner_(&inner), delay_(delay.value_or(inner.courtesy_delay())) {}

std::uint64_t ThrottledProvider::count(std::string_view query_text) const {
    std::lock_guard lock(mu_);
    if (last_) {
        auto ready = *last_ + delay_;
        auto now = std::chrono::steady_clock::now();
        if (now < ready) std::this_thread::sleep_for(ready - now);
    }
    try {
        auto n = inner_->count(query_text);
        last_ = std::chrono::steady_clock::now();
        return n;
    } catch (...) {
        last_ = std::chrono::steady_clock::now();
        throw;
    }
}

CountCache::CountCache(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!std::filesystem::exists(*path_, ec)) return;
    std::string text;
    try {
        text = read_file(*path_);
    } catch (const DataError&) {
        throw ProviderError("cannot read count cache " + path_->string());
    }
    auto lines = split(text, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        std::uint64_t value = 0;
        bool ok = fields.size() == 3 && fields[0].size() == 64;
        if (ok) {
            const auto& c = fields[2];
            auto [ptr, err] = std::from_chars(c.data(), c.data() + c.size(), value);
            ok = err == std::errc{} && ptr == c.data() + c.size();
        }
        if (!ok) {
            // A torn final line from an interrupted append is dropped.
            bool last = i + 1 == lines.size() || (i + 2 == lines.size() && lines.back().empty());
            if (last) continue;
            throw ProviderError("count cache " + path_->string() + " corrupt at line " +
                                std::to_string(i + 1));
        }
        entries_[key(fields[0], fields[1])] = value;
    }
}

std::string CountCache::key(std::string_view provider_hash, std::string_view query) {
    std::string k(provider_hash);
    k.push_back('\t');
    k += query;
    return k;
}

std::string CountCache::provider_hash(std::string_view provider_id) const {
    std::lock_guard lock(hash_mu_);
    auto [it, inserted] = provider_hashes_.try_emplace(std::string(provider_id));
    if (inserted) it->second = sha256_hex(provider_id);
    return it->second;
}

std::optional<std::uint64_t> CountCache::lookup(std::string_view provider_id,
                                                std::string_view query) const {
    auto k = key(provider_hash(provider_id), query);
    std::shared_lock lock(mu_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void CountCache::store(std::string_view provider_id, std::string_view query, std::uint64_t count) {
    if (query.find_first_of("\t\n\r") != std::string_view::npos)
        throw ProviderError("cannot cache query containing tab or newline: '" +
                            std::string(query) + "'");
    auto hash = provider_hash(provider_id);
    std::unique_lock lock(mu_);
    if (path_) {
        std::ofstream out(*path_, std::ios::app | std::ios::binary);
        out << hash << '\t' << query << '\t' << count << '\n';
        out.flush();
        if (!out) throw ProviderError("cannot write count cache " + path_->string());
    }
    entries_[key(hash, query)] = count;
}

std::size_t CountCache::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

} // namespace relsim::relvec
