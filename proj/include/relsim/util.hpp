#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsim {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a. Used to derive per-item seeds; stable across platforms.
std::uint64_t fnv1a64(std::string_view data);

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an item derived from the global seed and a stable item key, so
/// results do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t global, std::string_view key) {
    return mix64(global ^ mix64(fnv1a64(key)));
}

/// Number of Unicode code points in a valid UTF-8 string.
std::size_t utf8_length(std::string_view s);

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Exceptions from
/// workers are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

/// Writes `content` to `path` via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

/// Shortest round-tripping decimal form of a double.
std::string format_double(double v);

} // namespace relsim
