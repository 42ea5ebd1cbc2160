#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace relsim::textcorpus::detail {

/// tokenize() for a slice of a larger input; `base` is the slice's byte
/// offset so errors report positions in the whole file.
std::vector<std::string> tokenize_slice(std::string_view text, std::string_view source,
                                        std::size_t base);

} // namespace relsim::textcorpus::detail
