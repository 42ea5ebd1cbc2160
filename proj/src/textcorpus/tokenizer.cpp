#include "relsim/textcorpus.hpp"

#include "relsim/error.hpp"
#include "detail.hpp"

namespace relsim::textcorpus {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t width;
};

[[noreturn]] void malformed(std::string_view source, std::size_t offset) {
    throw DataError("malformed UTF-8 in " + std::string(source) + " at byte offset " +
                    std::to_string(offset));
}

Decoded decode(std::string_view text, std::size_t i, std::string_view source, std::size_t base) {
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    unsigned char c = byte(i);
    if (c < 0x80) return {c, 1};
    std::size_t width;
    char32_t cp;
    char32_t min;
    if ((c & 0xE0) == 0xC0) {
        width = 2, cp = c & 0x1F, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
        width = 3, cp = c & 0x0F, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
        width = 4, cp = c & 0x07, min = 0x10000;
    } else {
        malformed(source, base + i);
    }
    if (i + width > text.size()) malformed(source, base + i);
    for (std::size_t k = 1; k < width; ++k) {
        unsigned char cc = byte(i + k);
        if ((cc & 0xC0) != 0x80) malformed(source, base + i);
        cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) malformed(source, base + i);
    return {cp, width};
}

// Letters and digits: ASCII alphanumerics plus the Latin-1 and Latin
// Extended letter blocks. Other scripts are separators.
bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
    return cp >= 0x1E00 && cp <= 0x1EFF;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::vector<std::string> detail::tokenize_slice(std::string_view text, std::string_view source,
                                                std::size_t base) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        auto [cp, width] = decode(text, i, source, base);
        if (is_word_char(cp)) {
            append_utf8(current, to_lower(cp));
            i += width;
            continue;
        }
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
            // "'s" directly after a word, not followed by another word char.
            if (is_apostrophe(cp) && i + width < text.size()) {
                auto s = decode(text, i + width, source, base);
                if (s.cp == 's' || s.cp == 'S') {
                    std::size_t after = i + width + s.width;
                    if (after >= text.size() || !is_word_char(decode(text, after, source, base).cp)) {
                        tokens.emplace_back("'s");
                        i = after;
                        continue;
                    }
                }
            }
        }
        i += width;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> tokenize(std::string_view text, std::string_view source) {
    return detail::tokenize_slice(text, source, 0);
}

} // namespace relsim::textcorpus
