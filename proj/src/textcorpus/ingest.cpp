#include "relsim/textcorpus.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"
#include "detail.hpp"

#include <algorithm>

namespace fs = std::filesystem;

namespace relsim::textcorpus {

namespace {

std::vector<fs::path> expand(std::span<const fs::path> sources) {
    std::vector<fs::path> files;
    for (const auto& src : sources) {
        std::error_code ec;
        auto status = fs::status(src, ec);
        if (ec || !fs::exists(status)) throw DataError("unreadable corpus path: " + src.string());
        if (fs::is_directory(status)) {
            std::vector<fs::path> found;
            for (auto it = fs::recursive_directory_iterator(src, ec);
                 !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (it->is_regular_file()) found.push_back(it->path());
            }
            if (ec) throw DataError("unreadable corpus path: " + src.string());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(src);
        }
    }
    return files;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

} // namespace

std::vector<Document> documents_from_text(std::string_view text, DocMode mode,
                                          std::string_view source) {
    std::vector<Document> docs;
    if (mode == DocMode::FilePerDoc) {
        docs.push_back({0, tokenize(text, source)});
        return docs;
    }
    std::size_t pos = 0;
    std::size_t block_start = std::string_view::npos;
    auto flush = [&](std::size_t end) {
        if (block_start == std::string_view::npos) return;
        std::string_view block = text.substr(block_start, end - block_start);
        docs.push_back({0, detail::tokenize_slice(block, source, block_start)});
        block_start = std::string_view::npos;
    };
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        auto end = eol == std::string_view::npos ? text.size() : eol;
        std::string_view line = text.substr(pos, end - pos);
        if (is_blank(line)) {
            flush(pos);
        } else if (block_start == std::string_view::npos) {
            block_start = pos;
        }
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
    }
    flush(text.size());
    return docs;
}

std::vector<Document> ingest(std::span<const fs::path> sources, DocMode mode) {
    std::vector<Document> docs;
    for (const auto& file : expand(sources)) {
        std::string text;
        try {
            text = read_file(file);
        } catch (const DataError&) {
            throw DataError("unreadable corpus path: " + file.string());
        }
        for (auto& doc : documents_from_text(text, mode, file.string())) {
            doc.id = static_cast<std::uint32_t>(docs.size());
            docs.push_back(std::move(doc));
        }
    }
    if (docs.empty()) throw DataError("empty corpus");
    return docs;
}

} // namespace relsim::textcorpus
