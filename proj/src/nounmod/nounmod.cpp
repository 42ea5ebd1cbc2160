#include "relsim/nounmod.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace relsim::nounmod {

namespace {

struct ClassGroup {
    std::string_view label;
    std::string_view group;
};

constexpr std::array<ClassGroup, 30> kGroups{{
    {"ag", "participant"},     {"ben", "participant"},  {"cntr", "quality"},
    {"cont", "quality"},       {"cs", "causality"},     {"detr", "causality"},
    {"dir", "spatial"},        {"eff", "causality"},    {"eq", "quality"},
    {"freq", "temporality"},   {"inst", "participant"}, {"lat", "spatial"},
    {"lfr", "spatial"},        {"loc", "spatial"},      {"mat", "quality"},
    {"meas", "quality"},       {"obj", "participant"},  {"obj_prop", "participant"},
    {"part", "participant"},   {"posr", "participant"}, {"prod", "participant"},
    {"prop", "participant"},   {"prp", "causality"},    {"src", "participant"},
    {"st", "participant"},     {"tat", "temporality"},  {"top", "quality"},
    {"tthr", "temporality"},   {"type", "quality"},     {"whl", "participant"},
}};

constexpr auto kClass30 = [] {
    std::array<std::string_view, 30> out{};
    for (std::size_t i = 0; i < kGroups.size(); ++i) out[i] = kGroups[i].label;
    return out;
}();

constexpr std::array<std::string_view, 5> kClass5{"causality", "participant", "quality", "spatial",
                                                 "temporality"};

const ClassGroup* find_class(std::string_view label) {
    auto it = std::lower_bound(kGroups.begin(), kGroups.end(), label,
                               [](const ClassGroup& g, std::string_view l) { return g.label < l; });
    return it != kGroups.end() && it->label == label ? &*it : nullptr;
}

// Orders candidates: higher cosine first, then lower random key.
struct Candidate {
    double cosine;
    std::uint64_t key;
    std::size_t index;

    bool beats(const Candidate& o) const {
        if (cosine != o.cosine) return cosine > o.cosine;
        if (key != o.key) return key < o.key;
        return index < o.index;
    }
};

} // namespace

std::span<const std::string_view> class30_labels() { return kClass30; }
std::span<const std::string_view> class5_labels() { return kClass5; }

bool is_class30(std::string_view label) { return find_class(label) != nullptr; }

std::string_view collapse_class(std::string_view class30) {
    if (auto* g = find_class(class30)) return g->group;
    throw DataError("unknown relation class '" + std::string(class30) + "'");
}

std::vector<LabeledPair> parse_dataset(std::string_view text) {
    std::vector<LabeledPair> out;
    auto lines = split(text, '\n');
    for (std::size_t n = 0; n < lines.size(); ++n) {
        std::string_view line = lines[n];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).starts_with('#')) continue;
        auto where = "dataset line " + std::to_string(n + 1);
        auto f = split(line, '\t');
        if (f.size() != 3)
            throw DataError(where + ": expected modifier, head, class separated by tabs");
        for (auto& field : f) {
            field = std::string(trim(field));
            if (field.empty()) throw DataError(where + ": empty field");
        }
        if (!is_class30(f[2])) throw DataError(where + ": unknown relation class '" + f[2] + "'");
        out.push_back({f[0], f[1], f[2], std::string(collapse_class(f[2]))});
    }
    return out;
}

std::vector<LabeledPair> load_dataset(const std::filesystem::path& path) {
    try {
        return parse_dataset(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

Neighbours nearest_two(const RelationVector& query, std::span<const RelationVector> training,
                       analogy::Rng& rng, std::optional<std::size_t> exclude) {
    std::size_t usable = training.size() - (exclude && *exclude < training.size() ? 1 : 0);
    if (usable < 2) throw DataError("nearest-neighbour search needs at least two training vectors");
    std::optional<Candidate> best, runner;
    for (std::size_t i = 0; i < training.size(); ++i) {
        std::uint64_t key = rng(); // drawn for every index so the stream is layout-stable
        if (exclude && i == *exclude) continue;
        if (training[i].terms_hash != query.terms_hash)
            throw DataError("joining-term hash mismatch between " + to_string(query.pair) +
                            " and " + to_string(training[i].pair));
        Candidate c{relvec::cosine(query, training[i]), key, i};
        if (!best || c.beats(*best)) {
            runner = best;
            best = c;
        } else if (!runner || c.beats(*runner)) {
            runner = c;
        }
    }
    return {best->index, runner->index, best->cosine, runner->cosine,
            best->cosine - runner->cosine};
}

std::vector<std::string_view> ClassificationOutput::labels() const {
    switch (kind) {
    case Kind::Abstain:
        return {};
    case Kind::Single:
        return {label};
    case Kind::Double:
        return {label, second_label};
    }
    return {};
}

std::string_view to_string(ClassificationOutput::Kind kind) {
    switch (kind) {
    case ClassificationOutput::Kind::Abstain:
        return "abstain";
    case ClassificationOutput::Kind::Single:
        return "single";
    case ClassificationOutput::Kind::Double:
        return "double";
    }
    return "?";
}

std::vector<Neighbours> loocv_neighbours(std::span<const RelationVector> vectors,
                                         std::uint64_t seed, unsigned jobs) {
    if (vectors.size() < 3) throw DataError("leave-one-out classification needs at least 3 items");
    std::vector<Neighbours> out(vectors.size());
    parallel_for(vectors.size(), jobs, [&](std::size_t i) {
        analogy::Rng rng(derive_seed(seed, "fold:" + std::to_string(i)));
        out[i] = nearest_two(vectors[i], vectors, rng, i);
    });
    return out;
}

ClassificationOutput apply_margin_rule(const Neighbours& nb, std::span<const std::string> labels,
                                       double threshold, std::size_t item) {
    ClassificationOutput out;
    out.item = item;
    out.margin = nb.margin;
    out.neighbour1 = nb.first;
    out.neighbour2 = nb.second;
    const auto& l1 = labels[nb.first];
    const auto& l2 = labels[nb.second];
    if (l1 == l2 || std::abs(threshold) <= nb.margin) {
        out.kind = ClassificationOutput::Kind::Single;
        out.label = l1;
    } else if (threshold > nb.margin) {
        out.kind = ClassificationOutput::Kind::Abstain;
    } else {
        out.kind = ClassificationOutput::Kind::Double;
        out.label = l1;
        out.second_label = l2;
    }
    return out;
}

std::vector<ClassificationOutput> apply_margin_rule(std::span<const Neighbours> neighbours,
                                                    std::span<const std::string> labels,
                                                    double threshold) {
    std::vector<ClassificationOutput> out;
    out.reserve(neighbours.size());
    for (std::size_t i = 0; i < neighbours.size(); ++i)
        out.push_back(apply_margin_rule(neighbours[i], labels, threshold, i));
    return out;
}

std::vector<ClassificationOutput> loocv_classify(std::span<const std::string> labels,
                                                 std::span<const RelationVector> vectors,
                                                 double threshold, std::uint64_t seed,
                                                 unsigned jobs) {
    if (labels.size() != vectors.size())
        throw DataError("label and vector counts differ (" + std::to_string(labels.size()) +
                        " vs " + std::to_string(vectors.size()) + ")");
    auto nb = loocv_neighbours(vectors, seed, jobs);
    return apply_margin_rule(nb, labels, threshold);
}

} // namespace relsim::nounmod
