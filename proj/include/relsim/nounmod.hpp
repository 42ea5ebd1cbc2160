#pragma once

#include "relsim/analogy.hpp"
#include "relsim/relvec.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsim::nounmod {

using patterns::WordPair;
using relvec::RelationVector;

/// The 30 fine-grained relation labels, sorted.
std::span<const std::string_view> class30_labels();

/// The 5 relation groups: causality, participant, quality, spatial, temporality.
std::span<const std::string_view> class5_labels();

bool is_class30(std::string_view label);

/// Group of a fine-grained label. Throws DataError naming unknown labels.
std::string_view collapse_class(std::string_view class30);

struct LabeledPair {
    std::string modifier;
    std::string head;
    std::string class30;
    std::string class5;

    /// (modifier, head): the order used to build the pair's vector.
    WordPair pair() const { return {modifier, head}; }
};

/// Dataset TSV: modifier, head, class30. '#' starts a comment line.
std::vector<LabeledPair> parse_dataset(std::string_view text);
std::vector<LabeledPair> load_dataset(const std::filesystem::path& path);

struct Neighbours {
    std::size_t first = 0;
    std::size_t second = 0;
    double first_cosine = 0;
    double second_cosine = 0;
    double margin = 0; // first_cosine - second_cosine
};

/// Two training vectors most similar to `query`. Equal cosines are ordered by
/// the generator. `exclude` removes one training index (the held-out item).
Neighbours nearest_two(const RelationVector& query, std::span<const RelationVector> training,
                       analogy::Rng& rng, std::optional<std::size_t> exclude = std::nullopt);

struct ClassificationOutput {
    enum class Kind { Abstain, Single, Double };

    std::size_t item = 0;
    Kind kind = Kind::Abstain;
    std::string label;  // Single, Double
    std::string second_label; // Double
    double margin = 0;
    std::size_t neighbour1 = 0;
    std::size_t neighbour2 = 0;

    /// Labels guessed: none, one, or two.
    std::vector<std::string_view> labels() const;
};

std::string_view to_string(ClassificationOutput::Kind kind);

/// Leave-one-out neighbour search: entry i holds item i's two nearest other
/// items. Each fold draws from its own generator seeded by (seed, i).
std::vector<Neighbours> loocv_neighbours(std::span<const RelationVector> vectors,
                                         std::uint64_t seed, unsigned jobs = 1);

/// Margin rule for one item. Matching neighbour labels give a single guess;
/// otherwise |t| <= m gives the nearest label, t > m abstains and t < -m
/// guesses both labels.
ClassificationOutput apply_margin_rule(const Neighbours& nb, std::span<const std::string> labels,
                                       double threshold, std::size_t item);

std::vector<ClassificationOutput> apply_margin_rule(std::span<const Neighbours> neighbours,
                                                    std::span<const std::string> labels,
                                                    double threshold);

/// Single-nearest-neighbour leave-one-out classification of every item.
std::vector<ClassificationOutput> loocv_classify(std::span<const std::string> labels,
                                                 std::span<const RelationVector> vectors,
                                                 double threshold, std::uint64_t seed,
                                                 unsigned jobs = 1);

} // namespace relsim::nounmod
