#pragma once

#include "relsim/relvec.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsim::analogy {

using patterns::WordPair;
using relvec::RelationVector;

inline constexpr std::size_t kChoiceCount = 5;

struct AnalogyQuestion {
    std::string id;
    WordPair stem;
    std::array<WordPair, kChoiceCount> choices;
    std::size_t gold = 0;
};

/// Question TSV: id, stemA, stemB, c1A, c1B, ..., c5A, c5B, gold (0-4).
/// Blank lines and lines starting with '#' are skipped.
std::vector<AnalogyQuestion> parse_questions(std::string_view text);
std::vector<AnalogyQuestion> load_questions(const std::filesystem::path& path);

/// Every distinct pair the questions mention, stems first, in file order.
std::vector<WordPair> question_pairs(std::span<const AnalogyQuestion> questions);

using Rng = std::mt19937_64;

/// Per-question generator derived from the global seed and question id, so
/// results do not depend on processing order.
Rng question_rng(std::uint64_t seed, std::string_view question_id);

struct Decision {
    enum class Kind { Skip, Guess, DoubleGuess };

    Kind kind = Kind::Skip;
    std::size_t first = 0;  // Guess, DoubleGuess
    std::size_t second = 0; // DoubleGuess
    std::optional<double> margin; // absent when skipped for an all-zero stem

    std::size_t guess_count() const;
    bool contains(std::size_t choice) const;
};

std::string_view to_string(Decision::Kind kind);

/// Cosine of the stem against each choice, in choice order. Throws DataError
/// when the vectors come from different joining-term tables.
std::vector<double> score_choices(const RelationVector& stem,
                                  std::span<const RelationVector> choices);

/// Choices sorted by descending cosine; equal cosines are ordered by the
/// generator. margin = best - second best.
struct ChoiceOrder {
    std::vector<std::size_t> order;
    double margin = 0;
};

ChoiceOrder order_choices(std::span<const double> cosines, Rng& rng);

/// Margin rule on a fixed order. t > 0 skips when margin < t; t < 0 adds the
/// runner-up when margin < |t|; a margin equal to |t| gives a single guess.
Decision apply_threshold(const ChoiceOrder& order, bool stem_zero, double threshold);

Decision decide(std::span<const double> cosines, bool stem_zero, double threshold, Rng& rng);

/// Pool indices by descending cosine to `stem`; ties keep pool order.
std::vector<std::size_t> rank_candidates(const RelationVector& stem,
                                         std::span<const RelationVector> pool);

struct RankRow {
    std::size_t rank = 0;
    std::size_t matches = 0;
    double fraction = 0;
    std::size_t cumulative = 0;
    double cumulative_fraction = 0;
};

/// Rows 1..k: how many gold ranks equal r, and how many are <= r. Fractions
/// are over all ranks given (including those beyond k).
std::vector<RankRow> cumulative_rank_table(std::span<const std::size_t> gold_ranks, std::size_t k);

/// A question with its choice cosines computed once, so thresholds can be
/// swept without touching the vectors again.
struct ScoredQuestion {
    AnalogyQuestion question;
    std::vector<double> cosines;
    bool stem_zero = false;
};

std::vector<ScoredQuestion> score_questions(std::span<const AnalogyQuestion> questions,
                                            const relvec::VectorStore& store);

std::vector<Decision> solve(std::span<const ScoredQuestion> scored, double threshold,
                            std::uint64_t seed, unsigned jobs = 1);

struct RankResult {
    std::string id;
    WordPair stem;
    WordPair gold;
    std::size_t gold_rank = 0;
    double gold_cosine = 0;
    std::vector<std::size_t> top; // pool indices, best first
};

/// Candidate-pool experiment: questions with all-zero stems are dropped, the
/// gold pairs of the rest form one shared pool, and every remaining stem
/// ranks the whole pool. `pool` receives the pool pairs in order.
std::vector<RankResult> rank_experiment(std::span<const AnalogyQuestion> questions,
                                        const relvec::VectorStore& store, std::size_t top_k,
                                        std::vector<WordPair>* pool = nullptr,
                                        unsigned jobs = 1);

} // namespace relsim::analogy
