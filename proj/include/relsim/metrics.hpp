#pragma once

#include "relsim/analogy.hpp"
#include "relsim/nounmod.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relsim::metrics {

struct Scores {
    double precision = 0;
    double recall = 0;
    double f = 0;
};

/// Precision = correct / guesses, recall = correct / possible, F = harmonic
/// mean. Any zero denominator makes that value 0.
struct PrfRecord {
    double precision = 0;
    double recall = 0;
    double f = 0;
    std::int64_t correct = 0;
    std::int64_t guesses = 0;
    std::int64_t possible = 0;

    Scores scores() const { return {precision, recall, f}; }
};

/// Throws DataError on negative counts, correct > guesses or correct > possible.
PrfRecord prf(std::int64_t correct, std::int64_t guesses, std::int64_t possible);

double f_measure(double precision, double recall);

/// Counts for the analogy task: a double guess adds two guesses and at most
/// one correct. Every question counts towards the possible total, including
/// skipped ones.
PrfRecord analogy_prf(std::span<const analogy::Decision> decisions,
                      std::span<const analogy::AnalogyQuestion> questions);
PrfRecord analogy_prf(std::span<const analogy::Decision> decisions,
                      std::span<const analogy::ScoredQuestion> questions);

struct ClassRow {
    std::string label;
    std::size_t size = 0; // gold items with this label
    PrfRecord prf;
};

struct PerClassReport {
    std::vector<ClassRow> rows;
    Scores macro; // unweighted mean of the per-class values
    std::size_t items = 0;
};

/// Per-class precision/recall/F. A prediction counts as a guess for every
/// label it names. Rows cover vocabulary labels that occur in the gold data
/// or in some prediction; the macroaverage is taken over those rows.
PerClassReport per_class_prf(std::span<const nounmod::ClassificationOutput> predictions,
                             std::span<const std::string> gold,
                             std::span<const std::string_view> vocabulary);

/// Pooled counts across all rows.
PrfRecord micro_prf(const PerClassReport& report);

/// Correct single-label predictions over all items. Abstentions and double
/// guesses never count as correct.
double accuracy(std::span<const nounmod::ClassificationOutput> predictions,
                std::span<const std::string> gold);

struct SweepRow {
    double threshold = 0;
    double precision = 0;
    double recall = 0;
    double f = 0;
};

/// Evaluates `runner` at each threshold; rows come back sorted by threshold.
std::vector<SweepRow> sweep(const std::function<Scores(double)>& runner,
                            std::span<const double> thresholds);

/// Analogy sweep from cached cosines. Choice order (including random tie
/// breaks) is fixed once per question, so t = 0 matches a plain solve run.
std::vector<SweepRow> analogy_sweep(std::span<const analogy::ScoredQuestion> scored,
                                    std::span<const double> thresholds, std::uint64_t seed);

/// Noun-modifier sweep over precomputed neighbours, macroaveraged.
std::vector<SweepRow> nounmod_sweep(std::span<const nounmod::Neighbours> neighbours,
                                    std::span<const std::string> gold,
                                    std::span<const std::string_view> vocabulary,
                                    std::span<const double> thresholds);

/// Thresholds lo, lo+step, ..., up to hi inclusive (within 1e-9).
std::vector<double> threshold_range(double lo, double hi, double step);

/// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_thresholds(std::string_view spec);

/// "47.7%" style, one decimal.
std::string format_percent(double fraction);

/// CSV: threshold,precision,recall,f
std::string sweep_csv(std::span<const SweepRow> rows);

/// CSV: class,size,precision,recall,f plus a closing AVERAGE row.
std::string per_class_csv(const PerClassReport& report);

} // namespace relsim::metrics
