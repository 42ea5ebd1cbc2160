#include "relsim/metrics.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace relsim::metrics {

double f_measure(double precision, double recall) {
    double sum = precision + recall;
    return sum == 0 ? 0.0 : 2 * precision * recall / sum;
}

PrfRecord prf(std::int64_t correct, std::int64_t guesses, std::int64_t possible) {
    if (correct < 0 || guesses < 0 || possible < 0)
        throw DataError("precision/recall counts must be non-negative");
    if (correct > guesses || correct > possible)
        throw DataError("correct count " + std::to_string(correct) +
                        " exceeds guesses or possible total");
    PrfRecord r;
    r.correct = correct;
    r.guesses = guesses;
    r.possible = possible;
    r.precision = guesses == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(guesses);
    r.recall = possible == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(possible);
    r.f = f_measure(r.precision, r.recall);
    return r;
}

namespace {

template <class GoldOf>
PrfRecord tally(std::span<const analogy::Decision> decisions, std::size_t n, GoldOf gold_of) {
    if (decisions.size() != n)
        throw DataError("decision and question counts differ");
    std::int64_t correct = 0, guesses = 0;
    for (std::size_t i = 0; i < n; ++i) {
        guesses += static_cast<std::int64_t>(decisions[i].guess_count());
        if (decisions[i].contains(gold_of(i))) ++correct;
    }
    return prf(correct, guesses, static_cast<std::int64_t>(n));
}

} // namespace

PrfRecord analogy_prf(std::span<const analogy::Decision> decisions,
                      std::span<const analogy::AnalogyQuestion> questions) {
    return tally(decisions, questions.size(), [&](std::size_t i) { return questions[i].gold; });
}

PrfRecord analogy_prf(std::span<const analogy::Decision> decisions,
                      std::span<const analogy::ScoredQuestion> questions) {
    return tally(decisions, questions.size(),
                 [&](std::size_t i) { return questions[i].question.gold; });
}

PerClassReport per_class_prf(std::span<const nounmod::ClassificationOutput> predictions,
                             std::span<const std::string> gold,
                             std::span<const std::string_view> vocabulary) {
    if (predictions.size() != gold.size())
        throw DataError("prediction and gold counts differ");
    struct Counts {
        std::int64_t size = 0, guesses = 0, correct = 0;
    };
    std::map<std::string, Counts, std::less<>> counts;
    auto slot = [&](std::string_view label) -> Counts& {
        if (std::find(vocabulary.begin(), vocabulary.end(), label) == vocabulary.end())
            throw DataError("label '" + std::string(label) + "' is not in the class vocabulary");
        return counts[std::string(label)];
    };
    for (std::size_t i = 0; i < gold.size(); ++i) {
        ++slot(gold[i]).size;
        for (auto label : predictions[i].labels()) {
            auto& c = slot(label);
            ++c.guesses;
            if (label == gold[i]) ++c.correct;
        }
    }
    PerClassReport report;
    report.items = gold.size();
    for (auto label : vocabulary) {
        auto it = counts.find(label);
        if (it == counts.end()) continue;
        const auto& c = it->second;
        report.rows.push_back({std::string(label), static_cast<std::size_t>(c.size),
                               prf(c.correct, c.guesses, c.size)});
    }
    if (!report.rows.empty()) {
        for (const auto& row : report.rows) {
            report.macro.precision += row.prf.precision;
            report.macro.recall += row.prf.recall;
            report.macro.f += row.prf.f;
        }
        const double n = static_cast<double>(report.rows.size());
        report.macro.precision /= n;
        report.macro.recall /= n;
        report.macro.f /= n;
    }
    return report;
}

PrfRecord micro_prf(const PerClassReport& report) {
    std::int64_t correct = 0, guesses = 0, possible = 0;
    for (const auto& row : report.rows) {
        correct += row.prf.correct;
        guesses += row.prf.guesses;
        possible += row.prf.possible;
    }
    return prf(correct, guesses, possible);
}

double accuracy(std::span<const nounmod::ClassificationOutput> predictions,
                std::span<const std::string> gold) {
    if (predictions.size() != gold.size())
        throw DataError("prediction and gold counts differ");
    if (gold.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i)
        if (predictions[i].kind == nounmod::ClassificationOutput::Kind::Single &&
            predictions[i].label == gold[i])
            ++correct;
    return static_cast<double>(correct) / static_cast<double>(gold.size());
}

std::vector<SweepRow> sweep(const std::function<Scores(double)>& runner,
                            std::span<const double> thresholds) {
    if (thresholds.empty()) throw UsageError("threshold list is empty");
    std::vector<double> ts(thresholds.begin(), thresholds.end());
    std::sort(ts.begin(), ts.end());
    std::vector<SweepRow> rows;
    rows.reserve(ts.size());
    for (double t : ts) {
        auto s = runner(t);
        rows.push_back({t, s.precision, s.recall, s.f});
    }
    return rows;
}

std::vector<SweepRow> analogy_sweep(std::span<const analogy::ScoredQuestion> scored,
                                    std::span<const double> thresholds, std::uint64_t seed) {
    std::vector<analogy::ChoiceOrder> orders;
    orders.reserve(scored.size());
    for (const auto& q : scored) {
        auto rng = analogy::question_rng(seed, q.question.id);
        orders.push_back(analogy::order_choices(q.cosines, rng));
    }
    return sweep(
        [&](double t) {
            std::vector<analogy::Decision> decisions;
            decisions.reserve(scored.size());
            for (std::size_t i = 0; i < scored.size(); ++i)
                decisions.push_back(analogy::apply_threshold(orders[i], scored[i].stem_zero, t));
            return analogy_prf(decisions, scored).scores();
        },
        thresholds);
}

std::vector<SweepRow> nounmod_sweep(std::span<const nounmod::Neighbours> neighbours,
                                    std::span<const std::string> gold,
                                    std::span<const std::string_view> vocabulary,
                                    std::span<const double> thresholds) {
    return sweep(
        [&](double t) {
            auto out = nounmod::apply_margin_rule(neighbours, gold, t);
            return per_class_prf(out, gold, vocabulary).macro;
        },
        thresholds);
}

std::vector<double> threshold_range(double lo, double hi, double step) {
    if (!(step > 0)) throw UsageError("threshold step must be positive");
    if (hi < lo) throw UsageError("threshold range is empty");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        double t = lo + static_cast<double>(i) * step;
        if (t > hi + 1e-9) break;
        t = std::round(t * 1e9) / 1e9;
        out.push_back(t == 0 ? 0.0 : t);
    }
    return out;
}

namespace {

double parse_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("bad threshold '" + std::string(s) + "'");
    return v;
}

} // namespace

std::vector<double> parse_thresholds(std::string_view spec) {
    if (spec.find(':') != std::string_view::npos) {
        auto parts = split(spec, ':');
        if (parts.size() != 3) throw UsageError("threshold range must be lo:hi:step");
        return threshold_range(parse_double(parts[0]), parse_double(parts[1]),
                               parse_double(parts[2]));
    }
    std::vector<double> out;
    for (const auto& p : split(spec, ',')) out.push_back(parse_double(p));
    return out;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
    return buf;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "threshold,precision,recall,f\n";
    for (const auto& r : rows)
        out += format_double(r.threshold) + "," + format_double(r.precision) + "," +
               format_double(r.recall) + "," + format_double(r.f) + "\n";
    return out;
}

std::string per_class_csv(const PerClassReport& report) {
    std::string out = "class,size,precision,recall,f\n";
    for (const auto& r : report.rows)
        out += r.label + "," + std::to_string(r.size) + "," + format_double(r.prf.precision) + "," +
               format_double(r.prf.recall) + "," + format_double(r.prf.f) + "\n";
    double mean_size = report.rows.empty()
                           ? 0.0
                           : static_cast<double>(report.items) / static_cast<double>(report.rows.size());
    out += "AVERAGE," + format_double(mean_size) + "," + format_double(report.macro.precision) +
           "," + format_double(report.macro.recall) + "," + format_double(report.macro.f) + "\n";
    return out;
}

} // namespace relsim::metrics
