#include "relsim/analogy.hpp"

#include "relsim/error.hpp"
#include "relsim/util.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace relsim::analogy {

std::vector<AnalogyQuestion> parse_questions(std::string_view text) {
    std::vector<AnalogyQuestion> out;
    std::set<std::string> ids;
    auto lines = split(text, '\n');
    for (std::size_t n = 0; n < lines.size(); ++n) {
        std::string_view line = lines[n];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).starts_with('#')) continue;
        auto where = "question file line " + std::to_string(n + 1);
        auto f = split(line, '\t');
        if (f.size() != 4 + 2 * kChoiceCount)
            throw DataError(where + ": expected " + std::to_string(4 + 2 * kChoiceCount) +
                            " tab-separated fields, got " + std::to_string(f.size()));
        for (auto& field : f) {
            field = std::string(trim(field));
            if (field.empty()) throw DataError(where + ": empty field");
        }
        AnalogyQuestion q;
        q.id = f[0];
        if (!ids.insert(q.id).second) throw DataError(where + ": duplicate id " + q.id);
        q.stem = {f[1], f[2]};
        for (std::size_t c = 0; c < kChoiceCount; ++c) q.choices[c] = {f[3 + 2 * c], f[4 + 2 * c]};
        const auto& g = f.back();
        if (g.size() != 1 || g[0] < '0' || g[0] >= static_cast<char>('0' + kChoiceCount))
            throw DataError(where + ": gold index must be 0-" + std::to_string(kChoiceCount - 1) +
                            ", got '" + g + "'");
        q.gold = static_cast<std::size_t>(g[0] - '0');
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<AnalogyQuestion> load_questions(const std::filesystem::path& path) {
    try {
        return parse_questions(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<WordPair> question_pairs(std::span<const AnalogyQuestion> questions) {
    std::vector<WordPair> out;
    std::set<WordPair> seen;
    auto add = [&](const WordPair& p) {
        if (seen.insert(p).second) out.push_back(p);
    };
    for (const auto& q : questions) add(q.stem);
    for (const auto& q : questions)
        for (const auto& c : q.choices) add(c);
    return out;
}

Rng question_rng(std::uint64_t seed, std::string_view question_id) {
    return Rng(derive_seed(seed, question_id));
}

std::size_t Decision::guess_count() const {
    switch (kind) {
    case Kind::Skip:
        return 0;
    case Kind::Guess:
        return 1;
    case Kind::DoubleGuess:
        return 2;
    }
    return 0;
}

bool Decision::contains(std::size_t choice) const {
    switch (kind) {
    case Kind::Skip:
        return false;
    case Kind::Guess:
        return first == choice;
    case Kind::DoubleGuess:
        return first == choice || second == choice;
    }
    return false;
}

std::string_view to_string(Decision::Kind kind) {
    switch (kind) {
    case Decision::Kind::Skip:
        return "skip";
    case Decision::Kind::Guess:
        return "guess";
    case Decision::Kind::DoubleGuess:
        return "double";
    }
    return "?";
}

std::vector<double> score_choices(const RelationVector& stem,
                                  std::span<const RelationVector> choices) {
    std::vector<double> out;
    out.reserve(choices.size());
    for (const auto& c : choices) {
        if (c.terms_hash != stem.terms_hash)
            throw DataError("joining-term hash mismatch: stem " + to_string(stem.pair) + " uses " +
                            stem.terms_hash + ", choice " + to_string(c.pair) + " uses " +
                            c.terms_hash);
        out.push_back(relvec::cosine(stem, c));
    }
    return out;
}

ChoiceOrder order_choices(std::span<const double> cosines, Rng& rng) {
    if (cosines.size() < 2) throw DataError("need at least two choices to compute a margin");
    std::vector<std::uint64_t> keys(cosines.size());
    for (auto& k : keys) k = rng();
    ChoiceOrder out;
    out.order.resize(cosines.size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        if (cosines[a] != cosines[b]) return cosines[a] > cosines[b];
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        return a < b;
    });
    out.margin = cosines[out.order[0]] - cosines[out.order[1]];
    return out;
}

Decision apply_threshold(const ChoiceOrder& order, bool stem_zero, double threshold) {
    Decision d;
    if (stem_zero) return d;
    d.margin = order.margin;
    d.first = order.order[0];
    if (threshold > 0 && order.margin < threshold) {
        d.kind = Decision::Kind::Skip;
    } else if (threshold < 0 && order.margin < -threshold) {
        d.kind = Decision::Kind::DoubleGuess;
        d.second = order.order[1];
    } else {
        d.kind = Decision::Kind::Guess;
    }
    return d;
}

Decision decide(std::span<const double> cosines, bool stem_zero, double threshold, Rng& rng) {
    return apply_threshold(order_choices(cosines, rng), stem_zero, threshold);
}

std::vector<std::size_t> rank_candidates(const RelationVector& stem,
                                         std::span<const RelationVector> pool) {
    if (pool.empty()) throw DataError("cannot rank an empty candidate pool");
    auto cos = score_choices(stem, pool);
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cos[a] > cos[b]; });
    return order;
}

std::vector<RankRow> cumulative_rank_table(std::span<const std::size_t> gold_ranks, std::size_t k) {
    if (k < 1) throw DataError("rank table needs k >= 1");
    std::vector<RankRow> rows(k);
    for (std::size_t r = 0; r < k; ++r) rows[r].rank = r + 1;
    for (auto rank : gold_ranks) {
        if (rank < 1) throw DataError("ranks start at 1");
        if (rank <= k) ++rows[rank - 1].matches;
    }
    const double total = static_cast<double>(gold_ranks.size());
    std::size_t running = 0;
    for (auto& row : rows) {
        running += row.matches;
        row.cumulative = running;
        row.fraction = total > 0 ? row.matches / total : 0.0;
        row.cumulative_fraction = total > 0 ? row.cumulative / total : 0.0;
    }
    return rows;
}

std::vector<ScoredQuestion> score_questions(std::span<const AnalogyQuestion> questions,
                                            const relvec::VectorStore& store) {
    std::vector<ScoredQuestion> out;
    out.reserve(questions.size());
    for (const auto& q : questions) {
        const auto& stem = store.at(q.stem);
        std::vector<RelationVector> choices;
        choices.reserve(kChoiceCount);
        for (const auto& c : q.choices) choices.push_back(store.at(c));
        out.push_back({q, score_choices(stem, choices), stem.zero});
    }
    return out;
}

std::vector<Decision> solve(std::span<const ScoredQuestion> scored, double threshold,
                            std::uint64_t seed, unsigned jobs) {
    std::vector<Decision> out(scored.size());
    parallel_for(scored.size(), jobs, [&](std::size_t i) {
        auto rng = question_rng(seed, scored[i].question.id);
        out[i] = decide(scored[i].cosines, scored[i].stem_zero, threshold, rng);
    });
    return out;
}

std::vector<RankResult> rank_experiment(std::span<const AnalogyQuestion> questions,
                                        const relvec::VectorStore& store, std::size_t top_k,
                                        std::vector<WordPair>* pool_pairs, unsigned jobs) {
    std::vector<const AnalogyQuestion*> kept;
    std::vector<RelationVector> pool;
    for (const auto& q : questions) {
        if (store.at(q.stem).zero) continue;
        kept.push_back(&q);
        pool.push_back(store.at(q.choices[q.gold]));
    }
    if (pool_pairs) {
        pool_pairs->clear();
        for (const auto& v : pool) pool_pairs->push_back(v.pair);
    }
    std::vector<RankResult> out(kept.size());
    parallel_for(kept.size(), jobs, [&](std::size_t i) {
        const auto& q = *kept[i];
        const auto& stem = store.at(q.stem);
        auto order = rank_candidates(stem, pool);
        auto& r = out[i];
        r.id = q.id;
        r.stem = q.stem;
        r.gold = q.choices[q.gold];
        r.gold_rank = static_cast<std::size_t>(std::find(order.begin(), order.end(), i) - order.begin()) + 1;
        r.gold_cosine = relvec::cosine(stem, pool[i]);
        r.top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(top_k, order.size())));
    });
    return out;
}

} // namespace relsim::analogy
