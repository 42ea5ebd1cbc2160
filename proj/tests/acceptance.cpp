// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include "oracle.hpp"
#include "relsim/analogy.hpp"
#include "relsim/cli.hpp"
#include "relsim/metrics.hpp"
#include "relsim/nounmod.hpp"
#include "relsim/patterns.hpp"
#include "relsim/relvec.hpp"
#include "relsim/textcorpus.hpp"
#include "relsim/util.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace relsim;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects failure notes for one criterion.
struct Check {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 5) failures.push_back(what);
        if (!ok) ++failed;
    }
    std::size_t failed = 0;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

textcorpus::PhrasePattern to_library(const std::vector<oracle::Tok>& toks) {
    textcorpus::PhrasePattern p;
    for (const auto& t : toks) {
        switch (t.kind) {
        case oracle::Kind::Literal: p.tokens.push_back(textcorpus::PatternToken::literal(t.text)); break;
        case oracle::Kind::Any: p.tokens.push_back(textcorpus::PatternToken::any_word()); break;
        case oracle::Kind::Prefix: p.tokens.push_back(textcorpus::PatternToken::prefix(t.text)); break;
        }
    }
    return p;
}

void oracle_equivalence(Check& c) {
    auto start = Clock::now();
    oracle::CorpusGen gen(20030101);
    std::size_t cases = 0;
    for (int corpus_round = 0; corpus_round < 100; ++corpus_round) {
        auto raw = gen.corpus(1000, 24);
        std::vector<textcorpus::Document> docs;
        for (std::size_t i = 0; i < raw.size(); ++i) docs.push_back({static_cast<std::uint32_t>(i), raw[i]});
        auto index = textcorpus::CorpusIndex::build(docs);
        for (int q = 0; q < 100; ++q, ++cases) {
            auto pattern = gen.pattern(4);
            auto expected = oracle::naive_count(raw, pattern);
            auto got = index.count_documents(to_library(pattern));
            c.expect(got == expected, "case " + std::to_string(cases) + ": index " + std::to_string(got) +
                                          " vs scan " + std::to_string(expected));
        }
    }
    c.expect(cases == 10000, "ran " + std::to_string(cases) + " cases");
    double secs = seconds_since(start);
    c.expect(secs < 60, "took " + std::to_string(secs) + " s");
}

void stemming(Check& c) {
    const std::pair<const char*, const char*> golden[] = {
        {"advertisement", "advertise*"}, {"compliance", "complia*"}, {"rhythm", "rhythm*"}, {"up", "up"},
        {"ab", "ab"}, {"cat", "cat*"}, {"abcdefgh", "abcdefgh*"}, {"abcdefghi", "abcdef*"},
        {"abcdefghij", "abcdefg*"}, {"abcdefghijk", "abcdefg*"}};
    for (auto [word, want] : golden) {
        auto got = patterns::stem(word).stemmed;
        c.expect(got == want, std::string(word) + " -> " + got);
    }
}

void query_generation(Check& c) {
    auto q = patterns::generate_queries({"restrained", "limit"});
    c.expect(q.queries.size() == 128, "128 queries");
    c.expect(std::count(q.queries.begin(), q.queries.end(), "restrai* * very limit*") == 1,
             "restrai* * very limit* present");

    // 374 synthetic questions, 6 pairs each
    std::mt19937_64 rng(374);
    auto word = [&] {
        std::string w(2 + rng() % 10, 'a');
        for (auto& ch : w) ch = static_cast<char>('a' + rng() % 26);
        return w;
    };
    std::string text;
    for (int i = 0; i < 374; ++i) {
        text += "q" + std::to_string(i);
        for (int k = 0; k < 12; ++k) text += "\t" + word();
        text += "\t" + std::to_string(rng() % 5) + "\n";
    }
    auto questions = analogy::parse_questions(text);
    std::size_t slots = 0;
    for (const auto& qu : questions) {
        slots += patterns::generate_queries(qu.stem).queries.size();
        for (const auto& ch : qu.choices) slots += patterns::generate_queries(ch).queries.size();
    }
    c.expect(questions.size() == 374, "374 questions");
    c.expect(slots == 287232, "slots " + std::to_string(slots));
}

void margin_logic(Check& c) {
    const std::vector<double> cosines{0.31874, 0.57234, 0.68757, 0.49725, 0.69265};
    analogy::Rng rng = analogy::question_rng(0, "traffic:street");
    auto order = analogy::order_choices(cosines, rng);
    c.expect(std::abs(order.margin - 0.00508) <= 1e-12, "margin " + std::to_string(order.margin));
    using K = analogy::Decision::Kind;
    auto g = analogy::apply_threshold(order, false, 0.0);
    c.expect(g.kind == K::Guess && g.first == 4, "t=0 guesses e");
    for (double t : {0.00509, 0.01, 0.1}) c.expect(analogy::apply_threshold(order, false, t).kind == K::Skip, "skip");
    for (double t : {-0.00509, -0.01, -0.1}) {
        auto d = analogy::apply_threshold(order, false, t);
        c.expect(d.kind == K::DoubleGuess && d.first == 4 && d.second == 2, "double e,c");
    }
    for (double t : {0.00507, -0.00507})
        c.expect(analogy::apply_threshold(order, false, t).kind == K::Guess, "inside margin");
}

bool near_percent(double fraction, double percent) { return std::abs(100 * fraction - percent) <= 0.05; }

void metric_arithmetic(Check& c) {
    auto r = metrics::prf(176, 369, 374);
    c.expect(near_percent(r.precision, 47.7), "P");
    c.expect(near_percent(r.recall, 47.1), "R");
    c.expect(near_percent(r.f, 47.4), "F");

    auto acc = [](std::size_t right) {
        std::vector<std::string> gold(600, "ag");
        std::vector<nounmod::ClassificationOutput> preds(600);
        for (std::size_t i = 0; i < 600; ++i) {
            preds[i].kind = nounmod::ClassificationOutput::Kind::Single;
            preds[i].label = i < right ? "ag" : "ben";
        }
        return metrics::accuracy(preds, gold);
    };
    c.expect(near_percent(acc(167), 27.8), "167/600");
    c.expect(near_percent(acc(274), 45.7), "274/600");
    auto z = metrics::prf(0, 0, 10);
    c.expect(z.precision == 0 && z.recall == 0 && z.f == 0, "zero denominator");
}

void class_collapse(Check& c) {
    const std::map<std::string, int> sizes{
        {"ag", 36},   {"ben", 9},   {"cntr", 3},  {"cont", 15},     {"cs", 17},   {"detr", 4},
        {"dir", 8},   {"eff", 34},  {"eq", 5},    {"freq", 16},     {"inst", 35}, {"lat", 22},
        {"lfr", 21},  {"loc", 5},   {"mat", 32},  {"meas", 30},     {"obj", 33},  {"obj_prop", 15},
        {"part", 9},  {"posr", 30}, {"prod", 16}, {"prop", 49},     {"prp", 31},  {"src", 12},
        {"st", 9},    {"tat", 30},  {"top", 45},  {"tthr", 6},      {"type", 16}, {"whl", 7}};
    std::map<std::string_view, int> groups;
    for (const auto& [label, n] : sizes) groups[nounmod::collapse_class(label)] += n;
    c.expect(groups["causality"] == 86, "causality");
    c.expect(groups["participant"] == 260, "participant");
    c.expect(groups["quality"] == 146, "quality");
    c.expect(groups["spatial"] == 56, "spatial");
    c.expect(groups["temporality"] == 52, "temporality");
}

void rank_table(Check& c) {
    std::vector<std::size_t> small{1, 1, 2};
    auto rows = analogy::cumulative_rank_table(small, 2);
    c.expect(rows[0].matches == 2 && rows[0].cumulative == 2 && near_percent(rows[0].fraction, 66.7), "row 1");
    c.expect(rows[1].matches == 1 && rows[1].cumulative == 3 && rows[1].cumulative_fraction == 1.0, "row 2");

    const std::size_t hist[] = {31, 19, 13, 11, 6, 7, 9, 5, 5, 3};
    const double cum_pct[] = {8.4, 13.6, 17.1, 20.1, 21.7, 23.6, 26.0, 27.4, 28.7, 29.5};
    std::vector<std::size_t> ranks;
    for (std::size_t r = 0; r < 10; ++r) ranks.insert(ranks.end(), hist[r], r + 1);
    ranks.resize(369, 200);
    auto table = analogy::cumulative_rank_table(ranks, 10);
    c.expect(table[0].matches == 31 && near_percent(table[0].fraction, 8.4), "rank 1: 31, 8.4%");
    c.expect(table[9].cumulative == 109, "cumulative 109");
    for (std::size_t r = 0; r < 10; ++r)
        c.expect(near_percent(table[r].cumulative_fraction, cum_pct[r]), "cumulative % row " + std::to_string(r + 1));
}

relvec::RelationVector make_vector(std::vector<double> comps) {
    relvec::RelationVector v;
    v.components = std::move(comps);
    v.raw_counts.assign(v.components.size(), 0);
    v.zero = false;
    return v;
}

void loocv_suite(Check& c) {
    using Kind = nounmod::ClassificationOutput::Kind;
    // within-class identical vectors
    std::vector<std::string> labels;
    std::vector<relvec::RelationVector> vectors;
    const char* classes[] = {"ag", "loc", "tat", "mat"};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i) {
            std::vector<double> comps(8, 0.1);
            comps[2 * k] = 2.0;
            labels.emplace_back(classes[k]);
            vectors.push_back(make_vector(comps));
        }
    auto out = nounmod::loocv_classify(labels, vectors, 0.0, 1);
    c.expect(metrics::accuracy(out, labels) == 1.0, "identical-within-class accuracy");

    std::mt19937_64 gen(600);
    auto vocab = nounmod::class30_labels();
    const double ts[] = {0.0, 0.02, 0.05, 0.1, 0.2, 0.5};
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 3 + gen() % 40;
        std::vector<relvec::RelationVector> vs;
        std::vector<std::string> l30, l5;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> comps(10);
            for (auto& x : comps) x = round % 2 ? static_cast<double>(gen() % 3) : std::log1p(gen() % 1000);
            comps[gen() % 10] += 1;
            vs.push_back(make_vector(comps));
            l30.emplace_back(vocab[gen() % vocab.size()]);
            l5.emplace_back(nounmod::collapse_class(l30.back()));
        }
        auto nbs = nounmod::loocv_neighbours(vs, round);
        for (std::size_t i = 0; i < n; ++i)
            c.expect(nbs[i].first != i && nbs[i].second != i, "self neighbour in round " + std::to_string(round));

        std::size_t prev = 0;
        for (double t : ts) {
            auto o = nounmod::apply_margin_rule(nbs, l30, t);
            auto abst = static_cast<std::size_t>(
                std::count_if(o.begin(), o.end(), [](auto& x) { return x.kind == Kind::Abstain; }));
            c.expect(abst >= prev, "abstention not monotone in round " + std::to_string(round));
            prev = abst;
        }

        for (double t : {-0.1, 0.0, 0.1}) {
            auto fine = nounmod::loocv_classify(l30, vs, t, round);
            auto coarse = nounmod::loocv_classify(l5, vs, t, round);
            auto collapsed = nounmod::apply_margin_rule(nbs, l5, t);
            for (std::size_t i = 0; i < n; ++i) {
                c.expect(coarse[i].kind == collapsed[i].kind && coarse[i].label == collapsed[i].label,
                         "5-class run differs from collapsed neighbours in round " + std::to_string(round));
                if (fine[i].kind == Kind::Single && t == 0.0)
                    c.expect(coarse[i].label == nounmod::collapse_class(fine[i].label),
                             "collapse(30-class label) != 5-class label");
            }
        }
    }
}

void cosine_properties(Check& c) {
    std::mt19937_64 gen(128);
    std::uniform_real_distribution<double> u(0.0, 12.0), s(1e-3, 1e3);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> a(128), b(128);
        for (std::size_t k = 0; k < 128; ++k) {
            a[k] = gen() % 4 == 0 ? u(gen) : 0.0;
            b[k] = gen() % 4 == 0 ? u(gen) : 0.0;
        }
        if (i % 500 == 0) std::fill(a.begin(), a.end(), 0.0);
        double ab = relvec::cosine(a, b);
        c.expect(ab == relvec::cosine(b, a), "symmetry");
        c.expect(ab >= 0.0 && ab <= 1.0, "range");
        auto scaled = a;
        double f = s(gen);
        for (auto& x : scaled) x *= f;
        c.expect(std::abs(relvec::cosine(scaled, b) - ab) <= 1e-12, "scale invariance");
        bool zero = std::all_of(a.begin(), a.end(), [](double x) { return x == 0; });
        if (zero) c.expect(ab == 0.0, "zero norm");
    }
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "relsim");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

/// Runs every pipeline stage into `dir`; returns the names of the CSV outputs.
std::vector<std::string> pipeline(const fs::path& dir, const std::string& jobs, Check& c) {
    const fs::path data = RELSIM_DATA_DIR;
    fs::create_directories(dir);
    auto p = [&](const char* name) { return (dir / name).string(); };
    auto q = (data / "questions.tsv").string();
    auto nm = (data / "nounmod.tsv").string();
    int rc = 0;
    rc |= cli({"index", "build", "--corpus", (data / "corpus").string(), "--doc-mode", "blankline", "--out",
               p("index.bin"), "--jobs", jobs});
    rc |= cli({"vectors", "build", "--questions", q, "--data", nm, "--index", p("index.bin"), "--cache",
               p("cache.tsv"), "--out", p("vectors.tsv"), "--jobs", jobs});
    rc |= cli({"analogy", "solve", "--questions", q, "--vectors", p("vectors.tsv"), "--threshold", "-0.01",
               "--seed", "3", "--out", p("solve.csv"), "--jobs", jobs});
    rc |= cli({"analogy", "rank", "--questions", q, "--vectors", p("vectors.tsv"), "--top-k", "10", "--out",
               p("rank.csv"), "--table", p("rank_table.csv"), "--jobs", jobs});
    rc |= cli({"nounmod", "classify", "--data", nm, "--vectors", p("vectors.tsv"), "--classes", "30",
               "--threshold", "0.02", "--seed", "3", "--out", p("nounmod30.csv"), "--per-class",
               p("perclass30.csv"), "--jobs", jobs});
    rc |= cli({"nounmod", "classify", "--data", nm, "--vectors", p("vectors.tsv"), "--classes", "5", "--seed",
               "3", "--out", p("nounmod5.csv"), "--per-class", p("perclass5.csv"), "--jobs", jobs});
    rc |= cli({"eval", "sweep", "--task", "analogy", "--questions", q, "--vectors", p("vectors.tsv"), "--seed",
               "3", "--out", p("sweep_analogy.csv"), "--jobs", jobs});
    rc |= cli({"eval", "sweep", "--task", "nounmod", "--data", nm, "--vectors", p("vectors.tsv"), "--seed", "3",
               "--out", p("sweep_nounmod.csv"), "--jobs", jobs});
    c.expect(rc == 0, "pipeline exit status");
    return {"vectors.tsv", "solve.csv", "rank.csv", "rank_table.csv", "nounmod30.csv", "perclass30.csv",
            "nounmod5.csv", "perclass5.csv", "sweep_analogy.csv", "sweep_nounmod.csv"};
}

void end_to_end(Check& c) {
    auto root = fs::temp_directory_path() / ("relsim_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    auto start = Clock::now();
    auto files = pipeline(root / "a", "1", c);
    pipeline(root / "b", "1", c);
    pipeline(root / "c", "8", c);
    double secs = seconds_since(start);
    for (const auto& f : files) {
        auto a = read_file(root / "a" / f);
        c.expect(!a.empty(), f + " is empty");
        c.expect(a == read_file(root / "b" / f), f + " differs between runs");
        c.expect(a == read_file(root / "c" / f), f + " differs between --jobs 1 and 8");
    }
    c.expect(read_file(root / "a" / "index.bin") == read_file(root / "c" / "index.bin"), "index differs");
    c.expect(secs < 60, "took " + std::to_string(secs) + " s");
    fs::remove_all(root);
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"oracle equivalence: 10,000 randomized cases match a naive scan in < 60 s", oracle_equivalence},
        {"stemming golden cases and length boundaries", stemming},
        {"query generation: 128 per pair, worked example, 287,232 slots for 374 questions", query_generation},
        {"margin logic on the traffic:street cosines", margin_logic},
        {"metric arithmetic: P/R/F, accuracy, zero denominators", metric_arithmetic},
        {"class collapse group sizes 86/260/146/56/52", class_collapse},
        {"cumulative rank table: synthetic and 369-choice histogram", rank_table},
        {"LOOCV property suite on 200 random datasets", loocv_suite},
        {"cosine properties on 10,000 random pairs", cosine_properties},
        {"end-to-end determinism: repeated and --jobs 1 vs 8 runs are byte-identical in < 60 s", end_to_end},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        auto start = Clock::now();
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::ostringstream timing;
        timing.precision(2);
        timing << std::fixed << seconds_since(start);
        std::cout << (c.failed == 0 ? "PASS" : "FAIL") << "  " << name << "  (" << timing.str() << " s)\n";
        for (const auto& f : c.failures) std::cout << "      " << f << "\n";
        if (c.failed) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
