#include "relsim/cli.hpp"

#include "relsim/analogy.hpp"
#include "relsim/error.hpp"
#include "relsim/metrics.hpp"
#include "relsim/nounmod.hpp"
#include "relsim/patterns.hpp"
#include "relsim/relvec.hpp"
#include "relsim/textcorpus.hpp"
#include "relsim/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace relsim::cli {

namespace {

constexpr std::string_view kFormats = R"(File formats:
  corpus          plain UTF-8 text; one document per file (--doc-mode file) or
                  blank-line separated documents (--doc-mode blankline)
  pairs TSV       word1 <TAB> word2 [<TAB> ignored...]; '#' comments
  questions TSV   id, stemA, stemB, c1A, c1B, ..., c5A, c5B, gold (0-4)
  dataset TSV     modifier, head, class30; '#' comments
  terms file      one joining term per line, '#' comments, blank line = empty term
  solve CSV       id,decision,first,second,margin,gold,correct,cos0..cos4
  rank CSV        id,stem,gold,gold_rank,gold_cosine,top
  classify CSV    item,modifier,head,gold,decision,label1,label2,margin,correct
  sweep CSV       threshold,precision,recall,f
  per-class CSV   class,size,precision,recall,f plus a final AVERAGE row
Exit status: 0 ok, 1 usage, 2 data/format, 3 provider/cache.
)";

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string iso_now() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

/// Accumulates what a run used; written next to each output file.
class Manifest {
public:
    Manifest(const std::vector<std::string>& args) : started_(iso_now()) {
        doc_["tool"] = "relsim";
        doc_["version"] = std::string(kToolVersion);
        doc_["command"] = args;
    }

    void set(const std::string& key, nlohmann::json value) { doc_[key] = std::move(value); }

    void input(const fs::path& path) {
        if (fs::is_regular_file(path)) doc_["inputs"][path.string()] = sha256_hex(read_file(path));
    }

    void write_for(const fs::path& output) {
        doc_["started"] = started_;
        doc_["finished"] = iso_now();
        auto path = output;
        path += ".manifest.json";
        write_file_atomic(path, doc_.dump(2) + "\n");
    }

private:
    nlohmann::json doc_;
    std::string started_;
};

const patterns::JoiningTermTable& resolve_terms(const std::string& path,
                                                std::optional<patterns::JoiningTermTable>& slot) {
    if (path.empty()) return patterns::JoiningTermTable::defaults();
    slot.emplace(patterns::JoiningTermTable::load(path));
    return *slot;
}

void write_output(const fs::path& path, std::string_view content, Manifest& manifest) {
    write_file_atomic(path, content);
    manifest.write_for(path);
}

struct Options {
    // index build
    std::vector<std::string> corpus;
    std::string doc_mode = "file";
    // shared
    std::string out;
    std::string index;
    std::string terms;
    std::string cache;
    std::string vectors;
    std::string questions;
    std::string data;
    std::vector<std::string> pairs;
    double threshold = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::size_t top_k = 10;
    int classes = 30;
    std::string per_class;
    std::string table;
    std::string task;
    std::string thresholds = "-0.11:0.11:0.01";
};

int index_build(const Options& o, Manifest& m, std::ostream& out) {
    std::vector<fs::path> sources(o.corpus.begin(), o.corpus.end());
    auto mode = o.doc_mode == "blankline" ? textcorpus::DocMode::BlankLine
                                          : textcorpus::DocMode::FilePerDoc;
    auto docs = textcorpus::ingest(sources, mode);
    auto index = textcorpus::CorpusIndex::build(docs, o.jobs);
    index.save(o.out);
    m.set("index_fingerprint", index.fingerprint());
    m.set("tokenizer_version", index.tokenizer_version());
    m.set("doc_mode", o.doc_mode);
    m.write_for(o.out);
    std::size_t tokens = 0;
    for (const auto& d : docs) tokens += d.tokens.size();
    out << "indexed " << index.document_count() << " documents, " << tokens << " tokens, "
        << index.dictionary().size() << " distinct\n"
        << "fingerprint " << index.fingerprint() << "\n";
    return kOk;
}

int vectors_build(const Options& o, Manifest& m, std::ostream& out) {
    if (o.pairs.empty() && o.questions.empty() && o.data.empty())
        throw UsageError("vectors build needs --pairs, --questions or --data");
    std::optional<patterns::JoiningTermTable> loaded;
    const auto& table = resolve_terms(o.terms, loaded);

    std::vector<relvec::WordPair> pairs;
    std::set<relvec::WordPair> seen;
    auto add = [&](const relvec::WordPair& p) {
        if (seen.insert(p).second) pairs.push_back(p);
    };
    for (const auto& f : o.pairs) {
        m.input(f);
        std::vector<relvec::WordPair> ps;
        try {
            ps = relvec::parse_pairs(read_file(f));
        } catch (const DataError& e) {
            throw DataError(f + ": " + e.what());
        }
        for (const auto& p : ps) add(p);
    }
    if (!o.questions.empty()) {
        m.input(o.questions);
        auto qs = analogy::load_questions(o.questions);
        for (const auto& p : analogy::question_pairs(qs)) add(p);
    }
    if (!o.data.empty()) {
        m.input(o.data);
        for (const auto& lp : nounmod::load_dataset(o.data)) add(lp.pair());
    }

    auto index = textcorpus::CorpusIndex::load(o.index);
    relvec::IndexCountProvider provider(index);
    std::optional<relvec::CountCache> cache_slot;
    if (o.cache.empty()) cache_slot.emplace();
    else cache_slot.emplace(fs::path(o.cache));
    auto& cache = *cache_slot;

    auto vectors = relvec::build_vectors(pairs, table, provider, cache, o.jobs);
    relvec::VectorStore store(table.hash(), table.dimension());
    std::size_t zero = 0;
    for (auto& v : vectors) {
        zero += v.zero ? 1 : 0;
        store.add(std::move(v));
    }
    m.set("index_fingerprint", index.fingerprint());
    m.set("terms_hash", table.hash());
    m.set("provider", provider.identity());
    write_output(o.out, store.serialize(), m);
    out << "built " << store.size() << " vectors (" << zero << " all-zero), terms "
        << table.hash() << "\n";
    return kOk;
}

relvec::VectorStore load_vectors(const Options& o, Manifest& m) {
    std::optional<patterns::JoiningTermTable> loaded;
    const auto& table = resolve_terms(o.terms, loaded);
    auto store = relvec::VectorStore::load(o.vectors);
    m.input(o.vectors);
    store.require_terms_hash(table.hash());
    m.set("terms_hash", table.hash());
    return store;
}

int analogy_solve(const Options& o, Manifest& m, std::ostream& out) {
    auto store = load_vectors(o, m);
    m.input(o.questions);
    auto questions = analogy::load_questions(o.questions);
    auto scored = analogy::score_questions(questions, store);
    auto decisions = analogy::solve(scored, o.threshold, o.seed, o.jobs);
    m.set("seed", o.seed);
    m.set("threshold", o.threshold);

    std::string csv = "id,decision,first,second,margin,gold,correct";
    for (std::size_t c = 0; c < analogy::kChoiceCount; ++c) csv += ",cos" + std::to_string(c);
    csv += "\n";
    std::size_t correct = 0, skipped = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        const auto& d = decisions[i];
        const auto& q = scored[i].question;
        bool ok = d.contains(q.gold);
        correct += ok ? 1 : 0;
        skipped += d.kind == analogy::Decision::Kind::Skip ? 1 : 0;
        csv += csv_field(q.id) + "," + std::string(to_string(d.kind)) + ",";
        csv += (d.guess_count() >= 1 ? std::to_string(d.first) : "") + ",";
        csv += (d.guess_count() == 2 ? std::to_string(d.second) : "") + ",";
        csv += (d.margin ? format_double(*d.margin) : "") + ",";
        csv += std::to_string(q.gold) + "," + (ok ? "1" : "0");
        for (double c : scored[i].cosines) csv += "," + format_double(c);
        csv += "\n";
    }
    write_output(o.out, csv, m);

    auto r = metrics::analogy_prf(decisions, scored);
    std::size_t n = scored.size();
    std::size_t answered = n - skipped;
    out << "Correct    " << correct << "\n"
        << "Incorrect  " << answered - std::min(answered, correct) << "\n"
        << "Skipped    " << skipped << "\n"
        << "Total      " << n << "\n"
        << "Precision  " << r.correct << " / " << r.guesses << "  "
        << metrics::format_percent(r.precision) << "\n"
        << "Recall     " << r.correct << " / " << r.possible << "  "
        << metrics::format_percent(r.recall) << "\n"
        << "F                     " << metrics::format_percent(r.f) << "\n";
    return kOk;
}

std::string rank_table_text(std::span<const analogy::RankRow> rows) {
    std::ostringstream ss;
    ss << "rank  matches  matches%  cumulative  cumulative%\n";
    for (const auto& r : rows) {
        ss << std::setw(4) << r.rank << "  " << std::setw(7) << r.matches << "  " << std::setw(8)
           << metrics::format_percent(r.fraction) << "  " << std::setw(10) << r.cumulative << "  "
           << std::setw(11) << metrics::format_percent(r.cumulative_fraction) << "\n";
    }
    return ss.str();
}

int analogy_rank(const Options& o, Manifest& m, std::ostream& out) {
    auto store = load_vectors(o, m);
    m.input(o.questions);
    auto questions = analogy::load_questions(o.questions);
    std::vector<relvec::WordPair> pool;
    auto results = analogy::rank_experiment(questions, store, o.top_k, &pool, o.jobs);
    m.set("top_k", o.top_k);

    std::string csv = "id,stem,gold,gold_rank,gold_cosine,top\n";
    std::vector<std::size_t> ranks;
    for (const auto& r : results) {
        ranks.push_back(r.gold_rank);
        std::string top;
        for (auto idx : r.top) {
            if (!top.empty()) top.push_back(';');
            top += patterns::to_string(pool[idx]);
        }
        csv += csv_field(r.id) + "," + csv_field(patterns::to_string(r.stem)) + "," +
               csv_field(patterns::to_string(r.gold)) + "," + std::to_string(r.gold_rank) + "," +
               format_double(r.gold_cosine) + "," + csv_field(top) + "\n";
    }
    write_output(o.out, csv, m);

    auto rows = analogy::cumulative_rank_table(ranks, o.top_k);
    if (!o.table.empty()) {
        std::string t = "rank,matches,matches_fraction,cumulative,cumulative_fraction\n";
        for (const auto& r : rows)
            t += std::to_string(r.rank) + "," + std::to_string(r.matches) + "," +
                 format_double(r.fraction) + "," + std::to_string(r.cumulative) + "," +
                 format_double(r.cumulative_fraction) + "\n";
        write_output(o.table, t, m);
    }
    out << "ranked " << results.size() << " stems against a pool of " << pool.size() << "\n"
        << rank_table_text(rows);
    return kOk;
}

struct NounmodInputs {
    std::vector<nounmod::LabeledPair> dataset;
    std::vector<relvec::RelationVector> vectors;
    std::vector<std::string> gold;
    std::span<const std::string_view> vocabulary;
};

NounmodInputs load_nounmod(const Options& o, Manifest& m) {
    if (o.classes != 30 && o.classes != 5) throw UsageError("--classes must be 30 or 5");
    auto store = load_vectors(o, m);
    m.input(o.data);
    NounmodInputs in;
    in.dataset = nounmod::load_dataset(o.data);
    for (const auto& lp : in.dataset) {
        in.vectors.push_back(store.at(lp.pair()));
        in.gold.push_back(o.classes == 30 ? lp.class30 : lp.class5);
    }
    in.vocabulary = o.classes == 30 ? nounmod::class30_labels() : nounmod::class5_labels();
    m.set("classes", o.classes);
    m.set("seed", o.seed);
    return in;
}

std::string per_class_text(const metrics::PerClassReport& report) {
    std::ostringstream ss;
    ss << std::left << std::setw(12) << "class" << std::right << std::setw(6) << "size"
       << std::setw(10) << "precision" << std::setw(9) << "recall" << std::setw(9) << "F"
       << "\n";
    auto line = [&](std::string_view label, std::string size, const metrics::Scores& s) {
        ss << std::left << std::setw(12) << label << std::right << std::setw(6) << size
           << std::setw(10) << metrics::format_percent(s.precision) << std::setw(9)
           << metrics::format_percent(s.recall) << std::setw(9) << metrics::format_percent(s.f)
           << "\n";
    };
    for (const auto& r : report.rows) line(r.label, std::to_string(r.size), r.prf.scores());
    line("average", "", report.macro);
    return ss.str();
}

int nounmod_classify(const Options& o, Manifest& m, std::ostream& out) {
    auto in = load_nounmod(o, m);
    m.set("threshold", o.threshold);
    auto predictions = nounmod::loocv_classify(in.gold, in.vectors, o.threshold, o.seed, o.jobs);

    std::string csv = "item,modifier,head,gold,decision,label1,label2,margin,correct\n";
    for (const auto& p : predictions) {
        const auto& lp = in.dataset[p.item];
        bool ok = p.kind == nounmod::ClassificationOutput::Kind::Single && p.label == in.gold[p.item];
        csv += std::to_string(p.item) + "," + csv_field(lp.modifier) + "," + csv_field(lp.head) +
               "," + in.gold[p.item] + "," + std::string(to_string(p.kind)) + "," + p.label + "," +
               p.second_label + "," + format_double(p.margin) + "," + (ok ? "1" : "0") + "\n";
    }
    write_output(o.out, csv, m);

    auto report = metrics::per_class_prf(predictions, in.gold, in.vocabulary);
    if (!o.per_class.empty()) write_output(o.per_class, metrics::per_class_csv(report), m);
    double acc = metrics::accuracy(predictions, in.gold);
    out << per_class_text(report) << "accuracy " << metrics::format_percent(acc) << "\n";
    return kOk;
}

int eval_sweep(const Options& o, Manifest& m, std::ostream& out) {
    auto thresholds = metrics::parse_thresholds(o.thresholds);
    m.set("thresholds", thresholds);
    m.set("task", o.task);
    std::vector<metrics::SweepRow> rows;
    if (o.task == "analogy") {
        if (o.questions.empty()) throw UsageError("--task analogy needs --questions");
        auto store = load_vectors(o, m);
        m.input(o.questions);
        m.set("seed", o.seed);
        auto questions = analogy::load_questions(o.questions);
        auto scored = analogy::score_questions(questions, store);
        rows = metrics::analogy_sweep(scored, thresholds, o.seed);
    } else {
        if (o.data.empty()) throw UsageError("--task nounmod needs --data");
        auto in = load_nounmod(o, m);
        auto nb = nounmod::loocv_neighbours(in.vectors, o.seed, o.jobs);
        rows = metrics::nounmod_sweep(nb, in.gold, in.vocabulary, thresholds);
    }
    write_output(o.out, metrics::sweep_csv(rows), m);
    out << "threshold  precision  recall      F\n";
    for (const auto& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%+9.3f  %9s  %6s  %5s\n", r.threshold,
                      metrics::format_percent(r.precision).c_str(),
                      metrics::format_percent(r.recall).c_str(),
                      metrics::format_percent(r.f).c_str());
        out << buf;
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"relsim: relational similarity from phrase counts"};
    app.footer(std::string(kFormats));
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Options o;
    auto jobs_opt = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", o.jobs, "Worker threads; results do not depend on it")
            ->check(CLI::Range(1u, 1024u));
    };
    auto terms_opt = [&](CLI::App* cmd, std::string_view what) {
        cmd->add_option("--terms", o.terms, std::string(what))->check(CLI::ExistingFile);
    };

    auto* index_cmd = app.add_subcommand("index", "Corpus index commands")->require_subcommand(1);
    auto* index_build_cmd = index_cmd->add_subcommand("build", "Build a positional index");
    index_build_cmd->add_option("--corpus", o.corpus, "Corpus files or directories")->required();
    index_build_cmd->add_option("--doc-mode", o.doc_mode, "Document boundaries")
        ->check(CLI::IsMember({"file", "blankline"}));
    index_build_cmd->add_option("--out", o.out, "Index file to write")->required();
    jobs_opt(index_build_cmd);

    auto* vectors_cmd = app.add_subcommand("vectors", "Relation vector commands")->require_subcommand(1);
    auto* vectors_build_cmd = vectors_cmd->add_subcommand("build", "Build relation vectors");
    vectors_build_cmd->add_option("--pairs", o.pairs, "Pair TSV file(s)")->check(CLI::ExistingFile);
    vectors_build_cmd->add_option("--questions", o.questions, "Take pairs from a question TSV")
        ->check(CLI::ExistingFile);
    vectors_build_cmd->add_option("--data", o.data, "Take pairs from a noun-modifier dataset")
        ->check(CLI::ExistingFile);
    vectors_build_cmd->add_option("--index", o.index, "Index file")->required()->check(CLI::ExistingFile);
    terms_opt(vectors_build_cmd, "Joining-term file (default: built-in 64 terms)");
    vectors_build_cmd->add_option("--cache", o.cache, "Persistent count cache file");
    vectors_build_cmd->add_option("--out", o.out, "Vector file to write")->required();
    jobs_opt(vectors_build_cmd);

    auto* analogy_cmd = app.add_subcommand("analogy", "Analogy questions")->require_subcommand(1);
    auto* solve_cmd = analogy_cmd->add_subcommand("solve", "Answer multiple-choice questions");
    solve_cmd->add_option("--questions", o.questions, "Question TSV")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--vectors", o.vectors, "Vector file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--threshold", o.threshold, "Margin threshold (negative: double guess)");
    solve_cmd->add_option("--seed", o.seed, "Tie-break seed");
    solve_cmd->add_option("--out", o.out, "Per-question CSV")->required();
    terms_opt(solve_cmd, "Joining-term file the vectors must match");
    jobs_opt(solve_cmd);

    auto* rank_cmd = analogy_cmd->add_subcommand("rank", "Rank the pooled gold pairs for each stem");
    rank_cmd->add_option("--questions", o.questions, "Question TSV")->required()->check(CLI::ExistingFile);
    rank_cmd->add_option("--vectors", o.vectors, "Vector file")->required()->check(CLI::ExistingFile);
    rank_cmd->add_option("--top-k", o.top_k, "Ranks to tabulate")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    rank_cmd->add_option("--out", o.out, "Per-stem CSV")->required();
    rank_cmd->add_option("--table", o.table, "Cumulative rank table CSV");
    terms_opt(rank_cmd, "Joining-term file the vectors must match");
    jobs_opt(rank_cmd);

    auto* nounmod_cmd = app.add_subcommand("nounmod", "Noun-modifier relations")->require_subcommand(1);
    auto* classify_cmd = nounmod_cmd->add_subcommand("classify", "Leave-one-out nearest-neighbour classification");
    classify_cmd->add_option("--data", o.data, "Dataset TSV")->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--vectors", o.vectors, "Vector file")->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--classes", o.classes, "30 or 5")->check(CLI::IsMember({30, 5}));
    classify_cmd->add_option("--threshold", o.threshold, "Margin threshold");
    classify_cmd->add_option("--seed", o.seed, "Tie-break seed");
    classify_cmd->add_option("--out", o.out, "Per-item CSV")->required();
    classify_cmd->add_option("--per-class", o.per_class, "Per-class CSV");
    terms_opt(classify_cmd, "Joining-term file the vectors must match");
    jobs_opt(classify_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluation")->require_subcommand(1);
    auto* sweep_cmd = eval_cmd->add_subcommand("sweep", "Precision/recall over margin thresholds");
    sweep_cmd->add_option("--task", o.task, "analogy or nounmod")->required()
        ->check(CLI::IsMember({"analogy", "nounmod"}));
    sweep_cmd->add_option("--questions", o.questions, "Question TSV (analogy)")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--data", o.data, "Dataset TSV (nounmod)")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--vectors", o.vectors, "Vector file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--thresholds", o.thresholds, "lo:hi:step or comma list");
    sweep_cmd->add_option("--classes", o.classes, "30 or 5 (nounmod)")->check(CLI::IsMember({30, 5}));
    sweep_cmd->add_option("--seed", o.seed, "Tie-break seed");
    sweep_cmd->add_option("--out", o.out, "Sweep CSV")->required();
    terms_opt(sweep_cmd, "Joining-term file the vectors must match");
    jobs_opt(sweep_cmd);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        // Show the failing subcommand's usage.
        for (auto* cmd : {index_build_cmd, vectors_build_cmd, solve_cmd, rank_cmd, classify_cmd, sweep_cmd})
            if (cmd->parsed()) {
                err << cmd->help();
                return kUsage;
            }
        err << app.help();
        return kUsage;
    }

    Manifest manifest(args);
    try {
        if (index_build_cmd->parsed()) return index_build(o, manifest, out);
        if (vectors_build_cmd->parsed()) return vectors_build(o, manifest, out);
        if (solve_cmd->parsed()) return analogy_solve(o, manifest, out);
        if (rank_cmd->parsed()) return analogy_rank(o, manifest, out);
        if (classify_cmd->parsed()) return nounmod_classify(o, manifest, out);
        if (sweep_cmd->parsed()) return eval_sweep(o, manifest, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ProviderError& e) {
        err << "provider error: " << e.what() << "\n";
        return kProvider;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
    err << app.help();
    return kUsage;
}

} // namespace relsim::cli
