#include <doctest.h>

#include "relsim/error.hpp"
#include "relsim/nounmod.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace relsim::nounmod;
using Kind = ClassificationOutput::Kind;

namespace {

RelationVector make(std::vector<double> comps) {
    RelationVector v;
    v.components = std::move(comps);
    v.raw_counts.assign(v.components.size(), 0);
    v.zero = false;
    return v;
}

RelationVector random_vector(std::mt19937_64& rng, std::size_t dim, bool coarse) {
    std::vector<double> c(dim);
    for (auto& x : c) x = coarse ? static_cast<double>(rng() % 3) : std::ldexp(static_cast<double>(rng() >> 11), -53);
    if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0; })) c[0] = 1;
    return make(std::move(c));
}

double plain_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return na == 0 || nb == 0 ? 0 : d / std::sqrt(na * nb);
}

// Sizes of the 30 fine-grained classes in the 600-pair dataset.
const std::map<std::string, int> kClassSizes{
    {"ag", 36},  {"ben", 9},   {"cntr", 3},  {"cont", 15}, {"cs", 17},       {"detr", 4},
    {"dir", 8},  {"eff", 34},  {"eq", 5},    {"freq", 16}, {"inst", 35},     {"lat", 22},
    {"lfr", 21}, {"loc", 5},   {"mat", 32},  {"meas", 30}, {"obj", 33},      {"obj_prop", 15},
    {"part", 9}, {"posr", 30}, {"prod", 16}, {"prop", 49}, {"prp", 31},      {"src", 12},
    {"st", 9},   {"tat", 30},  {"top", 45},  {"tthr", 6},  {"type", 16},     {"whl", 7}};

} // namespace

TEST_CASE("label vocabulary and collapse") {
    CHECK(class30_labels().size() == 30);
    CHECK(class5_labels().size() == 5);
    CHECK(std::is_sorted(class30_labels().begin(), class30_labels().end()));
    CHECK(collapse_class("ag") == "participant");
    CHECK(collapse_class("ben") == "participant");
    CHECK(collapse_class("tthr") == "temporality");
    CHECK(collapse_class("cs") == "causality");
    CHECK(collapse_class("lfr") == "spatial");
    CHECK(collapse_class("meas") == "quality");
    CHECK_THROWS_WITH_AS(collapse_class("banana"), doctest::Contains("banana"), relsim::DataError);
    CHECK(is_class30("obj_prop"));
    CHECK_FALSE(is_class30("participant"));
}

TEST_CASE("collapsed group sizes of the 600-pair dataset") {
    REQUIRE(kClassSizes.size() == 30);
    int total = 0;
    std::map<std::string_view, int> groups;
    for (const auto& [label, n] : kClassSizes) {
        REQUIRE(is_class30(label));
        groups[collapse_class(label)] += n;
        total += n;
    }
    CHECK(total == 600);
    CHECK(groups["causality"] == 86);
    CHECK(groups["participant"] == 260);
    CHECK(groups["quality"] == 146);
    CHECK(groups["spatial"] == 56);
    CHECK(groups["temporality"] == 52);
}

TEST_CASE("dataset parsing") {
    auto d = parse_dataset("# modifier head class\nlaser\tprinter\tinst\nflu\tvirus\tcs\n\n");
    REQUIRE(d.size() == 2);
    CHECK(d[0].pair() == WordPair{"laser", "printer"});
    CHECK(d[0].class5 == "participant");
    CHECK(d[1].class5 == "causality");
    CHECK_THROWS_WITH_AS(parse_dataset("a\tb\tzzz\n"), doctest::Contains("zzz"), relsim::DataError);
    CHECK_THROWS_AS(parse_dataset("a\tb\n"), relsim::DataError);
}

TEST_CASE("nearest_two worked examples") {
    std::vector<RelationVector> training{make({1, 0, 0}), make({0, 1, 0}), make({0, 0, 1})};
    relsim::analogy::Rng rng(0);
    auto nb = nearest_two(training[0], training, rng);
    CHECK(nb.first == 0);
    CHECK(nb.first_cosine == doctest::Approx(1.0));
    CHECK(nb.second_cosine == 0.0);
    CHECK(nb.margin == doctest::Approx(1.0));

    auto held = nearest_two(training[0], training, rng, 0);
    CHECK(held.first != 0);
    CHECK(held.second != 0);
    CHECK(held.margin == 0.0);

    std::vector<RelationVector> one{make({1, 0, 0})};
    CHECK_THROWS_AS(nearest_two(training[0], one, rng), relsim::DataError);
}

TEST_CASE("nearest_two agrees with a brute-force scan") {
    std::mt19937_64 gen(23);
    for (int round = 0; round < 200; ++round) {
        std::vector<RelationVector> training;
        for (int i = 0; i < 20; ++i) training.push_back(random_vector(gen, 16, false));
        auto query = random_vector(gen, 16, false);

        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < training.size(); ++i)
            all.emplace_back(plain_cosine(query.components, training[i].components), i);
        std::sort(all.begin(), all.end(), std::greater<>());

        relsim::analogy::Rng rng(round);
        auto nb = nearest_two(query, training, rng);
        CHECK(nb.first == all[0].second);
        CHECK(nb.second == all[1].second);
        CHECK(std::abs(nb.first_cosine - all[0].first) < 1e-12);
        CHECK(std::abs(nb.margin - (all[0].first - all[1].first)) < 1e-12);
        CHECK(nb.margin >= 0);
    }
}

TEST_CASE("margin rule") {
    std::vector<std::string> labels{"meas", "meas", "loc", "ag"};
    Neighbours same{0, 1, 0.9, 0.5, 0.4};
    for (double t : {-1.0, 0.0, 1.0}) {
        auto out = apply_margin_rule(same, labels, t, 3);
        CHECK(out.kind == Kind::Single);
        CHECK(out.label == "meas");
    }
    Neighbours split{2, 0, 0.7, 0.6, 0.1};
    CHECK(apply_margin_rule(split, labels, 0.0, 3).label == "loc");
    CHECK(apply_margin_rule(split, labels, 0.1, 3).kind == Kind::Single);
    CHECK(apply_margin_rule(split, labels, -0.1, 3).kind == Kind::Single);
    CHECK(apply_margin_rule(split, labels, 0.2, 3).kind == Kind::Abstain);
    auto dbl = apply_margin_rule(split, labels, -0.2, 3);
    CHECK(dbl.kind == Kind::Double);
    CHECK(dbl.label == "loc");
    CHECK(dbl.second_label == "meas");
    CHECK(dbl.labels().size() == 2);
}

TEST_CASE("within-class identical vectors classify perfectly") {
    std::mt19937_64 gen(4);
    std::vector<std::string> labels;
    std::vector<RelationVector> vectors;
    const char* classes[] = {"ag", "loc", "tat"};
    for (int c = 0; c < 3; ++c) {
        std::vector<double> comps(6, 0.0);
        comps[2 * c] = 1.0;
        comps[2 * c + 1] = 0.5;
        for (int k = 0; k < 3 + c; ++k) {
            labels.emplace_back(classes[c]);
            vectors.push_back(make(comps));
        }
    }
    for (double t : {-0.5, 0.0, 0.5}) {
        auto out = loocv_classify(labels, vectors, t, 9);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].kind == Kind::Single);
            CHECK(out[i].label == labels[i]);
        }
    }
}

TEST_CASE("loocv properties on random datasets") {
    std::mt19937_64 gen(77);
    auto vocab = class30_labels();
    const std::vector<double> up{0.0, 0.01, 0.05, 0.1, 0.3, 1.0};
    for (int round = 0; round < 60; ++round) {
        std::size_t n = 3 + gen() % 30;
        bool coarse = round % 2 == 0;  // coarse vectors force cosine ties
        std::vector<RelationVector> vectors;
        std::vector<std::string> labels30, labels5;
        for (std::size_t i = 0; i < n; ++i) {
            vectors.push_back(random_vector(gen, 8, coarse));
            labels30.emplace_back(vocab[gen() % vocab.size()]);
            labels5.emplace_back(collapse_class(labels30.back()));
        }
        auto nbs = loocv_neighbours(vectors, round);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(nbs[i].first != i);
            CHECK(nbs[i].second != i);
            CHECK(nbs[i].first != nbs[i].second);
        }

        std::size_t prev_abstain = 0, prev_double = 0;
        for (double t : up) {
            auto out = apply_margin_rule(nbs, labels30, t);
            auto abst = std::count_if(out.begin(), out.end(), [](auto& o) { return o.kind == Kind::Abstain; });
            CHECK(static_cast<std::size_t>(abst) >= prev_abstain);
            prev_abstain = abst;

            auto neg = apply_margin_rule(nbs, labels30, -t);
            auto dbl = std::count_if(neg.begin(), neg.end(), [](auto& o) { return o.kind == Kind::Double; });
            CHECK(static_cast<std::size_t>(dbl) >= prev_double);
            prev_double = dbl;
        }

        auto at0 = loocv_classify(labels30, vectors, 0.0, round);
        for (const auto& o : at0) CHECK(o.kind == Kind::Single);

        // the chosen neighbours do not depend on the labels
        for (double t : {-0.2, 0.0, 0.2}) {
            auto direct5 = loocv_classify(labels5, vectors, t, round);
            auto via30 = apply_margin_rule(nbs, labels5, t);
            REQUIRE(direct5.size() == via30.size());
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(direct5[i].kind == via30[i].kind);
                CHECK(direct5[i].label == via30[i].label);
                CHECK(direct5[i].neighbour1 == via30[i].neighbour1);
            }
        }
    }
}

TEST_CASE("loocv is independent of job count and needs three items") {
    std::mt19937_64 gen(5);
    std::vector<RelationVector> vectors;
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) {
        vectors.push_back(random_vector(gen, 8, true));
        labels.emplace_back(class30_labels()[gen() % 30]);
    }
    auto a = loocv_classify(labels, vectors, -0.05, 3, 1);
    auto b = loocv_classify(labels, vectors, -0.05, 3, 8);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].item == i);
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].label == b[i].label);
        CHECK(a[i].neighbour1 == b[i].neighbour1);
        CHECK(a[i].neighbour2 == b[i].neighbour2);
    }
    std::vector<RelationVector> two(vectors.begin(), vectors.begin() + 2);
    std::vector<std::string> two_labels(labels.begin(), labels.begin() + 2);
    CHECK_THROWS_AS(loocv_classify(two_labels, two, 0.0, 0), relsim::DataError);
}
