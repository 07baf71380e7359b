#include <doctest.h>

#include <functional>

#include "fraudkit/tree.hpp"
#include "support.hpp"

using namespace fraudkit;
using namespace fraudkit::testing;

namespace {

double training_accuracy(const DecisionTree& t, const Dataset& ds) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < ds.rows(); ++i) ok += (dt_predict_proba(t, ds.row(i)) > 0.5) == (ds.label(i) != 0);
    return static_cast<double>(ok) / static_cast<double>(ds.rows());
}

}  // namespace

TEST_SUITE("models_tree") {

TEST_CASE("entropy examples and symmetry") {
    CHECK(entropy(0.5) == 1.0);
    CHECK(entropy(0.0) == 0.0);
    CHECK(entropy(1.0) == 0.0);
    CHECK(entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        CHECK(entropy(p) == doctest::Approx(entropy(1.0 - p)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(entropy(1.5), std::invalid_argument);
    CHECK_THROWS_AS(entropy(-0.1), std::invalid_argument);
}

TEST_CASE("information_gain examples") {
    const std::vector<Label> parent{1, 1, 0, 0};
    CHECK(information_gain(parent, std::vector<Label>{1, 1}, std::vector<Label>{0, 0}) == 1.0);
    CHECK(information_gain(parent, std::vector<Label>{1, 0}, std::vector<Label>{1, 0}) == 0.0);
    const std::vector<Label> p2{1, 0, 0, 0, 0, 1};
    CHECK(information_gain(p2, std::vector<Label>{1, 0, 0}, std::vector<Label>{0, 0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(information_gain(std::vector<Label>{}, std::vector<Label>{}, std::vector<Label>{}), std::invalid_argument);
}

TEST_CASE("information gain is never negative") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 30, cut = 1 + rng() % (n - 1);
        std::vector<Label> y(n);
        for (auto& v : y) v = rng() % 2;
        const std::span<const Label> all(y);
        CHECK(information_gain(all, all.subspan(0, cut), all.subspan(cut)) >= -1e-15);
    }
}

TEST_CASE("best_split examples") {
    const Dataset ds(std::vector<double>{1, 2, 3, 4}, {0, 0, 1, 1}, {"x"});
    const std::vector<std::size_t> rows{0, 1, 2, 3}, feats{0};
    const auto s = best_split(ds, rows, feats);
    REQUIRE(s);
    CHECK(s->feature == 0);
    CHECK(s->threshold == 2.5);
    CHECK(s->gain == 1.0);

    const Dataset flat(std::vector<double>{7, 7, 7, 7}, {0, 1, 0, 1}, {"x"});
    CHECK_FALSE(best_split(flat, rows, feats));
    const Dataset pure(std::vector<double>{1, 2, 3, 4}, {1, 1, 1, 1}, {"x"});
    CHECK_FALSE(best_split(pure, rows, feats));
}

TEST_CASE("best_split ties go to the lowest feature, then the lowest threshold") {
    // Both features separate perfectly; feature 0 must win.
    const Dataset ds(std::vector<double>{1, 10, 2, 20, 3, 30, 4, 40}, {0, 0, 1, 1}, {"a", "b"});
    const std::vector<std::size_t> rows{0, 1, 2, 3}, feats{1, 0};
    CHECK(best_split(ds, rows, feats)->feature == 0);
    // Labels 0,1,0 give equal gain at 1.5 and 2.5.
    const Dataset line(std::vector<double>{1, 2, 3}, {0, 1, 0}, {"x"});
    const std::vector<std::size_t> r3{0, 1, 2}, f0{0};
    CHECK(best_split(line, r3, f0)->threshold == 1.5);
}

TEST_CASE("dt_fit examples") {
    SUBCASE("XOR is fitted exactly") {
        const Dataset xor4(std::vector<double>{0, 0, 0, 1, 1, 0, 1, 1}, {0, 1, 1, 0}, {"a", "b"});
        CHECK(training_accuracy(dt_fit(xor4, {}), xor4) == 1.0);
    }
    SUBCASE("single class gives one leaf") {
        const auto t = dt_fit(make_blobs(0, 12, 2, 0.0, 2), {});
        CHECK(t.nodes.size() == 1);
        CHECK(t.nodes[0].value == 1.0);
    }
    SUBCASE("root-only tree predicts prevalence") {
        const Dataset ds = make_blobs(30, 10, 2, 1.0, 5);
        const auto t = dt_fit(ds, {0, 2, 0});
        CHECK(t.nodes.size() == 1);
        CHECK(dt_predict_proba(t, ds.row(0)) == doctest::Approx(0.25));
    }
    SUBCASE("hand-traced two-level tree") {
        // Root: x0 <= 1.5 (ties with x1 <= 0.5, lower feature wins). Right child splits pure on x0 <= 3.5.
        const Dataset ds(std::vector<double>{1, 1, 2, 9, 3, 0, 4, 5}, {0, 1, 1, 0}, {"x0", "x1"});
        const auto t = dt_fit(ds, {});
        CHECK(t.nodes[0].feature == 0);
        CHECK(t.nodes[0].threshold == 1.5);
        CHECK(t.depth() == 2);
        CHECK(dt_predict_proba(t, std::vector<double>{1.2, 100.0}) == 0.0);
        CHECK(dt_predict_proba(t, std::vector<double>{1.8, 100.0}) == 1.0);
    }
    SUBCASE("config errors") { CHECK_THROWS(dt_fit(make_blobs(4, 4, 1, 1.0, 1), {kUnlimitedDepth, 1, 0})); }
}

TEST_CASE("every node of a fitted tree matches brute-force split enumeration") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset ds = make_blobs(12, 8, 2, 1.2, 40 + seed);
        const auto tree = dt_fit(ds, {});
        std::function<void(int, std::vector<std::size_t>)> walk = [&](int id, std::vector<std::size_t> rows) {
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
            if (node.is_leaf()) {
                double pos = 0;
                for (std::size_t i : rows) pos += ds.label(i);
                CHECK(node.value == doctest::Approx(pos / static_cast<double>(rows.size())));
                return;
            }
            const RefSplit ref = brute_best_split(ds, rows);
            CHECK(node.gain == doctest::Approx(ref.gain).epsilon(1e-10));
            CHECK(node.feature == ref.feature);
            CHECK(node.threshold == ref.threshold);
            std::vector<std::size_t> l, r;
            for (std::size_t i : rows) (ds.at(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? l : r).push_back(i);
            walk(node.left, l);
            walk(node.right, r);
        };
        std::vector<std::size_t> all(ds.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        walk(0, all);
    }
}

TEST_CASE("fully grown trees fit consistent data perfectly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset ds = make_uniform(300, 3, 0.3, seed);
        CHECK(training_accuracy(dt_fit(ds, {}), ds) == 1.0);
    }
}

TEST_CASE("depth limit is honoured") {
    const Dataset ds = make_uniform(300, 3, 0.4, 5);
    for (int d : {1, 2, 4}) CHECK(dt_fit(ds, {d, 2, 0}).depth() <= static_cast<std::size_t>(d));
}

TEST_CASE("tree fitting ignores row order") {
    const Dataset ds = make_uniform(200, 4, 0.35, 12);
    std::vector<std::size_t> perm(ds.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
    const Dataset shuffled = ds.subset(perm);

    // Weighted rows (as used for bootstraps), permuted along with the data.
    std::vector<std::uint32_t> w(ds.rows()), w_perm(ds.rows());
    std::mt19937_64 rng(6);
    for (auto& v : w) v = rng() % 3;
    for (std::size_t i = 0; i < perm.size(); ++i) w_perm[i] = w[perm[i]];

    const auto a = dt_fit(ds, {}, w), b = dt_fit(shuffled, {}, w_perm);
    const Dataset probe = make_uniform(300, 4, 0.5, 99);
    for (std::size_t i = 0; i < probe.rows(); ++i) CHECK(dt_predict_proba(a, probe.row(i)) == dt_predict_proba(b, probe.row(i)));
}

TEST_CASE("random forest examples") {
    const Dataset ds = make_blobs(150, 50, 4, 1.0, 21);
    SUBCASE("a one-tree forest votes like its tree") {
        const auto f = rf_fit(ds, {1, kUnlimitedDepth, 2, false, false, 4});
        REQUIRE(f.trees.size() == 1);
        for (std::size_t i = 0; i < ds.rows(); ++i)
            CHECK(rf_predict_proba(f, ds.row(i)) == (tree_vote(f.trees[0], ds.row(i)) ? 1.0 : 0.0));
    }
    SUBCASE("warm start appends without touching earlier trees") {
        const RfConfig cfg50{50, 6, 2, true, true, 8};
        RfConfig cfg100 = cfg50;
        cfg100.n_estimators = 100;
        const auto f50 = rf_fit(ds, cfg50);
        auto grown = f50;
        rf_grow(grown, ds, cfg100);
        REQUIRE(grown.trees.size() == 100);
        for (std::size_t t = 0; t < 50; ++t) CHECK(grown.trees[t] == f50.trees[t]);
        CHECK(grown.trees == rf_fit(ds, cfg100).trees);
        CHECK(grown.oob_score == rf_fit(ds, cfg100).oob_score);
    }
    SUBCASE("scores are the exact mean of hard votes") {
        const auto f = rf_fit(ds, {50, kUnlimitedDepth, 2, false, false, 2});
        const Dataset probe = make_blobs(20, 20, 4, 1.0, 3);
        for (std::size_t i = 0; i < probe.rows(); ++i) {
            std::size_t votes = 0;
            for (const auto& t : f.trees) votes += t.predict(probe.row(i)) > 0.5;
            CHECK(rf_predict_proba(f, probe.row(i)) == static_cast<double>(votes) / 50.0);
        }
    }
    SUBCASE("unanimous forests score 0 or 1") {
        const Dataset sep = make_blobs(40, 40, 2, 30.0, 1);
        const auto f = rf_fit(sep, {10, kUnlimitedDepth, 2, false, false, 1});
        CHECK(rf_predict_proba(f, std::vector<double>{30.0, 30.0}) == 1.0);
        CHECK(rf_predict_proba(f, std::vector<double>{0.0, 0.0}) == 0.0);
    }
    SUBCASE("three trees voting 1,1,0") {
        ForestModel f;
        Tree yes{{TreeNode{}}}, no{{TreeNode{}}};
        yes.nodes[0].value = 0.9;
        no.nodes[0].value = 0.2;
        f.trees = {yes, yes, no};
        CHECK(rf_predict_proba(f, std::vector<double>{0.0}) == doctest::Approx(2.0 / 3.0));
        CHECK_THROWS(rf_predict_proba(ForestModel{}, std::vector<double>{0.0}));
    }
    SUBCASE("oob score is reported") {
        const auto f = rf_fit(ds, {30, kUnlimitedDepth, 2, true, false, 5});
        REQUIRE(f.oob_score);
        CHECK(*f.oob_score > 0.6);
        CHECK_FALSE(f.oob_incomplete);
        CHECK_FALSE(rf_fit(ds, {30, kUnlimitedDepth, 2, false, false, 5}).oob_score);
    }
    SUBCASE("bad input") {
        CHECK_THROWS(rf_fit(make_blobs(10, 0, 2, 0.0, 1), {}));
        CHECK_THROWS(rf_fit(ds, {0, 3, 2, false, false, 0}));
    }
}

TEST_CASE("about e^-1 of rows are out of bag per tree") {
    const Dataset ds = make_uniform(1000, 2, 0.5, 4);
    double total = 0.0;
    const int trees = 40;
    const auto f = rf_fit(ds, {trees, 1, 2, true, false, 77});
    for (std::size_t i = 0; i < ds.rows(); ++i) total += f.oob_trees[i];
    const double frac = total / (1000.0 * trees);
    CHECK(std::abs(frac - std::exp(-1.0)) < 0.01);
}

TEST_CASE("forest with a single tree can leave rows uncovered") {
    const Dataset ds = make_blobs(40, 20, 2, 1.0, 3);
    const auto f = rf_fit(ds, {1, kUnlimitedDepth, 2, true, false, 1});
    CHECK(f.oob_incomplete);
    REQUIRE(f.oob_score);
    CHECK(*f.oob_score >= 0.0);
}

}  // TEST_SUITE
