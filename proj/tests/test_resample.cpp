#include <doctest.h>

#include <map>

#include "fraudkit/knn.hpp"
#include "fraudkit/resample.hpp"
#include "support.hpp"

using namespace fraudkit;
using namespace fraudkit::testing;

namespace {

std::vector<std::size_t> rows_of(const Dataset& ds, Label y) {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < ds.rows(); ++i)
        if (ds.label(i) == y) r.push_back(i);
    return r;
}

bool same_row(const Dataset& a, std::size_t i, const Dataset& b, std::size_t j) {
    auto ra = a.row(i), rb = b.row(j);
    return a.label(i) == b.label(j) && std::equal(ra.begin(), ra.end(), rb.begin(), rb.end());
}

}  // namespace

TEST_SUITE("resample") {

TEST_CASE("kd-tree matches brute-force neighbours including ties") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Dataset ds = make_uniform(150, 3, 0.5, seed);
        if (seed % 2) {
            // Snap to a coarse lattice so that distance ties are common.
            std::vector<double> f = ds.features();
            for (double& v : f) v = std::round(v * 4.0);
            ds = Dataset(std::move(f), ds.labels(), ds.feature_names());
        }
        const KdTree tree(ds.features(), ds.cols(), 4);
        std::vector<std::size_t> all(ds.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        for (std::size_t i = 0; i < ds.rows(); i += 7)
            for (std::size_t k : {1u, 3u, 10u}) CHECK(tree.nearest(ds.row(i), k, i) == brute_knn(ds, i, k, all));
    }
}

TEST_CASE("all_nearest matches per-point brute force") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Dataset ds = make_uniform(400, 4, 0.5, seed);
        if (seed % 2) {
            std::vector<double> f = ds.features();
            for (double& v : f) v = std::round(v * 3.0);
            ds = Dataset(std::move(f), ds.labels(), ds.feature_names());
        }
        const KdTree tree(ds.features(), ds.cols(), 8);
        const std::size_t k = 3;
        const auto table = tree.all_nearest(k);
        std::vector<std::size_t> all(ds.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            const std::vector<std::size_t> row(table.begin() + static_cast<std::ptrdiff_t>(i * k),
                                               table.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
            CHECK(row == brute_knn(ds, i, k, all));
        }
    }
    CHECK_THROWS(KdTree(std::vector<double>{1.0, 2.0}, 1).all_nearest(2));
}

TEST_CASE("rus balances by dropping majority rows only") {
    const Dataset ds = make_blobs(90, 10, 2, 2.0, 5);
    const auto out = rus(ds, 1);
    CHECK(out.dataset.negatives() == 10);
    CHECK(out.dataset.positives() == 10);
    CHECK(out.synthetic_count() == 0);

    const auto minority_in = rows_of(ds, 1), minority_out = rows_of(out.dataset, 1);
    REQUIRE(minority_in.size() == minority_out.size());
    for (std::size_t q = 0; q < minority_in.size(); ++q) CHECK(same_row(ds, minority_in[q], out.dataset, minority_out[q]));

    const Dataset balanced = make_blobs(10, 10, 2, 2.0, 6);
    CHECK(rus(balanced, 3).dataset == balanced);
    CHECK(rus(ds, 1).dataset == out.dataset);
    CHECK_FALSE(rus(ds, 2).dataset == out.dataset);
    CHECK_THROWS_AS(rus(make_blobs(10, 0, 2, 1.0, 1), 0), DataError);
}

TEST_CASE("rus also works when label 0 is the minority") {
    const Dataset ds = make_blobs(7, 30, 2, 2.0, 8);
    const auto out = rus(ds, 4);
    CHECK(out.dataset.negatives() == 7);
    CHECK(out.dataset.positives() == 7);
}

TEST_CASE("smote on a two-point segment") {
    const Dataset ds(std::vector<double>{0, 0, 1, 1, 5, 5, 6, 5, 5, 6, 7, 7}, {1, 1, 0, 0, 0, 0}, {"a", "b"});
    const auto out = smote(ds, 1, 42);
    CHECK(out.dataset.positives() == 4);
    CHECK(out.dataset.negatives() == 4);
    for (std::size_t i = ds.rows(); i < out.dataset.rows(); ++i) {
        CHECK(out.provenance[i] == Provenance::Synthetic);
        CHECK(out.dataset.label(i) == 1);
        const double u = out.dataset.at(i, 0);
        CHECK(out.dataset.at(i, 1) == u);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("smote with identical minority points reproduces that point") {
    const Dataset ds(std::vector<double>{2, 3, 2, 3, 0, 0, 1, 0, 0, 1, 1, 1}, {1, 1, 0, 0, 0, 0}, {"a", "b"});
    const auto out = smote(ds, 5, 7);
    for (std::size_t i = ds.rows(); i < out.dataset.rows(); ++i) {
        CHECK(out.dataset.at(i, 0) == 2.0);
        CHECK(out.dataset.at(i, 1) == 3.0);
    }
}

TEST_CASE("smote balances, keeps originals first and is seed-deterministic") {
    const Dataset ds = make_blobs(90, 10, 3, 1.0, 12);
    const auto out = smote(ds, 5, 9);
    CHECK(out.dataset.negatives() == 90);
    CHECK(out.dataset.positives() == 90);
    CHECK(out.synthetic_count() == 80);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        CHECK(out.provenance[i] == Provenance::Original);
        CHECK(same_row(ds, i, out.dataset, i));
    }
    CHECK(smote(ds, 5, 9).dataset == out.dataset);
    CHECK_FALSE(smote(ds, 5, 10).dataset == out.dataset);
    CHECK_THROWS_AS(smote(make_blobs(10, 1, 2, 1.0, 1), 5, 0), DataError);
    CHECK_THROWS_AS(smote(ds, 0, 0), DataError);
}

TEST_CASE("enn examples") {
    SUBCASE("single class is untouched") {
        const Dataset ds = make_blobs(20, 0, 2, 0.0, 3);
        CHECK(enn(ds, 3) == ds);
    }
    SUBCASE("isolated positive inside negatives is removed") {
        const Dataset ds(std::vector<double>{0, 0, 1, 0, 0, 1, -1, 0, 0, -1, 0.1, 0.1},
                         {0, 0, 0, 0, 0, 1}, {"a", "b"});
        const Dataset out = enn(ds, 3);
        CHECK(out.rows() == 5);
        CHECK(out.positives() == 0);
    }
    SUBCASE("hand-built 1-D line") {
        // x:     0  1  2  3  4  5
        // label: 0  0  1  0  1  1
        // k=2 neighbours (ties -> lower index): 0:{1,2} 1:{0,2} 2:{1,3} 3:{2,4} 4:{3,5} 5:{4,3}
        // disagreements:                        0:1/2 1:1/2 2:2/2 3:2/2 4:1/2 5:1/2
        const Dataset ds(std::vector<double>{0, 1, 2, 3, 4, 5}, {0, 0, 1, 0, 1, 1}, {"x"});
        CHECK(enn_keep(ds, 2) == std::vector<std::size_t>{0, 1, 4, 5});
        CHECK(enn_keep(ds, 2) == brute_enn_keep(ds, 2));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(enn(make_blobs(2, 1, 2, 0.0, 1), 3), DataError);
        CHECK_THROWS_AS(enn(make_blobs(5, 5, 2, 0.0, 1), 0), DataError);
    }
}

TEST_CASE("enn matches the brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Dataset ds = make_blobs(40 + seed * 3, 20, 2, 1.0, seed);
        for (int k : {1, 3, 4}) CHECK(enn_keep(ds, k) == brute_enn_keep(ds, static_cast<std::size_t>(k)));
    }
}

TEST_CASE("smoteenn composition") {
    SUBCASE("well separated classes: enn removes nothing") {
        const Dataset ds = make_blobs(60, 8, 2, 25.0, 4);
        const auto a = smoteenn(ds, 5, 3, 17);
        const auto b = smote(ds, 5, 17);
        CHECK(a.dataset == b.dataset);
        CHECK(a.provenance == b.provenance);
        // A second cleaning pass removes nothing either.
        CHECK(enn(a.dataset, 3) == a.dataset);
    }
    SUBCASE("overlapping clusters lose rows and need not balance") {
        const Dataset ds = make_blobs(80, 15, 2, 0.7, 5);
        const auto over = smote(ds, 5, 3);
        const auto both = smoteenn(ds, 5, 3, 3);
        CHECK(both.dataset.rows() < over.dataset.rows());
        CHECK(both.dataset == over.dataset.subset(brute_enn_keep(over.dataset, 3)));
    }
}

TEST_CASE("resample dispatch") {
    const Dataset ds = make_blobs(50, 10, 2, 1.5, 2);
    const auto none = resample(ds, {ResampleKind::None, 5, 3, 1});
    CHECK(none.dataset == ds);
    CHECK(none.synthetic_count() == 0);
    CHECK(resample(ds, {ResampleKind::RUS, 5, 3, 1}).dataset == rus(ds, 1).dataset);
    CHECK(resample(ds, {ResampleKind::SMOTE, 4, 3, 1}).dataset == smote(ds, 4, 1).dataset);
    CHECK(resample(ds, {ResampleKind::SMOTEENN, 4, 2, 1}).dataset == smoteenn(ds, 4, 2, 1).dataset);
    CHECK(parse_resample_kind("SMOTEENN") == ResampleKind::SMOTEENN);
    CHECK(parse_resample_kind("orig") == ResampleKind::None);
    CHECK_THROWS(parse_resample_kind("adasyn"));
}

}  // TEST_SUITE
