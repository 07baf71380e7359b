#include "fraudkit/resample.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "fraudkit/knn.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

std::string to_string(ResampleKind kind) {
    switch (kind) {
        case ResampleKind::None: return "orig";
        case ResampleKind::RUS: return "rus";
        case ResampleKind::SMOTE: return "smote";
        case ResampleKind::SMOTEENN: return "smoteenn";
    }
    return "?";
}

ResampleKind parse_resample_kind(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "none" || s == "orig") return ResampleKind::None;
    if (s == "rus") return ResampleKind::RUS;
    if (s == "smote") return ResampleKind::SMOTE;
    if (s == "smoteenn") return ResampleKind::SMOTEENN;
    throw std::invalid_argument("unknown resampler '" + name + "'");
}

std::size_t ResampledTrainingSet::synthetic_count() const {
    return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), Provenance::Synthetic));
}

namespace {

Label minority_label(const Dataset& ds) { return ds.positives() <= ds.negatives() ? Label{1} : Label{0}; }

std::vector<std::size_t> rows_with_label(const Dataset& ds, Label y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.rows(); ++i)
        if (ds.label(i) == y) idx.push_back(i);
    return idx;
}

}  // namespace

ResampledTrainingSet rus(const Dataset& train, std::uint64_t seed) {
    if (train.positives() == 0 || train.negatives() == 0)
        throw DataError("rus: both classes must be non-empty");
    const Label minority = minority_label(train);
    const std::size_t n_min = train.count(minority);
    std::vector<std::size_t> majority = rows_with_label(train, static_cast<Label>(1 - minority));

    Rng rng = make_rng(seed);
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(n_min);

    std::vector<bool> keep(train.rows(), false);
    for (std::size_t i : majority) keep[i] = true;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < train.rows(); ++i)
        if (keep[i] || train.label(i) == minority) rows.push_back(i);

    return {train.subset(rows), std::vector<Provenance>(rows.size(), Provenance::Original)};
}

ResampledTrainingSet smote(const Dataset& train, int k, std::uint64_t seed) {
    if (k < 1) throw DataError("smote: k must be >= 1");
    const Label minority = minority_label(train);
    const std::vector<std::size_t> min_rows = rows_with_label(train, minority);
    if (min_rows.size() < 2) throw DataError("smote: minority class needs at least 2 rows");

    const std::size_t m = train.cols();
    const std::size_t n_min = min_rows.size();
    const std::size_t n_new = train.rows() - 2 * n_min;
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n_min - 1);

    std::vector<double> min_pts;
    min_pts.reserve(n_min * m);
    for (std::size_t i : min_rows) {
        auto r = train.row(i);
        min_pts.insert(min_pts.end(), r.begin(), r.end());
    }

    std::vector<double> features = train.features();
    std::vector<Label> labels = train.labels();
    features.reserve(features.size() + n_new * m);
    labels.reserve(labels.size() + n_new);

    if (n_new > 0) {
        const KdTree tree(min_pts, m);
        std::vector<std::vector<std::size_t>> neighbours(n_min);
        Rng rng = make_rng(seed);
        std::uniform_int_distribution<std::size_t> pick_seed(0, n_min - 1);
        std::uniform_int_distribution<std::size_t> pick_nn(0, kk - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t s = 0; s < n_new; ++s) {
            const std::size_t a = pick_seed(rng);
            auto& nn = neighbours[a];
            if (nn.empty()) nn = tree.nearest({min_pts.data() + a * m, m}, kk, a);
            const std::size_t b = nn[pick_nn(rng)];
            const double u = unit(rng);
            const double* xa = min_pts.data() + a * m;
            const double* xb = min_pts.data() + b * m;
            for (std::size_t j = 0; j < m; ++j) features.push_back(xa[j] + u * (xb[j] - xa[j]));
            labels.push_back(minority);
        }
    }

    std::vector<Provenance> prov(train.rows(), Provenance::Original);
    prov.resize(labels.size(), Provenance::Synthetic);
    return {Dataset(std::move(features), std::move(labels), train.feature_names()), std::move(prov)};
}

std::vector<std::size_t> enn_keep(const Dataset& data, int k) {
    if (k < 1) throw DataError("enn: k must be >= 1");
    if (data.rows() <= static_cast<std::size_t>(k)) throw DataError("enn: need more rows than k");
    const auto kk = static_cast<std::size_t>(k);
    const auto nn = KdTree(data.features(), data.cols()).all_nearest(kk);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        std::size_t disagree = 0;
        for (std::size_t r = 0; r < kk; ++r) disagree += data.label(nn[i * kk + r]) != data.label(i);
        if (2 * disagree <= kk) keep.push_back(i);
    }
    return keep;
}

Dataset enn(const Dataset& data, int k) {
    const auto keep = enn_keep(data, k);
    return data.subset(keep);
}

ResampledTrainingSet smoteenn(const Dataset& train, int smote_k, int enn_k, std::uint64_t seed) {
    ResampledTrainingSet over = smote(train, smote_k, seed);
    const auto keep = enn_keep(over.dataset, enn_k);
    std::vector<Provenance> prov;
    prov.reserve(keep.size());
    for (std::size_t i : keep) prov.push_back(over.provenance[i]);
    return {over.dataset.subset(keep), std::move(prov)};
}

ResampledTrainingSet resample(const Dataset& train, const ResampleMethod& method) {
    switch (method.kind) {
        case ResampleKind::None:
            return {train, std::vector<Provenance>(train.rows(), Provenance::Original)};
        case ResampleKind::RUS: return rus(train, method.seed);
        case ResampleKind::SMOTE: return smote(train, method.smote_k, method.seed);
        case ResampleKind::SMOTEENN: return smoteenn(train, method.smote_k, method.enn_k, method.seed);
    }
    throw DataError("unknown resample kind");
}

}  // namespace fraudkit
