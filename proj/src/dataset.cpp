#include "fraudkit/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "fraudkit/rng.hpp"

namespace fraudkit {

Dataset::Dataset(std::vector<double> features, std::vector<Label> labels,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)), labels_(std::move(labels)), names_(std::move(feature_names)) {
    if (features_.size() != labels_.size() * names_.size())
        throw DataError("feature matrix size does not match rows x columns");
    for (Label y : labels_)
        if (y > 1) throw DataError("labels must be 0 or 1");
}

std::size_t Dataset::count(Label y) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

std::size_t Dataset::column_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw DataError("unknown column '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    const std::size_t m = cols();
    std::vector<double> f;
    std::vector<Label> y;
    f.reserve(indices.size() * m);
    y.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= rows()) throw DataError("row index out of range");
        auto r = row(i);
        f.insert(f.end(), r.begin(), r.end());
        y.push_back(labels_[i]);
    }
    return Dataset(std::move(f), std::move(y), names_);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

template <class F>
void split_fields(std::string_view line, F&& on_field) {
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            on_field(trim(line.substr(start)));
            return;
        }
        on_field(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column) {
    std::string_view rest(text);
    auto next_line = [&rest](std::string_view& line) {
        while (!rest.empty()) {
            std::size_t nl = rest.find('\n');
            line = rest.substr(0, nl);
            rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line)) throw DataError("CSV has no header row");
    if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);

    std::vector<std::string> header;
    split_fields(line, [&](std::string_view f) { header.emplace_back(f); });
    auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) throw DataError("label column '" + label_column + "' not found in header");
    const std::size_t label_pos = static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_pos) names.push_back(header[j]);

    std::vector<double> features;
    std::vector<Label> labels;
    std::size_t row = 0;
    while (next_line(line)) {
        ++row;
        std::size_t col = 0;
        split_fields(line, [&](std::string_view f) {
            if (col >= header.size()) {
                ++col;
                return;
            }
            double v = 0.0;
            if (!parse_double(f, v))
                throw DataError("non-numeric cell at row " + std::to_string(row) + ", column '" +
                                header[col] + "': '" + std::string(f) + "'");
            if (col == label_pos) {
                if (v != 0.0 && v != 1.0)
                    throw DataError("label outside {0,1} at row " + std::to_string(row) + ": '" +
                                    std::string(f) + "'");
                labels.push_back(static_cast<Label>(v));
            } else {
                features.push_back(v);
            }
            ++col;
        });
        if (col != header.size())
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(col) +
                            " fields, header has " + std::to_string(header.size()));
    }
    return Dataset(std::move(features), std::move(labels), std::move(names));
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str(), label_column);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string format_csv(const Dataset& ds, const std::string& label_column) {
    std::string out;
    for (const auto& name : ds.feature_names()) {
        out += name;
        out += ',';
    }
    out += label_column;
    out += '\n';
    char buf[64];
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (double v : ds.row(i)) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, ptr);
            out += ',';
        }
        out += ds.label(i) ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& ds, const std::string& path, const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << format_csv(ds, label_column);
    if (!out) throw DataError("write failed for '" + path + "'");
}

ZScoreStats zscore_fit(const Dataset& ds, const std::vector<std::string>& columns) {
    ZScoreStats stats;
    if (columns.empty()) return stats;
    if (ds.empty()) throw DataError("zscore_fit on empty dataset");
    const double n = static_cast<double>(ds.rows());
    for (const auto& name : columns) {
        const std::size_t j = ds.column_index(name);
        double sum = 0.0;
        for (std::size_t i = 0; i < ds.rows(); ++i) sum += ds.at(i, j);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            const double d = ds.at(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        stats.columns.push_back(j);
        stats.names.push_back(name);
        stats.mean.push_back(mean);
        stats.stddev.push_back(sd);
        stats.constant.push_back(sd == 0.0);
    }
    return stats;
}

Dataset zscore_apply(const Dataset& ds, const ZScoreStats& stats) {
    std::vector<double> f = ds.features();
    const std::size_t m = ds.cols();
    for (std::size_t s = 0; s < stats.size(); ++s) {
        const std::size_t j = ds.column_index(stats.names[s]);
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            double& v = f[i * m + j];
            v = stats.constant[s] ? 0.0 : (v - stats.mean[s]) / stats.stddev[s];
        }
    }
    return Dataset(std::move(f), ds.labels(), ds.feature_names());
}

namespace {

std::array<std::vector<std::size_t>, 2> indices_by_class(std::span<const Label> labels) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    return by_class;
}

}  // namespace

SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError("test_fraction must lie in (0,1)");
    auto by_class = indices_by_class(ds.labels());
    Rng rng = make_rng(seed);
    SplitPair split;
    for (Label c : {Label{0}, Label{1}}) {
        auto& idx = by_class[c];
        if (idx.size() < 2)
            throw DataError("class " + std::to_string(c) + " has fewer than 2 members");
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
        split.test_indices.insert(split.test_indices.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train_indices.insert(split.train_indices.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

FoldSet stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DataError("k-fold requires k >= 2");
    auto by_class = indices_by_class(labels);
    if (std::min(by_class[0].size(), by_class[1].size()) < k)
        throw DataError("minority class has fewer than k=" + std::to_string(k) + " members");
    Rng rng = make_rng(seed);
    FoldSet folds(k);
    // Dealing round-robin with a counter that carries across classes keeps
    // total fold sizes within one of each other.
    std::size_t counter = 0;
    for (auto& idx : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i : idx) folds[counter++ % k].push_back(i);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

FoldSet stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    return stratified_kfold(std::span<const Label>(ds.labels()), k, seed);
}

}  // namespace fraudkit
