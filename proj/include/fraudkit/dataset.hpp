#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraudkit {

using Label = std::uint8_t;

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major feature matrix with a binary label per row.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<double> features, std::vector<Label> labels,
            std::vector<std::string> feature_names);

    std::size_t rows() const { return labels_.size(); }
    std::size_t cols() const { return names_.size(); }
    bool empty() const { return labels_.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * cols(), cols()};
    }
    double at(std::size_t i, std::size_t j) const { return features_[i * cols() + j]; }
    Label label(std::size_t i) const { return labels_[i]; }

    const std::vector<double>& features() const { return features_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return names_; }

    std::size_t count(Label y) const;
    std::size_t positives() const { return count(1); }
    std::size_t negatives() const { return count(0); }

    /// Index of a named column; throws DataError if absent.
    std::size_t column_index(const std::string& name) const;

    /// Rows in the given order (duplicates allowed).
    Dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<double> features_;
    std::vector<Label> labels_;
    std::vector<std::string> names_;
};

Dataset load_csv(const std::string& path, const std::string& label_column);
Dataset parse_csv(const std::string& text, const std::string& label_column);

/// Writes features in header order followed by the label column.
void write_csv(const Dataset& ds, const std::string& path, const std::string& label_column);
std::string format_csv(const Dataset& ds, const std::string& label_column);

struct ZScoreStats {
    std::vector<std::size_t> columns;
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> stddev;  // population convention
    std::vector<bool> constant;

    std::size_t size() const { return columns.size(); }
};

ZScoreStats zscore_fit(const Dataset& ds, const std::vector<std::string>& columns);
Dataset zscore_apply(const Dataset& ds, const ZScoreStats& stats);

struct SplitPair {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Per-class test count is round(class_count * test_fraction). Index lists are sorted.
SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

using FoldSet = std::vector<std::vector<std::size_t>>;

FoldSet stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed);
FoldSet stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

}  // namespace fraudkit
