#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

enum class ResampleKind { None, RUS, SMOTE, SMOTEENN };

std::string to_string(ResampleKind kind);
/// Accepts "none"/"orig", "rus", "smote", "smoteenn" (case-insensitive).
ResampleKind parse_resample_kind(const std::string& name);

struct ResampleMethod {
    ResampleKind kind = ResampleKind::None;
    int smote_k = 5;
    int enn_k = 3;
    std::uint64_t seed = 0;
};

enum class Provenance : std::uint8_t { Original, Synthetic };

struct ResampledTrainingSet {
    Dataset dataset;
    std::vector<Provenance> provenance;  // one tag per row of `dataset`

    std::size_t synthetic_count() const;
};

/// Random undersampling of the majority class down to the minority count.
ResampledTrainingSet rus(const Dataset& train, std::uint64_t seed);

/// SMOTE oversampling of the minority class until both classes have equal counts.
/// Original rows come first, in input order, followed by synthetic rows.
ResampledTrainingSet smote(const Dataset& train, int k, std::uint64_t seed);

/// Edited nearest neighbours: drops every row whose label disagrees with the
/// strict majority of its k nearest neighbours. Decisions are made against the
/// input and applied together. Returns the indices of the kept rows.
std::vector<std::size_t> enn_keep(const Dataset& data, int k);
Dataset enn(const Dataset& data, int k);

ResampledTrainingSet smoteenn(const Dataset& train, int smote_k, int enn_k, std::uint64_t seed);

/// Dispatches on method.kind; None returns the input with all rows tagged original.
ResampledTrainingSet resample(const Dataset& train, const ResampleMethod& method);

}  // namespace fraudkit
