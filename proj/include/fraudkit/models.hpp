#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudkit/boost.hpp"
#include "fraudkit/dataset.hpp"
#include "fraudkit/linear.hpp"
#include "fraudkit/tree.hpp"

namespace fraudkit {

enum class ModelFamily { LR, DT, RF, XGB };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);
inline constexpr ModelFamily kAllFamilies[] = {ModelFamily::LR, ModelFamily::DT, ModelFamily::RF, ModelFamily::XGB};

/// Hyperparameters as a JSON object. `max_depth: null` means unlimited;
/// `scale_pos_weight` may be a number, "ratio" or "sqrt_ratio".
using ParamSet = nlohmann::json;

class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> param_names(ModelFamily family);
/// Throws ParamError on names the family does not understand.
void validate_params(ModelFamily family, const ParamSet& params);

LrConfig lr_config(const ParamSet& params, std::uint64_t seed);
DtConfig dt_config(const ParamSet& params, std::uint64_t seed);
RfConfig rf_config(const ParamSet& params, std::uint64_t seed);
BoostConfig boost_config(const ParamSet& params, std::uint64_t seed);

/// Common fit/score contract over the four model families.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual ModelFamily family() const = 0;
    virtual void fit(const Dataset& train) = 0;
    virtual double predict_proba(std::span<const double> x) const = 0;

    std::vector<double> predict_proba(const Dataset& ds) const;
};

std::unique_ptr<Classifier> make_classifier(ModelFamily family, const ParamSet& params, std::uint64_t seed);

}  // namespace fraudkit
