#include "fraudkit/models.hpp"

#include <algorithm>
#include <cctype>

namespace fraudkit {

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::LR: return "lr";
        case ModelFamily::DT: return "dt";
        case ModelFamily::RF: return "rf";
        case ModelFamily::XGB: return "xgb";
    }
    return "?";
}

ModelFamily parse_model_family(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "lr") return ModelFamily::LR;
    if (s == "dt") return ModelFamily::DT;
    if (s == "rf") return ModelFamily::RF;
    if (s == "xgb") return ModelFamily::XGB;
    throw ParamError("unknown model family '" + name + "'");
}

std::vector<std::string> param_names(ModelFamily family) {
    switch (family) {
        case ModelFamily::LR: return {"C", "max_iter", "tol"};
        case ModelFamily::DT: return {"max_depth", "min_samples_split"};
        case ModelFamily::RF: return {"n_estimators", "max_depth", "min_samples_split", "oob_score", "warm_start"};
        case ModelFamily::XGB:
            return {"n_estimators", "max_depth", "learning_rate", "gamma", "lambda", "colsample_bytree",
                    "scale_pos_weight"};
    }
    return {};
}

void validate_params(ModelFamily family, const ParamSet& params) {
    if (params.is_null()) return;
    if (!params.is_object()) throw ParamError("parameters must be a JSON object");
    const auto names = param_names(family);
    for (const auto& [key, value] : params.items())
        if (std::find(names.begin(), names.end(), key) == names.end())
            throw ParamError("unknown parameter '" + key + "' for model " + to_string(family));
}

namespace {

template <class T>
T get_or(const ParamSet& p, const char* key, T fallback) {
    if (!p.is_object() || !p.contains(key)) return fallback;
    try {
        return p.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParamError(std::string("bad value for parameter '") + key + "'");
    }
}

int depth_or(const ParamSet& p, int fallback) {
    if (!p.is_object() || !p.contains("max_depth")) return fallback;
    const auto& v = p.at("max_depth");
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "unlimited")) return kUnlimitedDepth;
    if (!v.is_number_integer()) throw ParamError("max_depth must be an integer, null or \"unlimited\"");
    return v.get<int>();
}

class LrClassifier final : public Classifier {
public:
    explicit LrClassifier(LrConfig cfg) : cfg_(cfg) {}
    ModelFamily family() const override { return ModelFamily::LR; }
    void fit(const Dataset& train) override { model_ = lr_fit(train, cfg_); }
    double predict_proba(std::span<const double> x) const override { return lr_predict_proba(model_, x); }

private:
    LrConfig cfg_;
    LogisticModel model_;
};

class DtClassifier final : public Classifier {
public:
    explicit DtClassifier(DtConfig cfg) : cfg_(cfg) {}
    ModelFamily family() const override { return ModelFamily::DT; }
    void fit(const Dataset& train) override { tree_ = dt_fit(train, cfg_); }
    double predict_proba(std::span<const double> x) const override { return dt_predict_proba(tree_, x); }

private:
    DtConfig cfg_;
    DecisionTree tree_;
};

class RfClassifier final : public Classifier {
public:
    explicit RfClassifier(RfConfig cfg) : cfg_(cfg) {}
    ModelFamily family() const override { return ModelFamily::RF; }
    void fit(const Dataset& train) override { forest_ = rf_fit(train, cfg_); }
    double predict_proba(std::span<const double> x) const override { return rf_predict_proba(forest_, x); }

private:
    RfConfig cfg_;
    ForestModel forest_;
};

class XgbClassifier final : public Classifier {
public:
    explicit XgbClassifier(BoostConfig cfg) : cfg_(cfg) {}
    ModelFamily family() const override { return ModelFamily::XGB; }
    void fit(const Dataset& train) override { model_ = xgb_fit(train, cfg_); }
    double predict_proba(std::span<const double> x) const override { return xgb_predict_proba(model_, x); }

private:
    BoostConfig cfg_;
    BoostModel model_;
};

}  // namespace

LrConfig lr_config(const ParamSet& p, std::uint64_t seed) {
    validate_params(ModelFamily::LR, p);
    LrConfig cfg;
    cfg.c = get_or(p, "C", cfg.c);
    cfg.max_iter = get_or(p, "max_iter", cfg.max_iter);
    cfg.tol = get_or(p, "tol", cfg.tol);
    cfg.seed = seed;
    if (!(cfg.c > 0)) throw ParamError("C must be positive");
    if (cfg.max_iter < 1) throw ParamError("max_iter must be positive");
    return cfg;
}

DtConfig dt_config(const ParamSet& p, std::uint64_t seed) {
    validate_params(ModelFamily::DT, p);
    DtConfig cfg;
    cfg.max_depth = depth_or(p, cfg.max_depth);
    cfg.min_samples_split = get_or(p, "min_samples_split", cfg.min_samples_split);
    cfg.seed = seed;
    if (cfg.min_samples_split < 2) throw ParamError("min_samples_split must be >= 2");
    return cfg;
}

RfConfig rf_config(const ParamSet& p, std::uint64_t seed) {
    validate_params(ModelFamily::RF, p);
    RfConfig cfg;
    cfg.n_estimators = get_or(p, "n_estimators", cfg.n_estimators);
    cfg.max_depth = depth_or(p, cfg.max_depth);
    cfg.min_samples_split = get_or(p, "min_samples_split", cfg.min_samples_split);
    cfg.oob_score = get_or(p, "oob_score", cfg.oob_score);
    cfg.warm_start = get_or(p, "warm_start", cfg.warm_start);
    cfg.seed = seed;
    if (cfg.n_estimators < 1) throw ParamError("n_estimators must be >= 1");
    return cfg;
}

BoostConfig boost_config(const ParamSet& p, std::uint64_t seed) {
    validate_params(ModelFamily::XGB, p);
    BoostConfig cfg;
    cfg.n_estimators = get_or(p, "n_estimators", cfg.n_estimators);
    cfg.max_depth = depth_or(p, cfg.max_depth);
    cfg.learning_rate = get_or(p, "learning_rate", cfg.learning_rate);
    cfg.gamma = get_or(p, "gamma", cfg.gamma);
    cfg.lambda = get_or(p, "lambda", cfg.lambda);
    cfg.colsample_bytree = get_or(p, "colsample_bytree", cfg.colsample_bytree);
    if (p.is_object() && p.contains("scale_pos_weight")) {
        const auto& v = p.at("scale_pos_weight");
        if (v.is_number()) {
            cfg.pos_weight_mode = PosWeightMode::Fixed;
            cfg.scale_pos_weight = v.get<double>();
        } else if (v == "ratio") {
            cfg.pos_weight_mode = PosWeightMode::Ratio;
        } else if (v == "sqrt_ratio") {
            cfg.pos_weight_mode = PosWeightMode::SqrtRatio;
        } else {
            throw ParamError("scale_pos_weight must be a number, \"ratio\" or \"sqrt_ratio\"");
        }
    }
    cfg.seed = seed;
    if (cfg.n_estimators < 0) throw ParamError("n_estimators must be >= 0");
    return cfg;
}

std::vector<double> Classifier::predict_proba(const Dataset& ds) const {
    std::vector<double> out(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) out[i] = predict_proba(ds.row(i));
    return out;
}

std::unique_ptr<Classifier> make_classifier(ModelFamily family, const ParamSet& params, std::uint64_t seed) {
    switch (family) {
        case ModelFamily::LR: return std::make_unique<LrClassifier>(lr_config(params, seed));
        case ModelFamily::DT: return std::make_unique<DtClassifier>(dt_config(params, seed));
        case ModelFamily::RF: return std::make_unique<RfClassifier>(rf_config(params, seed));
        case ModelFamily::XGB: return std::make_unique<XgbClassifier>(boost_config(params, seed));
    }
    throw ParamError("unknown model family");
}

}  // namespace fraudkit
