#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "methodlens/ml/protocols.hpp"

namespace methodlens::ml {

using nlohmann::json;

namespace detail {

inline json ratio(double v, bool defined, bool nan_when_undefined) {
    if (!defined && nan_when_undefined) return nullptr;
    return v;
}

}  // namespace detail

/// Per-class metrics. In aggregate tables undefined ratios print as 0; in
/// per-project rows they print as null (NaN) and carry a flag.
inline json to_json(const ClassMetrics& m, bool per_project) {
    json j = {{"precision", detail::ratio(m.precision, m.precision_defined, per_project)},
              {"recall", detail::ratio(m.recall, m.recall_defined, per_project)},
              {"fMeasure", detail::ratio(m.f_measure, m.precision_defined && m.recall_defined, per_project)}};
    if (per_project) {
        j["precisionDefined"] = m.precision_defined;
        j["recallDefined"] = m.recall_defined;
    }
    return j;
}

inline json to_json(const EvaluationReport& r, bool per_project = false) {
    return {{"classifier", r.classifier},
            {"seed", r.seed},
            {"positiveClass", "ugly"},
            {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
            {"ugly", to_json(r.ugly, per_project)},
            {"good", to_json(r.good, per_project)}};
}

inline json to_json(const ModelConfig& cfg) {
    if (const auto* c = std::get_if<LogisticConfig>(&cfg)) {
        return {{"l2", c->l2}, {"learningRate", c->learning_rate}, {"maxIter", c->max_iter}, {"tol", c->tol}};
    }
    auto depth = [](int d) { return d < 0 ? json(nullptr) : json(d); };
    if (const auto* c = std::get_if<TreeConfig>(&cfg)) {
        return {{"criterion", "gini"}, {"minSamplesLeaf", c->min_samples_leaf}, {"maxDepth", depth(c->max_depth)}};
    }
    const auto& c = std::get<ForestConfig>(cfg);
    return {{"trees", c.trees},
            {"featuresPerSplit", c.features_per_split},
            {"bootstrap", c.bootstrap},
            {"minSamplesLeaf", c.min_samples_leaf},
            {"maxDepth", depth(c.max_depth)}};
}

inline json to_json(const Approach1Result& r) {
    json results = json::array();
    for (const auto& t : r.results) {
        results.push_back({{"classifier", to_string(t.classifier)},
                           {"config", to_json(t.config)},
                           {"validationFUgly", t.validation_f_ugly},
                           {"test", to_json(t.test)}});
    }
    return {{"approach", 1},
            {"seed", r.seed},
            {"split",
             {{"train", r.plan.train}, {"validation", r.plan.validation}, {"test", r.plan.test}}},
            {"trainRows", r.train_rows},
            {"trainRowsOversampled", r.train_rows_oversampled},
            {"results", results}};
}

/// Mean over evaluated projects, undefined entries counted as 0.
inline ClassMetrics mean_metrics(const std::vector<ProjectOutcome>& outcomes) {
    ClassMetrics mean;
    double n = 0;
    for (const auto& o : outcomes) {
        if (!o.report) continue;
        mean.precision += o.report->ugly.precision;
        mean.recall += o.report->ugly.recall;
        mean.f_measure += o.report->ugly.f_measure;
        n += 1;
    }
    if (n > 0) {
        mean.precision /= n;
        mean.recall /= n;
        mean.f_measure /= n;
    }
    mean.precision_defined = mean.recall_defined = n > 0;
    return mean;
}

inline json to_json(const Approach2Result& r) {
    json results = json::array();
    for (const auto& [kind, outcomes] : r.per_classifier) {
        json rows = json::array();
        for (const auto& o : outcomes) {
            json row = {{"project", o.project}};
            if (o.report) {
                row["report"] = to_json(*o.report, true);
            } else {
                row["error"] = o.error;
            }
            rows.push_back(std::move(row));
        }
        results.push_back({{"classifier", to_string(kind)},
                           {"config", to_json(default_config(kind))},
                           {"meanUgly", to_json(mean_metrics(outcomes), false)},
                           {"perProject", rows}});
    }
    return {{"approach", 2}, {"seed", r.seed}, {"results", results}};
}

struct CdfPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Empirical CDF: sorted finite values with cumulative fraction i / n.
inline std::vector<CdfPoint> cdf_points(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }),
                 values.end());
    std::sort(values.begin(), values.end());
    std::vector<CdfPoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({values[i], static_cast<double>(i + 1) / static_cast<double>(values.size())});
    }
    return out;
}

}  // namespace methodlens::ml
