#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/ml/models.hpp"

namespace methodlens::ml {

/// Confusion counts with ugly as the positive class.
struct Confusion {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;

    [[nodiscard]] long total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Precision, recall and F for one positive class. Undefined ratios (zero
/// denominators) are stored as 0 with the matching flag cleared.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    bool precision_defined = false;
    bool recall_defined = false;
};

[[nodiscard]] inline ClassMetrics class_metrics(long tp, long fp, long fn) {
    ClassMetrics m;
    m.precision_defined = tp + fp > 0;
    m.recall_defined = tp + fn > 0;
    if (m.precision_defined) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (m.recall_defined) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0.0) m.f_measure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

struct EvaluationReport {
    std::string classifier;
    std::uint64_t seed = 0;
    Confusion confusion;
    ClassMetrics ugly;  ///< positive class = ugly
    ClassMetrics good;  ///< positive class = good
};

[[nodiscard]] inline EvaluationReport report_from(const std::string& classifier, std::uint64_t seed, Confusion c) {
    EvaluationReport r;
    r.classifier = classifier;
    r.seed = seed;
    r.confusion = c;
    r.ugly = class_metrics(c.tp, c.fp, c.fn);
    r.good = class_metrics(c.tn, c.fn, c.fp);
    return r;
}

[[nodiscard]] inline EvaluationReport evaluate(const Model& model, const std::vector<FeatureRow>& test,
                                               std::uint64_t seed = 0) {
    if (test.empty()) throw Error(ErrorCode::empty_test_set, "no test rows to evaluate");
    Confusion c;
    for (const auto& r : test) {
        const int p = model.predict(r.features);
        if (r.label == kUgly) {
            (p == kUgly ? c.tp : c.fn) += 1;
        } else {
            (p == kUgly ? c.fp : c.tn) += 1;
        }
    }
    return report_from(model.name(), seed, c);
}

}  // namespace methodlens::ml
