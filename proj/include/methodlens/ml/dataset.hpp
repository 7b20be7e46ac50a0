#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/labeling/labeling.hpp"
#include "methodlens/metrics/metric_vector.hpp"
#include "methodlens/ml/rng.hpp"

namespace methodlens::ml {

using Features = std::array<double, metrics::kMetricCount>;

inline constexpr int kGood = 0;
inline constexpr int kUgly = 1;

struct FeatureRow {
    std::string project;
    std::string method_id;
    Features features{};
    int label = kGood;  ///< kGood or kUgly
};

/// Good and ugly methods as feature rows, ordered by (project, identity).
[[nodiscard]] inline std::vector<FeatureRow> build_feature_rows(const std::vector<labeling::ProjectDataset>& corpus) {
    std::vector<const labeling::ProjectDataset*> projects;
    for (const auto& p : corpus) projects.push_back(&p);
    std::sort(projects.begin(), projects.end(), [](auto* a, auto* b) { return a->project < b->project; });
    std::vector<FeatureRow> rows;
    bool any_ugly = false;
    for (const auto* p : projects) {
        std::vector<const labeling::LabeledMethod*> ms;
        for (const auto& m : p->methods) {
            if (m.label != labeling::Label::bad) ms.push_back(&m);
        }
        std::sort(ms.begin(), ms.end(), [](auto* a, auto* b) { return a->identity < b->identity; });
        for (const auto* m : ms) {
            const int label = m->label == labeling::Label::ugly ? kUgly : kGood;
            any_ugly |= label == kUgly;
            rows.push_back({p->project, m->identity.key(), metrics::to_array(m->metrics), label});
        }
    }
    if (!any_ugly) throw Error(ErrorCode::no_ugly_rows, "no ugly methods in the corpus; nothing to learn");
    return rows;
}

struct SplitPlan {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
};

struct SplitRatios {
    double train = 0.7;
    double validation = 0.1;
    double test = 0.2;
};

[[nodiscard]] inline std::vector<std::string> distinct_projects(const std::vector<FeatureRow>& rows) {
    std::set<std::string> s;
    for (const auto& r : rows) s.insert(r.project);
    return {s.begin(), s.end()};
}

/// Seeded project-level split: round(test P) test and round(validation P)
/// validation projects, each at least one; the rest train.
[[nodiscard]] inline SplitPlan project_split(std::vector<std::string> projects, std::uint64_t seed,
                                             SplitRatios ratios = {}) {
    std::sort(projects.begin(), projects.end());
    projects.erase(std::unique(projects.begin(), projects.end()), projects.end());
    const auto p = projects.size();
    if (p < 3) throw Error(ErrorCode::too_few_projects, "a train/validation/test split needs at least 3 projects");
    const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratios.test * p)));
    const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratios.validation * p)));
    if (n_test + n_val >= p) throw Error(ErrorCode::too_few_projects, "split leaves no training project");
    Rng rng(seed);
    rng.shuffle(projects);
    SplitPlan plan;
    plan.seed = seed;
    plan.test.assign(projects.begin(), projects.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.validation.assign(projects.begin() + static_cast<std::ptrdiff_t>(n_test),
                           projects.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    plan.train.assign(projects.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), projects.end());
    for (auto* set : {&plan.train, &plan.validation, &plan.test}) std::sort(set->begin(), set->end());
    return plan;
}

/// One plan per project, holding that project out as the test set.
[[nodiscard]] inline std::vector<SplitPlan> leave_one_out_plans(std::vector<std::string> projects) {
    std::sort(projects.begin(), projects.end());
    projects.erase(std::unique(projects.begin(), projects.end()), projects.end());
    if (projects.size() < 2) throw Error(ErrorCode::too_few_projects, "leave-one-out needs at least 2 projects");
    std::vector<SplitPlan> plans;
    for (std::size_t i = 0; i < projects.size(); ++i) {
        SplitPlan plan;
        plan.test = {projects[i]};
        for (std::size_t j = 0; j < projects.size(); ++j) {
            if (j != i) plan.train.push_back(projects[j]);
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

[[nodiscard]] inline std::vector<FeatureRow> rows_of(const std::vector<FeatureRow>& rows,
                                                     const std::vector<std::string>& projects) {
    const std::set<std::string> wanted(projects.begin(), projects.end());
    std::vector<FeatureRow> out;
    for (const auto& r : rows) {
        if (wanted.count(r.project)) out.push_back(r);
    }
    return out;
}

/// Appends randomly drawn minority-class duplicates until both classes have equal counts.
[[nodiscard]] inline std::vector<FeatureRow> oversample(std::vector<FeatureRow> rows, std::uint64_t seed) {
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < rows.size(); ++i) by_class[rows[i].label].push_back(i);
    if (by_class[0].empty() || by_class[1].empty()) {
        throw Error(ErrorCode::single_class, "training rows contain a single class");
    }
    const int minority = by_class[kUgly].size() < by_class[kGood].size() ? kUgly : kGood;
    const auto& pool = by_class[minority];
    const std::size_t deficit = by_class[1 - minority].size() - pool.size();
    Rng rng(seed);
    rows.reserve(rows.size() + deficit);
    for (std::size_t k = 0; k < deficit; ++k) rows.push_back(rows[pool[rng.index(pool.size())]]);
    return rows;
}

/// Min-max scaling fitted on training rows only; constant columns map to 0.
class MinMaxScaler {
public:
    MinMaxScaler() { lo_.fill(0.0), hi_.fill(0.0); }

    static MinMaxScaler fit(const std::vector<FeatureRow>& rows) {
        MinMaxScaler s;
        if (rows.empty()) return s;
        s.lo_ = rows.front().features;
        s.hi_ = rows.front().features;
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < r.features.size(); ++k) {
                s.lo_[k] = std::min(s.lo_[k], r.features[k]);
                s.hi_[k] = std::max(s.hi_[k], r.features[k]);
            }
        }
        return s;
    }

    [[nodiscard]] Features transform(const Features& f) const {
        Features out{};
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double range = hi_[k] - lo_[k];
            out[k] = range > 0.0 ? (f[k] - lo_[k]) / range : 0.0;
        }
        return out;
    }

    [[nodiscard]] std::vector<FeatureRow> transform(std::vector<FeatureRow> rows) const {
        for (auto& r : rows) r.features = transform(r.features);
        return rows;
    }

    [[nodiscard]] const Features& min() const noexcept { return lo_; }
    [[nodiscard]] const Features& max() const noexcept { return hi_; }

private:
    Features lo_;
    Features hi_;
};

}  // namespace methodlens::ml
