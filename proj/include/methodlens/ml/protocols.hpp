#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/log.hpp"
#include "methodlens/ml/dataset.hpp"
#include "methodlens/ml/evaluation.hpp"
#include "methodlens/ml/models.hpp"

namespace methodlens::ml {

enum class ClassifierKind { logistic, tree, forest };

[[nodiscard]] inline std::string to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::logistic: return "logistic";
        case ClassifierKind::tree: return "tree";
        case ClassifierKind::forest: return "forest";
    }
    return "?";
}

[[nodiscard]] inline ClassifierKind parse_classifier(const std::string& s) {
    if (s == "logistic") return ClassifierKind::logistic;
    if (s == "tree") return ClassifierKind::tree;
    if (s == "forest") return ClassifierKind::forest;
    throw Error(ErrorCode::type_mismatch, "unknown classifier '" + s + "'");
}

inline const std::vector<ClassifierKind> kAllClassifiers = {ClassifierKind::logistic, ClassifierKind::tree,
                                                            ClassifierKind::forest};

using ModelConfig = std::variant<LogisticConfig, TreeConfig, ForestConfig>;

[[nodiscard]] inline ModelConfig default_config(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::logistic: return LogisticConfig{};
        case ClassifierKind::tree: return TreeConfig{};
        case ClassifierKind::forest: return ForestConfig{};
    }
    return LogisticConfig{};
}

/// Frozen validation grid for the split protocol.
[[nodiscard]] inline std::vector<ModelConfig> tuning_grid(ClassifierKind k) {
    std::vector<ModelConfig> grid;
    switch (k) {
        case ClassifierKind::logistic:
            for (double l2 : {0.1, 1.0, 10.0}) grid.emplace_back(LogisticConfig{l2, 0.1, 5000, 1e-8});
            break;
        case ClassifierKind::tree:
            for (int depth : {-1, 5, 10}) {
                for (int leaf : {1, 5}) grid.emplace_back(TreeConfig{leaf, depth, 0});
            }
            break;
        case ClassifierKind::forest:
            for (int leaf : {1, 5}) grid.emplace_back(ForestConfig{100, 4, true, leaf, -1, 0});
            break;
    }
    return grid;
}

/// Trains the classifier described by `cfg`; forest seeds come from `seed`.
[[nodiscard]] inline std::unique_ptr<Model> train_model(const ModelConfig& cfg, const std::vector<FeatureRow>& rows,
                                                        std::uint64_t seed) {
    if (const auto* c = std::get_if<LogisticConfig>(&cfg)) return train_logistic(rows, *c);
    if (const auto* c = std::get_if<TreeConfig>(&cfg)) return train_tree(rows, *c);
    auto forest = std::get<ForestConfig>(cfg);
    forest.seed = seed;
    return train_forest(rows, forest);
}

struct TunedResult {
    ClassifierKind classifier = ClassifierKind::logistic;
    ModelConfig config;
    double validation_f_ugly = 0.0;
    EvaluationReport test;
};

struct Approach1Result {
    std::uint64_t seed = 0;
    SplitPlan plan;
    std::size_t train_rows = 0;
    std::size_t train_rows_oversampled = 0;
    std::vector<TunedResult> results;
};

/// Project split, oversampled training set, validation tuning, test report.
[[nodiscard]] inline Approach1Result run_approach1(const std::vector<FeatureRow>& rows, std::uint64_t seed,
                                                   const std::vector<ClassifierKind>& classifiers = kAllClassifiers) {
    Approach1Result out;
    out.seed = seed;
    out.plan = project_split(distinct_projects(rows), derive_seed(seed, "split"));
    const auto train = rows_of(rows, out.plan.train);
    const auto validation = rows_of(rows, out.plan.validation);
    const auto test = rows_of(rows, out.plan.test);
    if (test.empty()) throw Error(ErrorCode::empty_test_set, "test projects contain no rows");
    const auto balanced = oversample(train, derive_seed(seed, "oversample"));
    out.train_rows = train.size();
    out.train_rows_oversampled = balanced.size();
    for (auto kind : classifiers) {
        const auto grid = tuning_grid(kind);
        std::unique_ptr<Model> best;
        TunedResult tuned;
        tuned.classifier = kind;
        double best_f = -1.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            auto model = train_model(grid[g], balanced, derive_seed(seed, "forest", g));
            const double f = validation.empty() ? 0.0 : evaluate(*model, validation).ugly.f_measure;
            if (f > best_f) {
                best_f = f;
                best = std::move(model);
                tuned.config = grid[g];
            }
        }
        tuned.validation_f_ugly = best_f;
        tuned.test = evaluate(*best, test, seed);
        out.results.push_back(std::move(tuned));
    }
    return out;
}

struct ProjectOutcome {
    std::string project;
    std::optional<EvaluationReport> report;
    std::string error;  ///< set when the plan could not be evaluated
};

struct Approach2Result {
    std::uint64_t seed = 0;
    std::vector<std::pair<ClassifierKind, std::vector<ProjectOutcome>>> per_classifier;
};

/// Leave-one-project-out with default configurations. Plans run on up to
/// `jobs` threads; every plan draws randomness from its own derived seed.
[[nodiscard]] inline Approach2Result run_approach2(const std::vector<FeatureRow>& rows, std::uint64_t seed,
                                                   const std::vector<ClassifierKind>& classifiers = kAllClassifiers,
                                                   unsigned jobs = 1) {
    const auto plans = leave_one_out_plans(distinct_projects(rows));
    Approach2Result out;
    out.seed = seed;
    for (auto kind : classifiers) {
        std::vector<ProjectOutcome> outcomes(plans.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < plans.size(); i = next++) {
                auto& o = outcomes[i];
                o.project = plans[i].test.front();
                try {
                    const auto train = oversample(rows_of(rows, plans[i].train), derive_seed(seed, "oversample", i));
                    auto model = train_model(default_config(kind), train, derive_seed(seed, "forest", i));
                    o.report = evaluate(*model, rows_of(rows, plans[i].test), seed);
                } catch (const Error& e) {
                    o.error = e.what();
                }
            }
        };
        jobs = std::max(1u, jobs);
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (const auto& o : outcomes) {
            if (!o.error.empty()) log::warn(to_string(kind) + " on held-out " + o.project + ": " + o.error);
        }
        out.per_classifier.emplace_back(kind, std::move(outcomes));
    }
    return out;
}

}  // namespace methodlens::ml
