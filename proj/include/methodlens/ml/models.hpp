#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/ml/dataset.hpp"
#include "methodlens/ml/rng.hpp"

namespace methodlens::ml {

/// A trained binary classifier. Models keep the training-set scaler and
/// apply it to raw features at prediction time.
class Model {
public:
    virtual ~Model() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] int predict(const Features& raw) const { return predict_scaled(scaler_.transform(raw)); }
    [[nodiscard]] const MinMaxScaler& scaler() const noexcept { return scaler_; }

protected:
    explicit Model(MinMaxScaler scaler) : scaler_(std::move(scaler)) {}
    [[nodiscard]] virtual int predict_scaled(const Features& x) const = 0;

private:
    MinMaxScaler scaler_;
};

// ---------------------------------------------------------------- logistic

struct LogisticConfig {
    double l2 = 1.0;
    double learning_rate = 0.1;
    int max_iter = 5000;
    double tol = 1e-8;
};

class LogisticModel final : public Model {
public:
    LogisticModel(MinMaxScaler scaler, Features w, double b, std::vector<double> losses)
        : Model(std::move(scaler)), w_(w), b_(b), losses_(std::move(losses)) {}

    [[nodiscard]] std::string name() const override { return "logistic"; }
    [[nodiscard]] const Features& weights() const noexcept { return w_; }
    [[nodiscard]] double intercept() const noexcept { return b_; }
    /// Objective value after each iteration (index 0 is the initial value).
    [[nodiscard]] const std::vector<double>& loss_history() const noexcept { return losses_; }

    [[nodiscard]] double probability_scaled(const Features& x) const {
        return 1.0 / (1.0 + std::exp(-margin(x)));
    }

protected:
    [[nodiscard]] int predict_scaled(const Features& x) const override {
        return probability_scaled(x) > 0.5 ? kUgly : kGood;
    }

private:
    Features w_;
    double b_;
    std::vector<double> losses_;

    [[nodiscard]] double margin(const Features& x) const {
        double z = b_;
        for (std::size_t k = 0; k < x.size(); ++k) z += w_[k] * x[k];
        return z;
    }
};

namespace detail {

// log(1 + exp(t)) without overflow.
inline double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

}  // namespace detail

/// Full-batch gradient descent on mean log-loss + (l2 / 2n) |w|^2 from a zero start.
[[nodiscard]] inline std::unique_ptr<LogisticModel> train_logistic(const std::vector<FeatureRow>& raw,
                                                                   const LogisticConfig& cfg = {}) {
    if (raw.empty()) throw Error(ErrorCode::invalid_input, "logistic regression needs rows");
    auto scaler = MinMaxScaler::fit(raw);
    const auto rows = scaler.transform(raw);
    const double n = static_cast<double>(rows.size());
    Features w{};
    double b = 0.0;

    auto objective = [&] {
        double loss = 0.0;
        for (const auto& r : rows) {
            double z = b;
            for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * r.features[k];
            loss += r.label == kUgly ? detail::softplus(-z) : detail::softplus(z);
        }
        double norm = 0.0;
        for (double v : w) norm += v * v;
        return loss / n + cfg.l2 / (2.0 * n) * norm;
    };

    std::vector<double> losses = {objective()};
    for (int it = 0; it < cfg.max_iter; ++it) {
        Features gw{};
        double gb = 0.0;
        for (const auto& r : rows) {
            double z = b;
            for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * r.features[k];
            const double err = 1.0 / (1.0 + std::exp(-z)) - r.label;
            for (std::size_t k = 0; k < w.size(); ++k) gw[k] += err * r.features[k];
            gb += err;
        }
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= cfg.learning_rate * (gw[k] / n + cfg.l2 / n * w[k]);
        b -= cfg.learning_rate * gb / n;
        const double loss = objective();
        if (!std::isfinite(loss)) {
            throw Error(ErrorCode::non_finite_loss, "logistic loss became non-finite at iteration " +
                                                        std::to_string(it + 1) + " (learning rate " +
                                                        std::to_string(cfg.learning_rate) + ")");
        }
        losses.push_back(loss);
        if (std::abs(losses[losses.size() - 2] - loss) < cfg.tol) break;
    }
    return std::make_unique<LogisticModel>(std::move(scaler), w, b, std::move(losses));
}

// ---------------------------------------------------------------- CART

struct TreeConfig {
    int min_samples_leaf = 1;
    int max_depth = -1;          ///< negative: unlimited
    int features_per_split = 0;  ///< 0: consider every feature
};

struct TreeNode {
    int feature = -1;  ///< -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int prediction = kGood;
};

/// Gini CART over already-scaled rows.
class Tree {
public:
    Tree() = default;

    static Tree grow(const std::vector<FeatureRow>& rows, std::vector<std::size_t> sample, const TreeConfig& cfg,
                     Rng* rng) {
        Tree t;
        if (sample.empty()) {
            t.nodes_.push_back(TreeNode{});
            return t;
        }
        t.build(rows, sample, cfg, rng, 0);
        return t;
    }

    [[nodiscard]] int predict(const Features& x) const {
        int at = 0;
        while (nodes_[at].feature >= 0) {
            at = x[nodes_[at].feature] <= nodes_[at].threshold ? nodes_[at].left : nodes_[at].right;
        }
        return nodes_[at].prediction;
    }

    [[nodiscard]] const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

    [[nodiscard]] int depth() const { return nodes_.empty() ? 0 : depth_of(0); }

private:
    std::vector<TreeNode> nodes_;

    [[nodiscard]] int depth_of(int at) const {
        if (nodes_[at].feature < 0) return 0;
        return 1 + std::max(depth_of(nodes_[at].left), depth_of(nodes_[at].right));
    }

    static double gini(double c0, double c1) {
        const double n = c0 + c1;
        if (n == 0) return 0.0;
        const double p0 = c0 / n, p1 = c1 / n;
        return 1.0 - p0 * p0 - p1 * p1;
    }

    int build(const std::vector<FeatureRow>& rows, std::vector<std::size_t>& sample, const TreeConfig& cfg, Rng* rng,
              int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{});
        double counts[2] = {0, 0};
        for (auto i : sample) counts[rows[i].label] += 1;
        nodes_[id].prediction = counts[kUgly] > counts[kGood] ? kUgly : kGood;

        const auto n = sample.size();
        const auto min_leaf = static_cast<std::size_t>(std::max(1, cfg.min_samples_leaf));
        if (counts[0] == 0 || counts[1] == 0 || n < 2 * min_leaf || (cfg.max_depth >= 0 && depth >= cfg.max_depth)) {
            return id;
        }

        std::vector<std::size_t> features(kFeatureCount);
        std::iota(features.begin(), features.end(), std::size_t{0});
        if (cfg.features_per_split > 0 && static_cast<std::size_t>(cfg.features_per_split) < kFeatureCount && rng) {
            for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.features_per_split); ++i) {
                const auto j = i + static_cast<std::size_t>(rng->index(kFeatureCount - i));
                std::swap(features[i], features[j]);
            }
            features.resize(static_cast<std::size_t>(cfg.features_per_split));
            std::sort(features.begin(), features.end());
        }

        const double parent = gini(counts[0], counts[1]);
        double best_gain = -std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::size_t> order = sample;
        for (auto f : features) {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return rows[a].features[f] < rows[b].features[f]; });
            double left[2] = {0, 0};
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                left[rows[order[pos]].label] += 1;
                const double a = rows[order[pos]].features[f];
                const double b = rows[order[pos + 1]].features[f];
                if (a == b) continue;
                const std::size_t nl = pos + 1, nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double right0 = counts[0] - left[0], right1 = counts[1] - left[1];
                const double weighted = (static_cast<double>(nl) * gini(left[0], left[1]) +
                                         static_cast<double>(nr) * gini(right0, right1)) /
                                        static_cast<double>(n);
                const double gain = parent - weighted;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    double mid = a + (b - a) / 2.0;
                    if (!(mid < b)) mid = a;
                    best_threshold = mid;
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> left_rows, right_rows;
        for (auto i : sample) {
            (rows[i].features[best_feature] <= best_threshold ? left_rows : right_rows).push_back(i);
        }
        nodes_[id].feature = best_feature;
        nodes_[id].threshold = best_threshold;
        const int l = build(rows, left_rows, cfg, rng, depth + 1);
        nodes_[id].left = l;
        const int r = build(rows, right_rows, cfg, rng, depth + 1);
        nodes_[id].right = r;
        return id;
    }

    static constexpr std::size_t kFeatureCount = metrics::kMetricCount;
};

class TreeModel final : public Model {
public:
    TreeModel(MinMaxScaler scaler, Tree tree) : Model(std::move(scaler)), tree_(std::move(tree)) {}
    [[nodiscard]] std::string name() const override { return "tree"; }
    [[nodiscard]] const Tree& tree() const noexcept { return tree_; }

protected:
    [[nodiscard]] int predict_scaled(const Features& x) const override { return tree_.predict(x); }

private:
    Tree tree_;
};

[[nodiscard]] inline std::unique_ptr<TreeModel> train_tree(const std::vector<FeatureRow>& raw,
                                                           const TreeConfig& cfg = {}) {
    if (raw.empty()) throw Error(ErrorCode::invalid_input, "decision tree needs rows");
    auto scaler = MinMaxScaler::fit(raw);
    const auto rows = scaler.transform(raw);
    std::vector<std::size_t> all(rows.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    Rng rng(0);
    return std::make_unique<TreeModel>(std::move(scaler), Tree::grow(rows, all, cfg, &rng));
}

// ---------------------------------------------------------------- forest

struct ForestConfig {
    int trees = 100;
    int features_per_split = 4;  ///< floor(sqrt(17))
    bool bootstrap = true;
    int min_samples_leaf = 1;
    int max_depth = -1;
    std::uint64_t seed = 0;
};

class ForestModel final : public Model {
public:
    ForestModel(MinMaxScaler scaler, std::vector<Tree> trees) : Model(std::move(scaler)), trees_(std::move(trees)) {}
    [[nodiscard]] std::string name() const override { return "forest"; }
    [[nodiscard]] const std::vector<Tree>& trees() const noexcept { return trees_; }

    /// Number of trees voting ugly.
    [[nodiscard]] int ugly_votes(const Features& raw) const {
        const auto x = scaler().transform(raw);
        int votes = 0;
        for (const auto& t : trees_) votes += t.predict(x) == kUgly;
        return votes;
    }

protected:
    [[nodiscard]] int predict_scaled(const Features& x) const override {
        int votes = 0;
        for (const auto& t : trees_) votes += t.predict(x) == kUgly;
        return 2 * votes > static_cast<int>(trees_.size()) ? kUgly : kGood;
    }

private:
    std::vector<Tree> trees_;
};

[[nodiscard]] inline std::unique_ptr<ForestModel> train_forest(const std::vector<FeatureRow>& raw,
                                                               const ForestConfig& cfg = {}) {
    if (raw.empty()) throw Error(ErrorCode::invalid_input, "random forest needs rows");
    if (cfg.trees < 1) throw Error(ErrorCode::type_mismatch, "forest needs at least one tree");
    auto scaler = MinMaxScaler::fit(raw);
    const auto rows = scaler.transform(raw);
    const TreeConfig tree_cfg{cfg.min_samples_leaf, cfg.max_depth, cfg.features_per_split};
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(cfg.trees));
    for (int t = 0; t < cfg.trees; ++t) {
        Rng rng(derive_seed(cfg.seed, "tree", static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> sample(rows.size());
        if (cfg.bootstrap) {
            for (auto& s : sample) s = static_cast<std::size_t>(rng.index(rows.size()));
        } else {
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        trees.push_back(Tree::grow(rows, sample, tree_cfg, &rng));
    }
    return std::make_unique<ForestModel>(std::move(scaler), std::move(trees));
}

}  // namespace methodlens::ml
