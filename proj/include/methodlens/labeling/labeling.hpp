#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/history/tracer.hpp"
#include "methodlens/log.hpp"
#include "methodlens/metrics/metric_vector.hpp"

namespace methodlens::labeling {

using history::ChangeIndicators;
using history::MethodIdentity;

enum class Label { good, bad, ugly };

[[nodiscard]] inline std::string_view to_string(Label l) {
    switch (l) {
        case Label::good: return "good";
        case Label::bad: return "bad";
        case Label::ugly: return "ugly";
    }
    return "?";
}

[[nodiscard]] inline Label parse_label(std::string_view s) {
    if (s == "good") return Label::good;
    if (s == "bad") return Label::bad;
    if (s == "ugly") return Label::ugly;
    throw Error(ErrorCode::invalid_input, "unknown label '" + std::string(s) + "'");
}

enum class Indicator { revisions, diff_size, addition_only, edit_distance };

inline constexpr std::string_view kIndicatorNames[] = {"revisions", "diff-size", "addition-only", "edit-distance"};

[[nodiscard]] inline std::string_view to_string(Indicator i) { return kIndicatorNames[static_cast<int>(i)]; }

[[nodiscard]] inline Indicator parse_indicator(std::string_view s) {
    for (int i = 0; i < 4; ++i) {
        if (kIndicatorNames[i] == s) return static_cast<Indicator>(i);
    }
    throw Error(ErrorCode::type_mismatch, "unknown indicator '" + std::string(s) + "'");
}

[[nodiscard]] inline long indicator_value(const ChangeIndicators& c, Indicator i) {
    switch (i) {
        case Indicator::revisions: return c.revisions;
        case Indicator::diff_size: return c.diff_size;
        case Indicator::addition_only: return c.addition_only;
        case Indicator::edit_distance: return c.edit_distance;
    }
    return 0;
}

struct LabeledMethod {
    MethodIdentity identity;
    metrics::MetricVector metrics;
    ChangeIndicators indicators;
    Label label = Label::good;
    int bug_count_high_recall = 0;
    int bug_count_high_precision = 0;
};

struct ProjectDataset {
    std::string project;
    std::vector<LabeledMethod> methods;
};

/// Indices of `methods` ordered by indicator desc, revisions desc, identity asc.
[[nodiscard]] inline std::vector<std::size_t> change_rank(const std::vector<LabeledMethod>& methods, Indicator indicator) {
    std::vector<std::size_t> order(methods.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = methods[a];
        const auto& y = methods[b];
        const long vx = indicator_value(x.indicators, indicator);
        const long vy = indicator_value(y.indicators, indicator);
        if (vx != vy) return vx > vy;
        if (x.indicators.revisions != y.indicators.revisions) return x.indicators.revisions > y.indicators.revisions;
        return x.identity < y.identity;
    });
    return order;
}

struct LabelCounts {
    std::size_t good = 0;
    std::size_t bad = 0;
    std::size_t ugly = 0;
};

/// Labels one project's methods in place.
///
/// Unchanged methods are good. The first floor(fraction * n) changed methods
/// in change-rank order with a positive indicator are ugly; the rest are bad.
inline LabelCounts label_methods(std::vector<LabeledMethod>& methods, Indicator indicator = Indicator::edit_distance,
                                 double ugly_fraction = 0.2) {
    if (methods.empty()) throw Error(ErrorCode::empty_project, "cannot label a project without methods");
    if (!(ugly_fraction >= 0.0 && ugly_fraction <= 1.0)) {
        throw Error(ErrorCode::type_mismatch, "ugly fraction must lie in [0, 1]");
    }
    const auto k = static_cast<std::size_t>(std::floor(ugly_fraction * static_cast<double>(methods.size()) + 1e-9));
    LabelCounts counts;
    for (std::size_t idx : change_rank(methods, indicator)) {
        auto& m = methods[idx];
        if (m.indicators.revisions == 0) {
            m.label = Label::good;
            ++counts.good;
        } else if (counts.ugly < k && indicator_value(m.indicators, indicator) > 0) {
            m.label = Label::ugly;
            ++counts.ugly;
        } else {
            m.label = Label::bad;
            ++counts.bad;
        }
    }
    return counts;
}

inline const std::vector<double> kDefaultFractions = {0.05, 0.10, 0.15, 0.20};

struct ParetoCurve {
    std::string indicator;
    std::vector<double> fractions;
    std::vector<double> captured;
};

/// ceil(p * n) guarded against representation error (0.2 * 10 must stay 2).
[[nodiscard]] inline std::size_t top_count(double p, std::size_t n) {
    const double raw = std::ceil(p * static_cast<double>(n) - 1e-9);
    return static_cast<std::size_t>(std::clamp(raw, 0.0, static_cast<double>(n)));
}

namespace detail {

template <typename Mass>
ParetoCurve capture_curve(const std::vector<LabeledMethod>& methods, Indicator indicator,
                          const std::vector<double>& fractions, std::string name, Mass mass) {
    ParetoCurve curve{std::move(name), fractions, {}};
    const auto order = change_rank(methods, indicator);
    double total = 0.0;
    for (const auto& m : methods) total += mass(m);
    if (!(total > 0.0)) {
        log::warn("zero total for " + curve.indicator + "; capture curve is undefined");
        curve.captured.assign(fractions.size(), std::numeric_limits<double>::quiet_NaN());
        return curve;
    }
    for (double p : fractions) {
        const auto k = top_count(p, methods.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += mass(methods[order[i]]);
        curve.captured.push_back(sum / total);
    }
    return curve;
}

}  // namespace detail

/// Share of the project's total indicator held by the top ceil(p n) methods.
[[nodiscard]] inline ParetoCurve pareto_curve(const std::vector<LabeledMethod>& methods, Indicator indicator,
                                              const std::vector<double>& fractions = kDefaultFractions) {
    return detail::capture_curve(methods, indicator, fractions, std::string(to_string(indicator)),
                                 [&](const LabeledMethod& m) {
                                     return static_cast<double>(indicator_value(m.indicators, indicator));
                                 });
}

struct BugRuleConfig {
    std::vector<std::string> high_recall_keywords = {"error", "bug",       "fix",   "issue", "mistake",
                                                     "incorrect", "fault", "defect", "flaw"};
    std::vector<std::string> high_precision_bug_words = {"error", "bug",    "mistake", "incorrect",
                                                         "fault", "defect", "flaw",    "misfeature"};
    std::vector<std::string> high_precision_fix_words = {"fix", "address", "resolve"};
    bool single_method_only = true;

    friend bool operator==(const BugRuleConfig&, const BugRuleConfig&) = default;

    void validate() const {
        for (const auto* list : {&high_recall_keywords, &high_precision_bug_words, &high_precision_fix_words}) {
            if (list->empty()) throw Error(ErrorCode::type_mismatch, "bug keyword lists must be non-empty");
            for (const auto& w : *list) {
                if (w.empty()) throw Error(ErrorCode::type_mismatch, "empty bug keyword");
                for (char c : w) {
                    if (c >= 'A' && c <= 'Z') throw Error(ErrorCode::type_mismatch, "bug keywords must be lowercase");
                }
            }
        }
    }
};

/// Lowercase alphanumeric runs of a commit message.
[[nodiscard]] inline std::vector<std::string> message_words(std::string_view message) {
    std::vector<std::string> words;
    std::string current;
    for (char ch : message) {
        const auto c = static_cast<unsigned char>(ch);
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            current += ch;
        } else if (c >= 'A' && c <= 'Z') {
            current += static_cast<char>(c - 'A' + 'a');
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

[[nodiscard]] inline bool any_stem_match(const std::vector<std::string>& words, const std::vector<std::string>& stems) {
    for (const auto& w : words) {
        for (const auto& s : stems) {
            if (w.starts_with(s)) return true;
        }
    }
    return false;
}

[[nodiscard]] inline bool classify_commit_high_recall(std::string_view message, const BugRuleConfig& cfg = {}) {
    return any_stem_match(message_words(message), cfg.high_recall_keywords);
}

[[nodiscard]] inline bool classify_commit_high_precision(std::string_view message, int methods_touched,
                                                         const BugRuleConfig& cfg = {}) {
    const auto words = message_words(message);
    if (cfg.single_method_only && methods_touched != 1) return false;
    return any_stem_match(words, cfg.high_precision_bug_words) && any_stem_match(words, cfg.high_precision_fix_words);
}

/// Number of traced methods with a revision at each commit id.
[[nodiscard]] inline std::map<std::string, int> commit_touch_counts(const std::vector<history::MethodHistory>& histories) {
    std::map<std::string, int> touched;
    for (const auto& h : histories) {
        for (const auto& r : h.revisions) ++touched[r.commit.id];
    }
    return touched;
}

struct BugCounts {
    int high_recall = 0;
    int high_precision = 0;

    friend bool operator==(const BugCounts&, const BugCounts&) = default;
};

/// Window-limited bug-fix revision counts per method.
///
/// `touched` should cover every traced method of the project, not only the
/// age-filtered ones, so tangled commits are recognized.
[[nodiscard]] inline std::vector<BugCounts> bug_counts(const std::vector<history::MethodHistory>& histories,
                                                       const BugRuleConfig& cfg, const history::TraceConfig& window,
                                                       const std::map<std::string, int>& touched) {
    std::vector<BugCounts> out;
    out.reserve(histories.size());
    const double limit = window.window_days();
    for (const auto& h : histories) {
        BugCounts c;
        for (const auto& r : h.revisions) {
            if (r.days_since_introduction > limit) continue;
            if (classify_commit_high_recall(r.commit.message, cfg)) ++c.high_recall;
            const auto it = touched.find(r.commit.id);
            const int n = it == touched.end() ? 1 : it->second;
            if (classify_commit_high_precision(r.commit.message, n, cfg)) ++c.high_precision;
        }
        out.push_back(c);
    }
    return out;
}

[[nodiscard]] inline std::vector<BugCounts> bug_counts(const std::vector<history::MethodHistory>& histories,
                                                       const BugRuleConfig& cfg, const history::TraceConfig& window) {
    return bug_counts(histories, cfg, window, commit_touch_counts(histories));
}

enum class BugDataset { high_recall, high_precision };

[[nodiscard]] inline std::string_view to_string(BugDataset d) {
    return d == BugDataset::high_recall ? "high-recall" : "high-precision";
}

[[nodiscard]] inline BugDataset parse_bug_dataset(std::string_view s) {
    if (s == "high-recall") return BugDataset::high_recall;
    if (s == "high-precision") return BugDataset::high_precision;
    throw Error(ErrorCode::type_mismatch, "unknown bug dataset '" + std::string(s) + "'");
}

/// Share of the project's bugs held by the top ceil(p n) change-ranked methods.
[[nodiscard]] inline ParetoCurve bug_capture(const std::vector<LabeledMethod>& methods, Indicator indicator,
                                             const std::vector<double>& fractions, BugDataset dataset) {
    return detail::capture_curve(methods, indicator, fractions, std::string(to_string(dataset)),
                                 [&](const LabeledMethod& m) {
                                     return static_cast<double>(dataset == BugDataset::high_recall
                                                                    ? m.bug_count_high_recall
                                                                    : m.bug_count_high_precision);
                                 });
}

}  // namespace methodlens::labeling
