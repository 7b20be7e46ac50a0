#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/labeling/labeling.hpp"
#include "methodlens/log.hpp"
#include "methodlens/metrics/metric_vector.hpp"

namespace methodlens::stats {

struct TauResult {
    double tau = std::numeric_limits<double>::quiet_NaN();
    double p_value = 1.0;
};

namespace detail {

struct TieSums {
    std::int64_t pairs = 0;  // sum t(t-1)/2
    double v1 = 0.0;         // sum t(t-1)(t-2)
    double v2 = 0.0;         // sum t(t-1)(2t+5)
};

inline void add_tie_group(TieSums& s, std::int64_t t) {
    if (t < 2) return;
    const double d = static_cast<double>(t);
    s.pairs += t * (t - 1) / 2;
    s.v1 += d * (d - 1) * (d - 2);
    s.v2 += d * (d - 1) * (2 * d + 5);
}

inline TieSums tie_sums(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    TieSums s;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && values[j] == values[i]) ++j;
        add_tie_group(s, static_cast<std::int64_t>(j - i));
        i = j;
    }
    return s;
}

// Bottom-up merge sort of `v`; returns the number of inversions.
inline std::int64_t count_inversions(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    swaps += static_cast<std::int64_t>(mid - i);
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
        }
        v.swap(buf);
    }
    return swaps;
}

}  // namespace detail

/// Kendall's tau-b in O(n log n) with a normal-approximation p-value.
///
/// The variance includes the tie corrections used by common statistics
/// packages. When either input is constant tau is undefined: the result is
/// (NaN, 1.0) and a warning is logged.
[[nodiscard]] inline TauResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::invalid_input, "kendall tau: inputs differ in length");
    if (x.size() < 2) throw Error(ErrorCode::invalid_input, "kendall tau: need at least two observations");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(x[i]) || std::isnan(y[i])) throw Error(ErrorCode::invalid_input, "kendall tau: NaN input");
    }
    const auto n = static_cast<std::int64_t>(x.size());
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
    });

    std::int64_t joint_ties = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && x[order[j]] == x[order[i]] && y[order[j]] == y[order[i]]) ++j;
        const auto t = static_cast<std::int64_t>(j - i);
        joint_ties += t * (t - 1) / 2;
        i = j;
    }

    std::vector<double> ys(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) ys[k] = y[order[k]];
    const std::int64_t discordant = detail::count_inversions(ys);

    const auto xt = detail::tie_sums(x);
    const auto yt = detail::tie_sums(y);
    const std::int64_t total = n * (n - 1) / 2;
    if (xt.pairs == total || yt.pairs == total) {
        log::warn("kendall tau: constant input, tau undefined");
        return {};
    }
    const double s = static_cast<double>(total - xt.pairs - yt.pairs + joint_ties - 2 * discordant);
    const double tau = s / std::sqrt(static_cast<double>(total - xt.pairs)) /
                       std::sqrt(static_cast<double>(total - yt.pairs));

    const double nd = static_cast<double>(n);
    const double m = nd * (nd - 1.0);
    double var = (m * (2.0 * nd + 5.0) - xt.v2 - yt.v2) / 18.0 +
                 2.0 * static_cast<double>(xt.pairs) * static_cast<double>(yt.pairs) / m;
    if (n > 2) var += xt.v1 * yt.v1 / (9.0 * m * (nd - 2.0));
    const double z = s / std::sqrt(var);
    return {std::clamp(tau, -1.0, 1.0), std::erfc(std::abs(z) / std::sqrt(2.0))};
}

/// (v - min) / (max - min); a constant input maps to zeros.
[[nodiscard]] inline std::vector<double> minmax_scale(const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorCode::invalid_input, "minmax_scale: empty input");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    std::vector<double> out(values.size(), 0.0);
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
    return out;
}

struct CorrelationEntry {
    std::string metric;
    double tau = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

using labeling::Indicator;
using labeling::ProjectDataset;

/// Pooled tau between each of the 17 metrics and the indicator, over all projects.
[[nodiscard]] inline std::vector<CorrelationEntry> correlation_table(const std::vector<ProjectDataset>& corpus,
                                                                     Indicator indicator) {
    std::vector<std::array<double, metrics::kMetricCount>> rows;
    std::vector<double> y;
    for (const auto& project : corpus) {
        for (const auto& m : project.methods) {
            rows.push_back(metrics::to_array(m.metrics));
            y.push_back(static_cast<double>(labeling::indicator_value(m.indicators, indicator)));
        }
    }
    if (rows.size() < 2) throw Error(ErrorCode::invalid_input, "correlation table needs at least two methods");
    std::vector<CorrelationEntry> table;
    std::vector<double> x(rows.size());
    for (std::size_t k = 0; k < metrics::kMetricCount; ++k) {
        for (std::size_t i = 0; i < rows.size(); ++i) x[i] = rows[i][k];
        const auto r = kendall_tau_b(x, y);
        table.push_back({std::string(metrics::kMetricNames[k]), r.tau, r.p_value, rows.size()});
    }
    return table;
}

/// Sign applied to each scaled metric: -1 where the pooled tau is negative.
[[nodiscard]] inline std::array<double, metrics::kMetricCount> metric_signs(const std::vector<CorrelationEntry>& table) {
    std::array<double, metrics::kMetricCount> signs;
    signs.fill(1.0);
    for (std::size_t k = 0; k < metrics::kMetricCount && k < table.size(); ++k) {
        if (table[k].tau < 0.0) signs[k] = -1.0;
    }
    return signs;
}

/// Indices of the metrics that enter the composite score (binary metrics excluded).
[[nodiscard]] inline std::vector<std::size_t> numeric_metric_indices() {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < metrics::kMetricCount; ++k) {
        if (!metrics::is_binary_metric(k)) out.push_back(k);
    }
    return out;
}

struct CompositeRanking {
    std::string project;
    std::vector<double> scores;  ///< parallel to the project's methods
    std::vector<int> ranks;      ///< 1 = highest score
    std::vector<std::string> numeric_metrics_used;
};

[[nodiscard]] inline CompositeRanking composite_scores(const ProjectDataset& project,
                                                       const std::array<double, metrics::kMetricCount>& signs) {
    const auto& ms = project.methods;
    CompositeRanking r;
    r.project = project.project;
    r.scores.assign(ms.size(), 0.0);
    r.ranks.assign(ms.size(), 0);
    if (ms.empty()) return r;
    std::vector<double> column(ms.size());
    for (std::size_t k : numeric_metric_indices()) {
        r.numeric_metrics_used.emplace_back(metrics::kMetricNames[k]);
        for (std::size_t i = 0; i < ms.size(); ++i) column[i] = metrics::to_array(ms[i].metrics)[k];
        const auto scaled = minmax_scale(column);
        for (std::size_t i = 0; i < ms.size(); ++i) r.scores[i] += signs[k] * scaled[i];
    }
    std::vector<std::size_t> order(ms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (r.scores[a] != r.scores[b]) return r.scores[a] > r.scores[b];
        return ms[a].identity < ms[b].identity;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos) r.ranks[order[pos]] = static_cast<int>(pos + 1);
    return r;
}

struct Candidate {
    std::size_t project_index = 0;
    std::size_t method_index = 0;
    double score = 0.0;
    int rank = 0;
};

struct SurprisingSelection {
    std::vector<Candidate> good;
    std::vector<Candidate> ugly;
};

/// Good methods with the highest and ugly methods with the lowest composite
/// scores, at most `per_project_cap` per project and `top_n` per list.
[[nodiscard]] inline SurprisingSelection select_surprising(const std::vector<ProjectDataset>& corpus,
                                                           const std::vector<CompositeRanking>& rankings,
                                                           std::size_t top_n = 50, std::size_t per_project_cap = 2) {
    if (rankings.size() != corpus.size()) throw Error(ErrorCode::invalid_input, "one ranking per project expected");
    auto pick = [&](labeling::Label label, bool descending) {
        std::vector<Candidate> pool;
        for (std::size_t p = 0; p < corpus.size(); ++p) {
            for (std::size_t i = 0; i < corpus[p].methods.size(); ++i) {
                if (corpus[p].methods[i].label == label) pool.push_back({p, i, rankings[p].scores[i], rankings[p].ranks[i]});
            }
        }
        std::sort(pool.begin(), pool.end(), [&](const Candidate& a, const Candidate& b) {
            if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
            if (corpus[a.project_index].project != corpus[b.project_index].project) {
                return corpus[a.project_index].project < corpus[b.project_index].project;
            }
            return corpus[a.project_index].methods[a.method_index].identity <
                   corpus[b.project_index].methods[b.method_index].identity;
        });
        std::vector<Candidate> chosen;
        std::map<std::size_t, std::size_t> per_project;
        for (const auto& c : pool) {
            if (chosen.size() >= top_n) break;
            if (per_project[c.project_index] >= per_project_cap) continue;
            ++per_project[c.project_index];
            chosen.push_back(c);
        }
        if (chosen.size() < top_n) {
            log::warn("only " + std::to_string(chosen.size()) + " surprisingly " + std::string(labeling::to_string(label)) +
                      " candidates available (wanted " + std::to_string(top_n) + ")");
        }
        return chosen;
    };
    return {pick(labeling::Label::good, true), pick(labeling::Label::ugly, false)};
}

}  // namespace methodlens::stats
