#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "methodlens/metrics/method_view.hpp"

namespace methodlens::metrics {

[[nodiscard]] inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Leading whitespace width with tabs counted as four columns.
[[nodiscard]] inline int indentation_width(std::string_view line) {
    int width = 0;
    for (char c : line) {
        if (c == ' ') width += 1;
        else if (c == '\t') width += 4;
        else break;
    }
    return width;
}

[[nodiscard]] inline bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\f'; });
}

/// Shannon entropy, in bits, of the byte distribution of `text`.
[[nodiscard]] inline double byte_entropy(std::string_view text) {
    if (text.empty()) return 0.0;
    std::array<std::size_t, 256> counts{};
    for (unsigned char c : text) ++counts[c];
    const double n = static_cast<double>(text.size());
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

/// Surface features of the readability surrogate, in model order.
struct ReadabilityFeatures {
    double avg_line_length = 0;
    double max_line_length = 0;
    double avg_identifier_length = 0;
    double identifiers_per_line = 0;
    double avg_indentation = 0;
    double comment_line_ratio = 0;
    double blank_line_ratio = 0;
    double parentheses_per_line = 0;

    [[nodiscard]] std::array<double, 8> as_array() const {
        return {avg_line_length,  max_line_length,    avg_identifier_length, identifiers_per_line,
                avg_indentation,  comment_line_ratio, blank_line_ratio,      parentheses_per_line};
    }
};

/// Frozen logistic weights of the readability surrogate. Signs follow the
/// direction reported for the original model: longer and denser lines read
/// worse, comments and blank lines read better.
struct ReadabilityModel {
    static constexpr double kBias = 3.0;
    static constexpr std::array<double, 8> kWeights = {
        -0.04,  // avg line length
        -0.01,  // max line length
        -0.05,  // avg identifier length
        -0.25,  // identifiers per line
        -0.03,  // avg indentation
        1.5,    // comment-line ratio
        0.8,    // blank-line ratio
        -0.3,   // parentheses per line
    };
};

[[nodiscard]] inline ReadabilityFeatures readability_features(const MethodView& view) {
    ReadabilityFeatures f;
    const double lines = static_cast<double>(view.lines.size());
    std::size_t total_len = 0;
    std::size_t max_len = 0;
    std::size_t blank = 0;
    std::size_t comments = 0;
    double indent_sum = 0;
    std::size_t indented_lines = 0;
    for (std::size_t i = 0; i < view.lines.size(); ++i) {
        const auto line = view.lines[i];
        total_len += line.size();
        max_len = std::max(max_len, line.size());
        if (is_blank(line)) {
            ++blank;
        } else {
            indent_sum += indentation_width(line);
            ++indented_lines;
        }
        if (view.comment_line[i]) ++comments;
    }
    std::size_t identifiers = 0;
    std::size_t identifier_chars = 0;
    std::size_t parens = 0;
    for (const auto& t : view.all_tokens) {
        if (t.is_identifier()) {
            ++identifiers;
            identifier_chars += t.text.size();
        } else if (t.is_sep("(") || t.is_sep(")")) {
            ++parens;
        }
    }
    f.avg_line_length = static_cast<double>(total_len) / lines;
    f.max_line_length = static_cast<double>(max_len);
    f.avg_identifier_length =
        identifiers ? static_cast<double>(identifier_chars) / static_cast<double>(identifiers) : 0.0;
    f.identifiers_per_line = static_cast<double>(identifiers) / lines;
    f.avg_indentation = indented_lines ? indent_sum / static_cast<double>(indented_lines) : 0.0;
    f.comment_line_ratio = static_cast<double>(comments) / lines;
    f.blank_line_ratio = static_cast<double>(blank) / lines;
    f.parentheses_per_line = static_cast<double>(parens) / lines;
    return f;
}

[[nodiscard]] inline double readability_score(const ReadabilityFeatures& f) {
    const auto x = f.as_array();
    double z = ReadabilityModel::kBias;
    for (std::size_t i = 0; i < x.size(); ++i) z += ReadabilityModel::kWeights[i] * x[i];
    return logistic(z);
}

/// Posnett-style simple readability: logistic(8.87 - 0.033 V + 0.40 lines - 1.5 H).
[[nodiscard]] inline double posnett_score(double volume, int lines, double entropy) {
    return logistic(8.87 - 0.033 * volume + 0.40 * static_cast<double>(lines) - 1.5 * entropy);
}

}  // namespace methodlens::metrics
