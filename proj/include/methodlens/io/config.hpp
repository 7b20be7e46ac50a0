#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/io/files.hpp"
#include "methodlens/labeling/labeling.hpp"
#include "methodlens/ml/protocols.hpp"

namespace methodlens::io {

/// Settings for a whole pipeline run. Every field has a default, so an empty
/// config file is valid.
struct PipelineConfig {
    std::vector<std::string> repos;  ///< one or more local clones; project name = directory name
    std::string commit = "HEAD";
    std::string files = "*.java";    ///< glob over repository-relative paths
    double window_years = 5.0;
    labeling::Indicator indicator = labeling::Indicator::edit_distance;
    double ugly_fraction = 0.2;
    double theta = 0.75;
    std::uint64_t seed = 42;
    labeling::BugRuleConfig bug_rules;
    std::vector<double> fractions = labeling::kDefaultFractions;
    std::size_t top_n = 50;
    std::size_t per_project_cap = 2;
    std::vector<ml::ClassifierKind> classifiers = ml::kAllClassifiers;
    std::string out = "methodlens-out";
    unsigned jobs = 1;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

namespace detail {

[[nodiscard]] inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[nodiscard]] inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string_view::npos) end = s.size();
        auto item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        start = end + 1;
    }
    return out;
}

template <typename T>
[[nodiscard]] T parse_number(const std::string& key, const std::string& v, int line) {
    T out{};
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
        throw Error(ErrorCode::type_mismatch, key + ": '" + v + "' is not a valid number", line);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) throw Error(ErrorCode::type_mismatch, key + " must be finite", line);
    }
    return out;
}

[[nodiscard]] inline bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw Error(ErrorCode::type_mismatch, key + ": expected true or false, got '" + v + "'", line);
}

[[nodiscard]] inline std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

inline void require(bool ok, const std::string& message, int line) {
    if (!ok) throw Error(ErrorCode::type_mismatch, message, line);
}

}  // namespace detail

/// Applies one `key = value` assignment; `line` is used for error reporting only.
inline void set_config_value(PipelineConfig& c, const std::string& key, const std::string& value, int line = 0) {
    using detail::parse_number;
    using detail::require;
    if (key == "repo") {
        c.repos = detail::split_list(value);
    } else if (key == "commit") {
        require(!value.empty(), "commit must not be empty", line);
        c.commit = value;
    } else if (key == "files") {
        require(!value.empty(), "files must not be empty", line);
        c.files = value;
    } else if (key == "window_years") {
        c.window_years = parse_number<double>(key, value, line);
        require(c.window_years > 0, "window_years must be positive", line);
    } else if (key == "indicator") {
        try {
            c.indicator = labeling::parse_indicator(value);
        } catch (const Error& e) {
            throw Error(ErrorCode::type_mismatch, "indicator: unknown value '" + value + "'", line);
        }
    } else if (key == "ugly_fraction") {
        c.ugly_fraction = parse_number<double>(key, value, line);
        require(c.ugly_fraction >= 0 && c.ugly_fraction <= 1, "ugly_fraction must lie in [0, 1]", line);
    } else if (key == "theta") {
        c.theta = parse_number<double>(key, value, line);
        require(c.theta > 0 && c.theta <= 1, "theta must lie in (0, 1]", line);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value, line);
    } else if (key == "high_recall_keywords" || key == "high_precision_bug_words" ||
               key == "high_precision_fix_words") {
        auto words = detail::split_list(value);
        require(!words.empty(), key + " must list at least one word", line);
        for (const auto& w : words) {
            for (char ch : w) {
                require(!(ch >= 'A' && ch <= 'Z'), key + ": words must be lowercase", line);
            }
        }
        if (key == "high_recall_keywords") c.bug_rules.high_recall_keywords = std::move(words);
        if (key == "high_precision_bug_words") c.bug_rules.high_precision_bug_words = std::move(words);
        if (key == "high_precision_fix_words") c.bug_rules.high_precision_fix_words = std::move(words);
    } else if (key == "single_method_only") {
        c.bug_rules.single_method_only = detail::parse_bool(key, value, line);
    } else if (key == "fractions") {
        std::vector<double> fr;
        for (const auto& item : detail::split_list(value)) {
            const double f = parse_number<double>(key, item, line);
            require(f >= 0 && f <= 1, "fractions must lie in [0, 1]", line);
            fr.push_back(f);
        }
        require(!fr.empty(), "fractions must list at least one value", line);
        c.fractions = std::move(fr);
    } else if (key == "top_n") {
        c.top_n = parse_number<std::size_t>(key, value, line);
    } else if (key == "per_project_cap") {
        c.per_project_cap = parse_number<std::size_t>(key, value, line);
        require(c.per_project_cap > 0, "per_project_cap must be positive", line);
    } else if (key == "classifiers") {
        std::vector<ml::ClassifierKind> kinds;
        for (const auto& item : detail::split_list(value)) {
            try {
                kinds.push_back(ml::parse_classifier(item));
            } catch (const Error&) {
                throw Error(ErrorCode::type_mismatch, "classifiers: unknown value '" + item + "'", line);
            }
        }
        require(!kinds.empty(), "classifiers must list at least one classifier", line);
        c.classifiers = std::move(kinds);
    } else if (key == "out") {
        require(!value.empty(), "out must not be empty", line);
        c.out = value;
    } else if (key == "jobs") {
        c.jobs = parse_number<unsigned>(key, value, line);
        require(c.jobs > 0, "jobs must be positive", line);
    } else {
        throw Error(ErrorCode::unknown_key, "unknown key '" + key + "'", line);
    }
}

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// ignored; later assignments override earlier ones.
[[nodiscard]] inline PipelineConfig parse_config(std::string_view text) {
    PipelineConfig c;
    int line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string line = detail::trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::type_mismatch, "expected 'key = value', got '" + line + "'", line_no);
        }
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::type_mismatch, "missing key", line_no);
        set_config_value(c, key, value, line_no);
    }
    return c;
}

[[nodiscard]] inline PipelineConfig validate_config(const fs::path& path) { return parse_config(read_text(path)); }

/// Canonical text form listing every key; parse_config(write_config(c)) == c.
[[nodiscard]] inline std::string write_config(const PipelineConfig& c) {
    std::vector<std::string> fractions;
    for (double f : c.fractions) fractions.push_back(format_double(f));
    std::vector<std::string> classifiers;
    for (auto k : c.classifiers) classifiers.push_back(ml::to_string(k));
    std::string out;
    auto kv = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
    kv("repo", detail::join(c.repos));
    kv("commit", c.commit);
    kv("files", c.files);
    kv("window_years", format_double(c.window_years));
    kv("indicator", std::string(labeling::to_string(c.indicator)));
    kv("ugly_fraction", format_double(c.ugly_fraction));
    kv("theta", format_double(c.theta));
    kv("seed", std::to_string(c.seed));
    kv("high_recall_keywords", detail::join(c.bug_rules.high_recall_keywords));
    kv("high_precision_bug_words", detail::join(c.bug_rules.high_precision_bug_words));
    kv("high_precision_fix_words", detail::join(c.bug_rules.high_precision_fix_words));
    kv("single_method_only", c.bug_rules.single_method_only ? "true" : "false");
    kv("fractions", detail::join(fractions));
    kv("top_n", std::to_string(c.top_n));
    kv("per_project_cap", std::to_string(c.per_project_cap));
    kv("classifiers", detail::join(classifiers));
    kv("out", c.out);
    kv("jobs", std::to_string(c.jobs));
    return out;
}

}  // namespace methodlens::io
