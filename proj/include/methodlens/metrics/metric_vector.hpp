#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace methodlens::metrics {

/// Halstead operator/operand tallies for one method body.
struct HalsteadCounts {
    int total_operators = 0;     ///< N1
    int total_operands = 0;      ///< N2
    int distinct_operators = 0;  ///< n1
    int distinct_operands = 0;   ///< n2
    int length = 0;              ///< N = N1 + N2
    int vocabulary = 0;          ///< n = n1 + n2
    double volume = 0.0;         ///< N * log2(max(n, 2))

    friend bool operator==(const HalsteadCounts&, const HalsteadCounts&) = default;
};

/// The 17 inception-time method metrics.
struct MetricVector {
    int size = 0;
    int mccabe = 1;
    int nvar = 0;
    int ncomp = 0;
    double indent_std = 0.0;
    int max_block_depth = 0;
    int fanout = 0;
    int halstead_length = 0;
    double maintainability_index = 0.0;
    double readability = 0.0;
    double simple_readability = 0.0;
    int parameters = 0;
    int variables = 0;
    double comment_ratio = 0.0;
    bool getter_setter = false;
    bool is_public = false;
    bool is_static = false;

    friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

inline constexpr std::size_t kMetricCount = 17;

/// Column order shared by the metrics CSV, feature rows and correlation tables.
inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "size",          "mccabe",       "nvar",                 "ncomp",       "indentStd",
    "maxBlockDepth", "fanout",       "halsteadLength",       "maintainabilityIndex",
    "readability",   "simpleReadability", "parameters",      "variables",   "commentRatio",
    "getterSetter",  "isPublic",     "isStatic"};

/// Indices of the three binary metrics, which composite scores ignore.
inline constexpr std::array<std::size_t, 3> kBinaryMetricIndices = {14, 15, 16};

[[nodiscard]] inline constexpr bool is_binary_metric(std::size_t index) noexcept {
    return index >= 14 && index < kMetricCount;
}

/// Metrics as doubles in kMetricNames order; booleans become 0/1.
[[nodiscard]] inline std::array<double, kMetricCount> to_array(const MetricVector& m) {
    return {static_cast<double>(m.size),
            static_cast<double>(m.mccabe),
            static_cast<double>(m.nvar),
            static_cast<double>(m.ncomp),
            m.indent_std,
            static_cast<double>(m.max_block_depth),
            static_cast<double>(m.fanout),
            static_cast<double>(m.halstead_length),
            m.maintainability_index,
            m.readability,
            m.simple_readability,
            static_cast<double>(m.parameters),
            static_cast<double>(m.variables),
            m.comment_ratio,
            m.getter_setter ? 1.0 : 0.0,
            m.is_public ? 1.0 : 0.0,
            m.is_static ? 1.0 : 0.0};
}

[[nodiscard]] inline MetricVector from_array(const std::array<double, kMetricCount>& a) {
    MetricVector m;
    m.size = static_cast<int>(a[0]);
    m.mccabe = static_cast<int>(a[1]);
    m.nvar = static_cast<int>(a[2]);
    m.ncomp = static_cast<int>(a[3]);
    m.indent_std = a[4];
    m.max_block_depth = static_cast<int>(a[5]);
    m.fanout = static_cast<int>(a[6]);
    m.halstead_length = static_cast<int>(a[7]);
    m.maintainability_index = a[8];
    m.readability = a[9];
    m.simple_readability = a[10];
    m.parameters = static_cast<int>(a[11]);
    m.variables = static_cast<int>(a[12]);
    m.comment_ratio = a[13];
    m.getter_setter = a[14] != 0.0;
    m.is_public = a[15] != 0.0;
    m.is_static = a[16] != 0.0;
    return m;
}

}  // namespace methodlens::metrics
