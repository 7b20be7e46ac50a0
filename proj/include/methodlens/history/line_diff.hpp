#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "methodlens/java/source_file.hpp"

namespace methodlens::history {

struct LineDiff {
    int added = 0;
    int deleted = 0;
    friend bool operator==(const LineDiff&, const LineDiff&) = default;
};

/// Line-level diff through the longest common subsequence of lines: lines of
/// `b` outside the LCS are added, lines of `a` outside it are deleted.
[[nodiscard]] inline LineDiff line_diff(std::string_view a, std::string_view b) {
    if (a == b) return {};
    const auto la = a.empty() ? std::vector<std::string_view>{} : java::split_lines(a);
    const auto lb = b.empty() ? std::vector<std::string_view>{} : java::split_lines(b);

    // Intern lines so the DP compares integers.
    std::unordered_map<std::string_view, int> ids;
    auto intern = [&](const std::vector<std::string_view>& lines) {
        std::vector<int> out;
        out.reserve(lines.size());
        for (auto l : lines) out.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
        return out;
    };
    const auto xa = intern(la);
    const auto xb = intern(lb);

    std::vector<int> prev(xb.size() + 1, 0);
    std::vector<int> cur(xb.size() + 1, 0);
    for (std::size_t i = 1; i <= xa.size(); ++i) {
        for (std::size_t j = 1; j <= xb.size(); ++j) {
            cur[j] = xa[i - 1] == xb[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    const int lcs = prev[xb.size()];
    return {static_cast<int>(xb.size()) - lcs, static_cast<int>(xa.size()) - lcs};
}

}  // namespace methodlens::history
