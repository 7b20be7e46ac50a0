#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace methodlens::java {

/// Repository-relative path plus LF-normalized content.
class SourceFile {
public:
    SourceFile() = default;
    SourceFile(std::string path, std::string_view raw_content)
        : path_(normalize_path(std::move(path))), content_(normalize_newlines(raw_content)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] const std::string& content() const noexcept { return content_; }

    /// CRLF and lone CR become LF.
    static std::string normalize_newlines(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '\r') {
                out.push_back('\n');
                if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
            } else {
                out.push_back(raw[i]);
            }
        }
        return out;
    }

    static std::string normalize_path(std::string path) {
        std::replace(path.begin(), path.end(), '\\', '/');
        while (path.rfind("./", 0) == 0) path.erase(0, 2);
        return path;
    }

private:
    std::string path_;
    std::string content_;
};

/// Byte offsets at which each 1-based line starts; index 0 holds line 1.
[[nodiscard]] inline std::vector<std::size_t> line_starts(std::string_view text) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') starts.push_back(i + 1);
    }
    return starts;
}

/// Lines [first, last] (1-based, inclusive) joined with '\n', no trailing newline.
[[nodiscard]] inline std::string slice_lines(std::string_view text, const std::vector<std::size_t>& starts,
                                             int first, int last) {
    const auto begin = starts.at(static_cast<std::size_t>(first - 1));
    std::size_t end = text.size();
    if (static_cast<std::size_t>(last) < starts.size()) end = starts[static_cast<std::size_t>(last)] - 1;
    return std::string(text.substr(begin, end - begin));
}

/// Splits on '\n'. A trailing newline does not produce an extra empty line.
[[nodiscard]] inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size() || lines.empty()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
        if (start == text.size()) break;
    }
    return lines;
}

}  // namespace methodlens::java
