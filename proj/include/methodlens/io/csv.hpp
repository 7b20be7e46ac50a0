#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "methodlens/io/files.hpp"

namespace methodlens::io {

/// Minimal RFC 4180 writer.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

    CsvWriter& row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ += ',';
            out_ += quote(cells[i]);
        }
        out_ += '\n';
        return *this;
    }

    [[nodiscard]] const std::string& str() const noexcept { return out_; }

    static std::string quote(std::string_view cell) {
        if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

private:
    std::string out_;
};

/// Parses CSV text written by CsvWriter (quoted cells, embedded newlines).
[[nodiscard]] inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
        } else if (c == '\n') {
            row.push_back(std::move(cell));
            cell.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (any) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace methodlens::io
