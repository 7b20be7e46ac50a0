#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "methodlens/error.hpp"
#include "methodlens/io/files.hpp"

namespace methodlens::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Self-description written as the first line of every NDJSON output.
struct StageRecord {
    int schema_version = kSchemaVersion;
    std::string stage;
    std::string tool_version = std::string(kToolVersion);
    std::map<std::string, std::string> input_digests;

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

[[nodiscard]] inline json to_json(const StageRecord& r) {
    return {{"schemaVersion", r.schema_version},
            {"stage", r.stage},
            {"toolVersion", r.tool_version},
            {"inputDigests", r.input_digests}};
}

[[nodiscard]] inline StageRecord stage_record_from_json(const json& j) {
    try {
        StageRecord r;
        r.schema_version = j.at("schemaVersion").get<int>();
        r.stage = j.at("stage").get<std::string>();
        r.tool_version = j.at("toolVersion").get<std::string>();
        r.input_digests = j.at("inputDigests").get<std::map<std::string, std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed stage record: ") + e.what());
    }
}

struct NdjsonFile {
    StageRecord header;
    std::vector<json> records;
};

[[nodiscard]] inline std::string to_ndjson(const StageRecord& header, const std::vector<json>& records) {
    std::string out = json{{"stageRecord", to_json(header)}}.dump() + "\n";
    for (const auto& r : records) out += r.dump() + "\n";
    return out;
}

[[nodiscard]] inline NdjsonFile parse_ndjson(std::string_view text, const std::string& origin = "input") {
    NdjsonFile file;
    std::size_t start = 0;
    int line_no = 0;
    bool have_header = false;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::invalid_input, origin + ": " + e.what(), line_no);
        }
        if (!have_header) {
            if (!j.is_object() || !j.contains("stageRecord")) {
                throw Error(ErrorCode::invalid_input, origin + " does not start with a stage record", line_no);
            }
            file.header = stage_record_from_json(j["stageRecord"]);
            if (file.header.schema_version != kSchemaVersion) {
                throw Error(ErrorCode::invalid_input, origin + " has unsupported schema version " +
                                                          std::to_string(file.header.schema_version));
            }
            have_header = true;
            continue;
        }
        file.records.push_back(std::move(j));
    }
    if (!have_header) throw Error(ErrorCode::invalid_input, origin + " is empty (no stage record)");
    return file;
}

inline void write_ndjson(const fs::path& path, const StageRecord& header, const std::vector<json>& records) {
    write_atomic(path, to_ndjson(header, records));
}

[[nodiscard]] inline NdjsonFile read_ndjson(const fs::path& path) {
    if (!fs::exists(path)) throw Error(ErrorCode::missing_stage, path.string() + " does not exist");
    return parse_ndjson(read_text(path), path.string());
}

}  // namespace methodlens::io
