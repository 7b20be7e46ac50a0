#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "methodlens/error.hpp"
#include "methodlens/history/tracer.hpp"
#include "methodlens/java/extract.hpp"
#include "methodlens/labeling/labeling.hpp"
#include "methodlens/metrics/metric_vector.hpp"

namespace methodlens::io {

using nlohmann::json;

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed ") + what + " record: " + e.what());
    }
}

[[nodiscard]] inline json to_json(const metrics::MetricVector& m) {
    const auto values = metrics::to_array(m);
    json j = json::object();
    for (std::size_t k = 0; k < metrics::kMetricCount; ++k) {
        const std::string name(metrics::kMetricNames[k]);
        if (metrics::is_binary_metric(k)) {
            j[name] = values[k] != 0.0;
        } else if (name == "indentStd" || name == "maintainabilityIndex" || name == "readability" ||
                   name == "simpleReadability" || name == "commentRatio") {
            j[name] = values[k];
        } else {
            j[name] = static_cast<long>(values[k]);
        }
    }
    return j;
}

[[nodiscard]] inline metrics::MetricVector metrics_from_json(const json& j) {
    return guarded("metrics", [&] {
        std::array<double, metrics::kMetricCount> values{};
        for (std::size_t k = 0; k < metrics::kMetricCount; ++k) {
            const auto& v = j.at(std::string(metrics::kMetricNames[k]));
            values[k] = v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>();
        }
        return metrics::from_array(values);
    });
}

[[nodiscard]] inline json to_json(const history::ChangeIndicators& c) {
    return {{"revisions", c.revisions},
            {"diffSize", c.diff_size},
            {"additionOnly", c.addition_only},
            {"editDistance", c.edit_distance}};
}

[[nodiscard]] inline history::ChangeIndicators indicators_from_json(const json& j) {
    return guarded("indicators", [&] {
        return history::ChangeIndicators{j.at("revisions").get<long>(), j.at("diffSize").get<long>(),
                                         j.at("additionOnly").get<long>(), j.at("editDistance").get<long>()};
    });
}

[[nodiscard]] inline json to_json(const history::MethodIdentity& id) {
    return {{"project", id.project}, {"path", id.path}, {"signature", id.signature}, {"startLine", id.start_line}};
}

[[nodiscard]] inline history::MethodIdentity identity_from_json(const json& j) {
    return guarded("identity", [&] {
        return history::MethodIdentity{j.at("project").get<std::string>(), j.at("path").get<std::string>(),
                                       j.at("signature").get<std::string>(), j.at("startLine").get<int>()};
    });
}

/// Every declaration field, so a record can be turned back into the declaration.
[[nodiscard]] inline json declaration_fields(const java::MethodDeclaration& d) {
    return {{"signature", java::signature(d)},
            {"name", d.name},
            {"parameterTypes", d.parameter_types},
            {"modifiers", d.modifiers.names()},
            {"annotations", d.annotations},
            {"containerChain", d.container_chain},
            {"startLine", d.start_line},
            {"endLine", d.end_line},
            {"startColumn", d.start_column},
            {"endColumn", d.end_column},
            {"bodyOffset", d.body_offset},
            {"body", d.body_text}};
}

[[nodiscard]] inline java::MethodDeclaration declaration_from_json(const json& j) {
    return guarded("method", [&] {
        java::MethodDeclaration d;
        d.name = j.at("name").get<std::string>();
        d.parameter_types = j.at("parameterTypes").get<std::vector<std::string>>();
        for (const auto& m : j.at("modifiers")) d.modifiers.insert(m.get<std::string>());
        d.annotations = j.at("annotations").get<std::vector<std::string>>();
        d.container_chain = j.at("containerChain").get<std::vector<std::string>>();
        d.start_line = j.at("startLine").get<int>();
        d.end_line = j.at("endLine").get<int>();
        d.start_column = j.value("startColumn", 1);
        d.end_column = j.value("endColumn", 1);
        d.body_offset = j.at("bodyOffset").get<std::size_t>();
        d.body_text = j.at("body").get<std::string>();
        return d;
    });
}

/// methods.ndjson record.
[[nodiscard]] inline json method_record(const std::string& project, const std::string& commit, const std::string& file,
                                        const java::MethodDeclaration& d) {
    json j = declaration_fields(d);
    j["project"] = project;
    j["commit"] = commit;
    j["file"] = file;
    return j;
}

[[nodiscard]] inline json to_json(const history::Revision& r) {
    return {{"commit", r.commit.id},
            {"time", r.commit.author_time},
            {"added", r.lines_added},
            {"deleted", r.lines_deleted},
            {"editDistance", r.edit_distance},
            {"daysSinceIntroduction", r.days_since_introduction},
            {"message", r.commit.message}};
}

[[nodiscard]] inline history::Revision revision_from_json(const json& j) {
    return guarded("revision", [&] {
        history::Revision r;
        r.commit.id = j.at("commit").get<std::string>();
        r.commit.author_time = j.at("time").get<std::int64_t>();
        r.commit.message = j.at("message").get<std::string>();
        r.lines_added = j.at("added").get<int>();
        r.lines_deleted = j.at("deleted").get<int>();
        r.edit_distance = j.at("editDistance").get<long>();
        r.days_since_introduction = j.at("daysSinceIntroduction").get<double>();
        return r;
    });
}

/// histories.ndjson record: trace result plus window indicators and inception metrics.
[[nodiscard]] inline json history_record(const history::MethodHistory& h, const history::CommitMeta& snapshot,
                                         const history::ChangeIndicators& indicators,
                                         const metrics::MetricVector& inception) {
    json revisions = json::array();
    for (const auto& r : h.revisions) revisions.push_back(to_json(r));
    json intro = declaration_fields(h.introduction.declaration);
    intro["commit"] = h.introduction.commit.id;
    intro["time"] = h.introduction.commit.author_time;
    intro["path"] = h.introduction.path;
    intro["message"] = h.introduction.commit.message;
    return {{"identity", to_json(h.identity)},
            {"snapshot", {{"commit", snapshot.id}, {"time", snapshot.author_time}}},
            {"introduction", intro},
            {"revisions", revisions},
            {"indicators", to_json(indicators)},
            {"metrics", to_json(inception)}};
}

struct HistoryRecord {
    history::MethodHistory history;
    std::int64_t snapshot_time = 0;
    history::ChangeIndicators indicators;
    metrics::MetricVector metrics;
};

[[nodiscard]] inline HistoryRecord history_from_json(const json& j) {
    return guarded("history", [&] {
        HistoryRecord rec;
        rec.history.identity = identity_from_json(j.at("identity"));
        rec.snapshot_time = j.at("snapshot").at("time").get<std::int64_t>();
        const auto& intro = j.at("introduction");
        rec.history.introduction.commit.id = intro.at("commit").get<std::string>();
        rec.history.introduction.commit.author_time = intro.at("time").get<std::int64_t>();
        rec.history.introduction.commit.message = intro.value("message", "");
        rec.history.introduction.path = intro.at("path").get<std::string>();
        rec.history.introduction.declaration = declaration_from_json(intro);
        for (const auto& r : j.at("revisions")) rec.history.revisions.push_back(revision_from_json(r));
        rec.indicators = indicators_from_json(j.at("indicators"));
        rec.metrics = metrics_from_json(j.at("metrics"));
        return rec;
    });
}

[[nodiscard]] inline json to_json(const labeling::LabeledMethod& m) {
    return {{"identity", to_json(m.identity)},
            {"metrics", to_json(m.metrics)},
            {"indicators", to_json(m.indicators)},
            {"label", labeling::to_string(m.label)},
            {"bugCountHighRecall", m.bug_count_high_recall},
            {"bugCountHighPrecision", m.bug_count_high_precision}};
}

[[nodiscard]] inline labeling::LabeledMethod labeled_from_json(const json& j) {
    return guarded("dataset", [&] {
        labeling::LabeledMethod m;
        m.identity = identity_from_json(j.at("identity"));
        m.metrics = metrics_from_json(j.at("metrics"));
        m.indicators = indicators_from_json(j.at("indicators"));
        m.label = labeling::parse_label(j.at("label").get<std::string>());
        m.bug_count_high_recall = j.at("bugCountHighRecall").get<int>();
        m.bug_count_high_precision = j.at("bugCountHighPrecision").get<int>();
        return m;
    });
}

/// Groups dataset records by project, projects in name order.
[[nodiscard]] inline std::vector<labeling::ProjectDataset> group_by_project(std::vector<labeling::LabeledMethod> ms) {
    std::map<std::string, labeling::ProjectDataset> by;
    for (auto& m : ms) {
        auto& p = by[m.identity.project];
        p.project = m.identity.project;
        p.methods.push_back(std::move(m));
    }
    std::vector<labeling::ProjectDataset> out;
    for (auto& [_, p] : by) out.push_back(std::move(p));
    return out;
}

}  // namespace methodlens::io
