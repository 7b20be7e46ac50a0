#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "methodlens/pipeline/stages.hpp"

namespace methodlens::pipeline {

/// Artifact file names inside the output directory.
namespace files {
inline const std::string kManifest = "pipeline.manifest.ndjson";
inline const std::string kMethods = "methods.ndjson";
inline const std::string kHistories = "histories.ndjson";
inline const std::string kDataset = "dataset.ndjson";
inline const std::string kLabelSummary = "label-summary.csv";
inline const std::string kPareto = "pareto.csv";
inline const std::string kBugsHighRecall = "bugs-high-recall.csv";
inline const std::string kBugsHighPrecision = "bugs-high-precision.csv";
inline const std::string kCorrelations = "correlations.csv";
inline const std::string kSurprisingGood = "surprising-good.ndjson";
inline const std::string kSurprisingUgly = "surprising-ugly.ndjson";
inline const std::string kReport = "report.json";
inline const std::string kParetoCdf = "plots/pareto-cdf.csv";
inline const std::string kBugsCdf = "plots/bugs-cdf.csv";
inline const std::string kPrCdf = "plots/pr-cdf.csv";
}  // namespace files

// ---------------------------------------------------------------- plot data

namespace detail {

inline void add_cdf(io::CsvWriter& w, const std::string& series, const std::vector<double>& values) {
    for (const auto& p : ml::cdf_points(values)) w.row({series, io::format_double(p.x), io::format_double(p.y)});
}

/// Groups the captured column of a (project, fraction, captured) CSV by fraction, in first-seen order.
[[nodiscard]] inline std::vector<std::pair<std::string, std::vector<double>>> captured_by_fraction(const fs::path& csv) {
    if (!fs::exists(csv)) throw Error(ErrorCode::missing_stage, csv.string() + " does not exist");
    const auto rows = io::parse_csv(io::read_text(csv));
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) throw Error(ErrorCode::invalid_input, csv.string() + ": expected 3 columns", int(i + 1));
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == rows[i][1]; });
        if (it == out.end()) {
            out.emplace_back(rows[i][1], std::vector<double>{});
            it = std::prev(out.end());
        }
        it->second.push_back(rows[i][2] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(rows[i][2]));
    }
    return out;
}

}  // namespace detail

/// Writes plot-ready CDF files with columns (series, x, y):
///  - pareto-cdf.csv: per fraction, the captured share across projects;
///  - bugs-cdf.csv: the same for both bug datasets;
///  - pr-cdf.csv: per classifier, leave-one-project-out ugly precision and recall.
/// Undefined values (NaN) are left out of the CDFs.
inline void emit_plot_data(const fs::path& dir) {
    {
        io::CsvWriter w({"series", "x", "y"});
        for (const auto& [fraction, values] : detail::captured_by_fraction(dir / files::kPareto)) {
            detail::add_cdf(w, "pareto@" + fraction, values);
        }
        io::write_atomic(dir / files::kParetoCdf, w.str());
    }
    {
        io::CsvWriter w({"series", "x", "y"});
        for (const auto& [name, file] : {std::pair{"high-recall", files::kBugsHighRecall},
                                         std::pair{"high-precision", files::kBugsHighPrecision}}) {
            for (const auto& [fraction, values] : detail::captured_by_fraction(dir / file)) {
                detail::add_cdf(w, std::string(name) + "@" + fraction, values);
            }
        }
        io::write_atomic(dir / files::kBugsCdf, w.str());
    }
    {
        const auto path = dir / files::kReport;
        if (!fs::exists(path)) throw Error(ErrorCode::missing_stage, path.string() + " does not exist");
        json report;
        try {
            report = json::parse(io::read_text(path));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
        }
        io::CsvWriter w({"series", "x", "y"});
        if (report.contains("approach2") && report["approach2"].contains("results")) {
            for (const auto& res : report["approach2"]["results"]) {
                std::vector<double> precision, recall;
                for (const auto& row : res["perProject"]) {
                    if (!row.contains("report")) continue;
                    const auto& u = row["report"]["ugly"];
                    precision.push_back(u["precision"].is_number() ? u["precision"].get<double>()
                                                                   : std::numeric_limits<double>::quiet_NaN());
                    recall.push_back(u["recall"].is_number() ? u["recall"].get<double>()
                                                             : std::numeric_limits<double>::quiet_NaN());
                }
                const std::string c = res["classifier"].get<std::string>();
                detail::add_cdf(w, c + ":precision", precision);
                detail::add_cdf(w, c + ":recall", recall);
            }
        }
        io::write_atomic(dir / files::kPrCdf, w.str());
    }
}

// ---------------------------------------------------------------- runner

struct StageOutcome {
    std::string stage;
    bool ran = false;
};

struct RunSummary {
    fs::path out;
    std::vector<StageOutcome> stages;

    [[nodiscard]] std::size_t ran_count() const {
        return static_cast<std::size_t>(std::count_if(stages.begin(), stages.end(), [](auto& s) { return s.ran; }));
    }
};

namespace detail {

struct Stage {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::function<void()> run;
};

struct ManifestEntry {
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
};

[[nodiscard]] inline std::map<std::string, ManifestEntry> read_manifest(const fs::path& path) {
    std::map<std::string, ManifestEntry> out;
    if (!fs::exists(path)) return out;
    try {
        const auto f = io::read_ndjson(path);
        for (const auto& r : f.records) {
            out[r.at("stage").get<std::string>()] = {r.at("inputDigests").get<std::map<std::string, std::string>>(),
                                                     r.at("outputDigests").get<std::map<std::string, std::string>>()};
        }
    } catch (const std::exception& e) {
        log::warn("ignoring unreadable manifest: " + std::string(e.what()));
        out.clear();
    }
    return out;
}

inline void write_manifest(const fs::path& path, const std::vector<Stage>& stages,
                           const std::map<std::string, ManifestEntry>& entries) {
    StageRecord header;
    header.stage = "pipeline";
    std::vector<json> recs;
    for (const auto& s : stages) {
        const auto it = entries.find(s.name);
        if (it == entries.end()) continue;
        recs.push_back({{"stage", s.name}, {"inputDigests", it->second.inputs}, {"outputDigests", it->second.outputs}});
    }
    io::write_ndjson(path, header, recs);
}

}  // namespace detail

/// Runs extract, trace, label, pareto, bugs, correlate, rank, train and the
/// plot-data report in order, writing everything under cfg.out.
///
/// A stage is skipped when its recorded input digests and output files are
/// unchanged and none of its inputs was rewritten in this invocation.
inline RunSummary run_pipeline(const io::PipelineConfig& cfg) {
    const auto repos = project_repos(cfg);
    if (repos.empty()) throw Error(ErrorCode::type_mismatch, "config names no repository");
    std::map<std::string, std::string> snapshots;
    for (const auto& r : repos) {
        history::GitRepository repo(r.path);
        snapshots[r.name] = "git:" + repo.resolve(cfg.commit).id;
    }

    const fs::path dir = cfg.out;
    auto p = [&](const std::string& name) { return dir / name; };
    using namespace files;
    const std::vector<detail::Stage> stages = {
        {"extract", {}, {kMethods}, [&] { run_extract(repos, cfg, p(kMethods)); }},
        {"trace", {kMethods}, {kHistories}, [&] { run_trace(repos, p(kMethods), cfg, p(kHistories)); }},
        {"label", {kHistories}, {kDataset, kLabelSummary},
         [&] { run_label({p(kHistories)}, cfg, p(kDataset), p(kLabelSummary)); }},
        {"pareto", {kDataset}, {kPareto}, [&] { run_pareto(p(kDataset), cfg, p(kPareto)); }},
        {"bugs", {kDataset}, {kBugsHighRecall, kBugsHighPrecision},
         [&] {
             run_bugs(p(kDataset), cfg, labeling::BugDataset::high_recall, p(kBugsHighRecall));
             run_bugs(p(kDataset), cfg, labeling::BugDataset::high_precision, p(kBugsHighPrecision));
         }},
        {"correlate", {kDataset}, {kCorrelations}, [&] { run_correlate(p(kDataset), cfg, p(kCorrelations)); }},
        {"rank", {kDataset, kHistories}, {kSurprisingGood, kSurprisingUgly},
         [&] { run_rank(p(kDataset), {p(kHistories)}, cfg, p(kSurprisingGood), p(kSurprisingUgly)); }},
        {"train", {kDataset}, {kReport}, [&] { run_train(p(kDataset), cfg, {1, 2}, p(kReport)); }},
        {"report", {kPareto, kBugsHighRecall, kBugsHighPrecision, kReport}, {kParetoCdf, kBugsCdf, kPrCdf},
         [&] { emit_plot_data(dir); }},
    };

    fs::create_directories(dir);
    auto manifest = detail::read_manifest(p(kManifest));
    RunSummary summary{dir, {}};
    std::set<std::string> rewritten;
    for (const auto& stage : stages) {
        std::map<std::string, std::string> inputs = {{"config", config_digest(stage.name, cfg)}};
        if (stage.name == "extract") {
            for (const auto& [name, digest] : snapshots) inputs["repo:" + name] = digest;
        }
        for (const auto& f : stage.inputs) inputs["file:" + f] = io::file_digest(p(f));

        bool fresh = std::none_of(stage.inputs.begin(), stage.inputs.end(),
                                  [&](const std::string& f) { return rewritten.count(f) > 0; });
        if (fresh) {
            const auto it = manifest.find(stage.name);
            fresh = it != manifest.end() && it->second.inputs == inputs;
            for (const auto& f : stage.outputs) {
                if (!fresh) break;
                const auto o = it->second.outputs.find(f);
                fresh = fs::exists(p(f)) && o != it->second.outputs.end() && o->second == io::file_digest(p(f));
            }
        }
        if (fresh) {
            log::info("stage " + stage.name + ": up to date");
            summary.stages.push_back({stage.name, false});
            continue;
        }
        log::info("stage " + stage.name + ": running");
        try {
            stage.run();
        } catch (const Error& e) {
            throw Error(e.code(), "stage '" + stage.name + "' failed: " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::stage_failure, "stage '" + stage.name + "' failed: " + e.what());
        }
        detail::ManifestEntry entry{inputs, {}};
        for (const auto& f : stage.outputs) entry.outputs[f] = io::file_digest(p(f));
        manifest[stage.name] = std::move(entry);
        detail::write_manifest(p(kManifest), stages, manifest);
        rewritten.insert(stage.outputs.begin(), stage.outputs.end());
        summary.stages.push_back({stage.name, true});
    }
    return summary;
}

}  // namespace methodlens::pipeline
