#pragma once

#include <fnmatch.h>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "methodlens/error.hpp"
#include "methodlens/history/git_repository.hpp"
#include "methodlens/history/tracer.hpp"
#include "methodlens/io/config.hpp"
#include "methodlens/io/csv.hpp"
#include "methodlens/io/ndjson.hpp"
#include "methodlens/io/records.hpp"
#include "methodlens/java/extract.hpp"
#include "methodlens/labeling/labeling.hpp"
#include "methodlens/log.hpp"
#include "methodlens/metrics/metrics.hpp"
#include "methodlens/ml/protocols.hpp"
#include "methodlens/ml/report.hpp"
#include "methodlens/stats/stats.hpp"

namespace methodlens::pipeline {

namespace fs = std::filesystem;
using io::json;
using io::StageRecord;

/// A local clone and the project name derived from its directory.
struct ProjectRepo {
    std::string name;
    std::string path;
};

[[nodiscard]] inline std::string project_name(const std::string& repo_path) {
    fs::path p = fs::path(repo_path).lexically_normal();
    if (p.filename().empty()) p = p.parent_path();
    return p.filename().string();
}

[[nodiscard]] inline std::vector<ProjectRepo> project_repos(const io::PipelineConfig& cfg) {
    std::vector<ProjectRepo> out;
    std::set<std::string> seen;
    for (const auto& path : cfg.repos) {
        auto name = project_name(path);
        if (!seen.insert(name).second) {
            throw Error(ErrorCode::type_mismatch, "two repositories share the project name '" + name + "'");
        }
        out.push_back({std::move(name), path});
    }
    return out;
}

[[nodiscard]] inline history::TraceConfig trace_config(const io::PipelineConfig& cfg, const std::string& commit) {
    history::TraceConfig t;
    t.similarity_threshold = cfg.theta;
    t.window_years = cfg.window_years;
    t.snapshot_commit = commit;
    return t;
}

/// Config keys each stage depends on; their canonical text feeds the stage's digest.
[[nodiscard]] inline std::string stage_config_text(const std::string& stage, const io::PipelineConfig& cfg) {
    const std::map<std::string, std::vector<std::string>> keys = {
        {"extract", {"commit", "files"}},
        {"trace", {"theta", "window_years"}},
        {"label",
         {"window_years", "indicator", "ugly_fraction", "high_recall_keywords", "high_precision_bug_words",
          "high_precision_fix_words", "single_method_only"}},
        {"pareto", {"indicator", "fractions"}},
        {"bugs", {"indicator", "fractions"}},
        {"correlate", {"indicator"}},
        {"rank", {"indicator", "top_n", "per_project_cap"}},
        {"train", {"seed", "classifiers"}},
        {"report", {}},
    };
    const auto it = keys.find(stage);
    if (it == keys.end()) return {};
    std::string out;
    const auto full = io::write_config(cfg);
    std::size_t start = 0;
    while (start < full.size()) {
        const auto end = full.find('\n', start);
        const std::string line = full.substr(start, end - start);
        start = end + 1;
        const std::string key = line.substr(0, line.find(" = "));
        if (std::find(it->second.begin(), it->second.end(), key) != it->second.end()) out += line + "\n";
    }
    return out;
}

[[nodiscard]] inline std::string config_digest(const std::string& stage, const io::PipelineConfig& cfg) {
    return "sha256:" + io::sha256_hex(stage_config_text(stage, cfg));
}

/// Stage record whose digests cover the relevant config and every input file.
[[nodiscard]] inline StageRecord make_stage_record(const std::string& stage, const io::PipelineConfig& cfg,
                                                   const std::vector<fs::path>& inputs) {
    StageRecord r;
    r.stage = stage;
    r.input_digests["config"] = config_digest(stage, cfg);
    for (const auto& p : inputs) {
        if (!fs::exists(p)) throw Error(ErrorCode::missing_stage, p.string() + " does not exist");
        r.input_digests["file:" + p.filename().string()] = io::file_digest(p);
    }
    return r;
}

inline void require_stage(const io::NdjsonFile& f, const std::string& expected, const fs::path& path,
                          const std::string& alternative = "") {
    if (f.header.stage != expected && (alternative.empty() || f.header.stage != alternative)) {
        throw Error(ErrorCode::invalid_input,
                    path.string() + " holds '" + f.header.stage + "' output, expected '" + expected + "'");
    }
}

// ---------------------------------------------------------------- extract

/// Every method of every file matching `glob` at `commit`, in path then source order.
[[nodiscard]] inline std::vector<json> extract_records(history::Repository& repo, const std::string& project,
                                                       const std::string& commit, const std::string& glob) {
    std::vector<java::SourceFile> files;
    auto paths = repo.list_files(commit);
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        if (::fnmatch(glob.c_str(), path.c_str(), 0) != 0) continue;
        const auto content = repo.read_file(commit, path);
        if (!content) {
            log::warn(project + ": cannot read " + path + " at " + commit);
            continue;
        }
        files.emplace_back(path, *content);
    }
    const auto batch = java::extract_all(files);
    std::vector<json> records;
    for (const auto& f : batch.files) {
        for (const auto& d : f.methods) records.push_back(io::method_record(project, commit, f.path, d));
    }
    return records;
}

/// Writes methods.ndjson for all repositories. Resolves every snapshot first.
inline void run_extract(const std::vector<ProjectRepo>& repos, const io::PipelineConfig& cfg, const fs::path& out) {
    if (repos.empty()) throw Error(ErrorCode::type_mismatch, "no repository given");
    std::vector<std::unique_ptr<history::GitRepository>> opened;
    std::vector<std::string> commits;
    for (const auto& r : repos) {
        opened.push_back(std::make_unique<history::GitRepository>(r.path));
        commits.push_back(opened.back()->resolve(cfg.commit).id);
    }
    StageRecord header = make_stage_record("extract", cfg, {});
    std::vector<json> records;
    for (std::size_t i = 0; i < repos.size(); ++i) {
        header.input_digests["repo:" + repos[i].name] = "git:" + commits[i];
        auto recs = extract_records(*opened[i], repos[i].name, commits[i], cfg.files);
        log::info(repos[i].name + ": " + std::to_string(recs.size()) + " methods at " + commits[i].substr(0, 12));
        records.insert(records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    io::write_ndjson(out, header, records);
}

// ---------------------------------------------------------------- metrics

/// Appends a `metrics` object to each method record; optionally writes the 17-column CSV.
inline void run_metrics(const fs::path& methods_in, const fs::path& out, const std::optional<fs::path>& csv,
                        const io::PipelineConfig& cfg) {
    const auto in = io::read_ndjson(methods_in);
    require_stage(in, "extract", methods_in);
    StageRecord header = make_stage_record("metrics", cfg, {methods_in});
    std::vector<json> records;
    std::vector<std::string> names(metrics::kMetricNames.begin(), metrics::kMetricNames.end());
    io::CsvWriter table(names);
    for (auto rec : in.records) {
        const auto m = metrics::compute_metric_vector(io::declaration_from_json(rec));
        rec["metrics"] = io::to_json(m);
        std::vector<std::string> cells;
        const auto values = metrics::to_array(m);
        for (double v : values) cells.push_back(io::format_double(v));
        table.row(cells);
        records.push_back(std::move(rec));
    }
    io::write_ndjson(out, header, records);
    if (csv) io::write_atomic(*csv, table.str());
}

// ---------------------------------------------------------------- trace

/// Traces the methods of one project; records carry window indicators and inception metrics.
[[nodiscard]] inline std::vector<json> trace_records(history::Repository& repo, const std::string& project,
                                                     const std::vector<const json*>& methods,
                                                     const history::TraceConfig& tcfg, unsigned jobs) {
    history::Tracer tracer(repo, tcfg, project);
    std::vector<history::MethodIdentity> ids;
    for (const auto* m : methods) {
        ids.push_back({project, m->at("file").get<std::string>(), m->at("signature").get<std::string>(),
                       m->at("startLine").get<int>()});
    }
    const auto histories = tracer.trace_all(ids, jobs);
    std::vector<json> out;
    for (const auto& h : histories) {
        const auto ind = history::compute_indicators(h, tcfg);
        const auto inception = metrics::compute_metric_vector(h.introduction.declaration);
        auto rec = io::history_record(h, tracer.snapshot(), ind, inception);
        rec["ageDays"] = history::age_days(tracer.snapshot().author_time, h.introduction.commit.author_time);
        out.push_back(std::move(rec));
    }
    return out;
}

/// Writes histories.ndjson. The snapshot of each project is the commit its method records name.
inline void run_trace(const std::vector<ProjectRepo>& repos, const fs::path& methods_in, const io::PipelineConfig& cfg,
                      const fs::path& out) {
    const auto in = io::read_ndjson(methods_in);
    require_stage(in, "extract", methods_in, "metrics");
    std::vector<std::string> order;
    std::map<std::string, std::vector<const json*>> by_project;
    for (const auto& rec : in.records) {
        const auto project = rec.at("project").get<std::string>();
        if (!by_project.count(project)) order.push_back(project);
        by_project[project].push_back(&rec);
    }
    StageRecord header = make_stage_record("trace", cfg, {methods_in});
    std::vector<json> records;
    for (const auto& project : order) {
        const auto it = std::find_if(repos.begin(), repos.end(), [&](const auto& r) { return r.name == project; });
        if (it == repos.end()) {
            throw Error(ErrorCode::repo_access, "no repository given for project '" + project + "'");
        }
        history::GitRepository repo(it->path);
        const auto commit = by_project[project].front()->at("commit").get<std::string>();
        auto recs = trace_records(repo, project, by_project[project], trace_config(cfg, commit), cfg.jobs);
        log::info(project + ": traced " + std::to_string(recs.size()) + " methods");
        records.insert(records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    io::write_ndjson(out, header, records);
}

// ---------------------------------------------------------------- label

struct ProjectLabelSummary {
    std::string project;
    std::size_t traced = 0;
    std::size_t kept = 0;
    labeling::LabelCounts counts;
};

/// Age-filters, counts bug fixes and labels each project of the history records.
[[nodiscard]] inline std::vector<labeling::LabeledMethod> label_histories(const std::vector<io::HistoryRecord>& records,
                                                                          const io::PipelineConfig& cfg,
                                                                          std::vector<ProjectLabelSummary>* summary = nullptr) {
    std::map<std::string, std::vector<const io::HistoryRecord*>> by_project;
    for (const auto& r : records) by_project[r.history.identity.project].push_back(&r);
    const auto tcfg = trace_config(cfg, "");
    std::vector<labeling::LabeledMethod> out;
    for (const auto& [project, recs] : by_project) {
        std::vector<history::MethodHistory> all;
        for (const auto* r : recs) all.push_back(r->history);
        const auto touched = labeling::commit_touch_counts(all);
        std::vector<const io::HistoryRecord*> kept_recs;
        std::vector<history::MethodHistory> kept;
        for (const auto* r : recs) {
            if (history::age_days(r->snapshot_time, r->history.introduction.commit.author_time) >= tcfg.window_days()) {
                kept_recs.push_back(r);
                kept.push_back(r->history);
            }
        }
        ProjectLabelSummary s{project, recs.size(), kept.size(), {}};
        if (kept.empty()) {
            log::warn(project + ": no method is old enough for the window; project skipped");
            if (summary) summary->push_back(s);
            continue;
        }
        const auto bugs = labeling::bug_counts(kept, cfg.bug_rules, tcfg, touched);
        std::vector<labeling::LabeledMethod> ms;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            ms.push_back({kept[i].identity, kept_recs[i]->metrics, kept_recs[i]->indicators, labeling::Label::bad,
                          bugs[i].high_recall, bugs[i].high_precision});
        }
        s.counts = labeling::label_methods(ms, cfg.indicator, cfg.ugly_fraction);
        if (summary) summary->push_back(s);
        out.insert(out.end(), std::make_move_iterator(ms.begin()), std::make_move_iterator(ms.end()));
    }
    return out;
}

[[nodiscard]] inline std::vector<io::HistoryRecord> read_histories(const std::vector<fs::path>& files) {
    std::vector<io::HistoryRecord> out;
    for (const auto& f : files) {
        const auto in = io::read_ndjson(f);
        require_stage(in, "trace", f);
        for (const auto& r : in.records) out.push_back(io::history_from_json(r));
    }
    return out;
}

/// Writes dataset.ndjson and, when requested, a per-project label summary CSV.
inline void run_label(const std::vector<fs::path>& histories_in, const io::PipelineConfig& cfg, const fs::path& out,
                      const std::optional<fs::path>& summary_csv = std::nullopt) {
    const auto records = read_histories(histories_in);
    StageRecord header = make_stage_record("label", cfg, histories_in);
    std::vector<ProjectLabelSummary> summary;
    const auto labeled = label_histories(records, cfg, &summary);
    std::vector<json> recs;
    for (const auto& m : labeled) recs.push_back(io::to_json(m));
    io::write_ndjson(out, header, recs);
    if (summary_csv) {
        io::CsvWriter w({"project", "traced", "aged", "good", "bad", "ugly", "unchangedShare"});
        for (const auto& s : summary) {
            const double share = s.kept ? static_cast<double>(s.counts.good) / static_cast<double>(s.kept)
                                        : std::numeric_limits<double>::quiet_NaN();
            w.row({s.project, std::to_string(s.traced), std::to_string(s.kept), std::to_string(s.counts.good),
                   std::to_string(s.counts.bad), std::to_string(s.counts.ugly), io::format_double(share)});
        }
        io::write_atomic(*summary_csv, w.str());
    }
}

[[nodiscard]] inline std::vector<labeling::ProjectDataset> read_dataset(const fs::path& path) {
    const auto in = io::read_ndjson(path);
    require_stage(in, "label", path);
    std::vector<labeling::LabeledMethod> ms;
    for (const auto& r : in.records) ms.push_back(io::labeled_from_json(r));
    return io::group_by_project(std::move(ms));
}

// ---------------------------------------------------------------- pareto / bugs

[[nodiscard]] inline std::string curve_csv(const std::vector<labeling::ProjectDataset>& corpus,
                                           const std::function<labeling::ParetoCurve(const labeling::ProjectDataset&)>& curve) {
    io::CsvWriter w({"project", "fraction", "captured"});
    for (const auto& p : corpus) {
        const auto c = curve(p);
        for (std::size_t i = 0; i < c.fractions.size(); ++i) {
            w.row({p.project, io::format_double(c.fractions[i]), io::format_double(c.captured[i])});
        }
    }
    return w.str();
}

inline void run_pareto(const fs::path& dataset_in, const io::PipelineConfig& cfg, const fs::path& out) {
    const auto corpus = read_dataset(dataset_in);
    io::write_atomic(out, curve_csv(corpus, [&](const labeling::ProjectDataset& p) {
                         return labeling::pareto_curve(p.methods, cfg.indicator, cfg.fractions);
                     }));
}

inline void run_bugs(const fs::path& dataset_in, const io::PipelineConfig& cfg, labeling::BugDataset which,
                     const fs::path& out) {
    const auto corpus = read_dataset(dataset_in);
    io::write_atomic(out, curve_csv(corpus, [&](const labeling::ProjectDataset& p) {
                         return labeling::bug_capture(p.methods, cfg.indicator, cfg.fractions, which);
                     }));
}

// ---------------------------------------------------------------- correlate

inline void run_correlate(const fs::path& dataset_in, const io::PipelineConfig& cfg, const fs::path& out) {
    const auto corpus = read_dataset(dataset_in);
    io::CsvWriter w({"metric", "tau", "p", "n"});
    for (const auto& e : stats::correlation_table(corpus, cfg.indicator)) {
        w.row({e.metric, io::format_double(e.tau), io::format_double(e.p_value), std::to_string(e.n)});
    }
    io::write_atomic(out, w.str());
}

// ---------------------------------------------------------------- rank

[[nodiscard]] inline json candidate_record(const labeling::ProjectDataset& project, const stats::Candidate& c,
                                           std::size_t position, const std::map<std::string, const io::HistoryRecord*>& histories) {
    const auto& m = project.methods[c.method_index];
    json rec = {{"position", position},
                {"project", project.project},
                {"identity", io::to_json(m.identity)},
                {"label", labeling::to_string(m.label)},
                {"score", c.score},
                {"projectRank", c.rank},
                {"metrics", io::to_json(m.metrics)},
                {"indicators", io::to_json(m.indicators)}};
    if (const auto it = histories.find(m.identity.key()); it != histories.end()) {
        const auto& h = it->second->history;
        rec["introduction"] = {{"commit", h.introduction.commit.id},
                               {"time", h.introduction.commit.author_time},
                               {"path", h.introduction.path},
                               {"body", h.introduction.declaration.body_text}};
        json revisions = json::array();
        for (const auto& r : h.revisions) revisions.push_back(io::to_json(r));
        rec["revisions"] = revisions;
    }
    return rec;
}

inline void run_rank(const fs::path& dataset_in, const std::vector<fs::path>& histories_in, const io::PipelineConfig& cfg,
                     const fs::path& out_good, const fs::path& out_ugly) {
    const auto corpus = read_dataset(dataset_in);
    const auto records = read_histories(histories_in);
    std::map<std::string, const io::HistoryRecord*> by_key;
    for (const auto& r : records) by_key[r.history.identity.key()] = &r;
    std::vector<fs::path> inputs = {dataset_in};
    inputs.insert(inputs.end(), histories_in.begin(), histories_in.end());
    const auto header = make_stage_record("rank", cfg, inputs);

    const auto signs = stats::metric_signs(stats::correlation_table(corpus, cfg.indicator));
    std::vector<stats::CompositeRanking> rankings;
    for (const auto& p : corpus) rankings.push_back(stats::composite_scores(p, signs));
    const auto sel = stats::select_surprising(corpus, rankings, cfg.top_n, cfg.per_project_cap);
    auto emit = [&](const std::vector<stats::Candidate>& cs, const fs::path& out) {
        std::vector<json> recs;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            recs.push_back(candidate_record(corpus[cs[i].project_index], cs[i], i + 1, by_key));
        }
        io::write_ndjson(out, header, recs);
    };
    emit(sel.good, out_good);
    emit(sel.ugly, out_ugly);
}

// ---------------------------------------------------------------- train

/// Errors that make a protocol inapplicable to the corpus rather than broken.
[[nodiscard]] inline bool is_corpus_limitation(ErrorCode code) {
    return code == ErrorCode::too_few_projects || code == ErrorCode::no_ugly_rows ||
           code == ErrorCode::single_class || code == ErrorCode::empty_test_set;
}

/// report.json for the requested approaches. Approaches that cannot run on
/// this corpus are recorded with the reason instead of failing the stage.
[[nodiscard]] inline json train_report(const std::vector<labeling::ProjectDataset>& corpus, const io::PipelineConfig& cfg,
                                       const std::vector<int>& approaches) {
    json report = {{"indicator", labeling::to_string(cfg.indicator)}, {"seed", cfg.seed}};
    std::vector<ml::FeatureRow> rows;
    std::optional<Error> rows_error;
    try {
        rows = ml::build_feature_rows(corpus);
    } catch (const Error& e) {
        if (!is_corpus_limitation(e.code())) throw;
        rows_error = e;
    }
    for (int approach : approaches) {
        const std::string key = "approach" + std::to_string(approach);
        try {
            if (rows_error) throw *rows_error;
            if (approach == 1) {
                report[key] = ml::to_json(ml::run_approach1(rows, cfg.seed, cfg.classifiers));
            } else {
                if (ml::distinct_projects(rows).size() < 2) {
                    throw Error(ErrorCode::too_few_projects, "leave-one-project-out needs at least 2 projects");
                }
                report[key] = ml::to_json(ml::run_approach2(rows, cfg.seed, cfg.classifiers, cfg.jobs));
            }
        } catch (const Error& e) {
            if (!is_corpus_limitation(e.code())) throw;
            log::warn(key + " skipped: " + e.what());
            report[key] = {{"approach", approach}, {"skipped", e.what()}};
        }
    }
    return report;
}

/// (project, precision, recall) rows of the approach-2 ugly-class results for one classifier.
[[nodiscard]] inline std::string pr_points_csv(const json& approach2, const std::string& classifier) {
    io::CsvWriter w({"project", "precision", "recall"});
    if (!approach2.contains("results")) return w.str();
    auto num = [](const json& v) { return v.is_number() ? io::format_double(v.get<double>()) : std::string("nan"); };
    for (const auto& res : approach2["results"]) {
        if (res["classifier"] != classifier) continue;
        for (const auto& row : res["perProject"]) {
            if (!row.contains("report")) continue;
            const auto& ugly = row["report"]["ugly"];
            w.row({row["project"].get<std::string>(), num(ugly["precision"]), num(ugly["recall"])});
        }
    }
    return w.str();
}

inline void run_train(const fs::path& dataset_in, const io::PipelineConfig& cfg, const std::vector<int>& approaches,
                      const fs::path& out, const std::optional<fs::path>& cdf_csv = std::nullopt) {
    const auto corpus = read_dataset(dataset_in);
    json report = {{"stageRecord", io::to_json(make_stage_record("train", cfg, {dataset_in}))}};
    report.update(train_report(corpus, cfg, approaches));
    io::write_atomic(out, report.dump(2) + "\n");
    if (cdf_csv) {
        const json empty = json::object();
        const auto& a2 = report.contains("approach2") ? report["approach2"] : empty;
        io::write_atomic(*cdf_csv, pr_points_csv(a2, ml::to_string(cfg.classifiers.front())));
    }
}

}  // namespace methodlens::pipeline
