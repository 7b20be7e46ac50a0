#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "methodlens/error.hpp"
#include "methodlens/io/config.hpp"
#include "methodlens/pipeline/pipeline.hpp"

namespace {

using namespace methodlens;
namespace fs = std::filesystem;
namespace files = pipeline::files;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_key:
        case ErrorCode::type_mismatch: return 2;
        case ErrorCode::repo_access:
        case ErrorCode::unknown_commit: return 3;
        default: return 4;
    }
}

struct Globals {
    std::vector<std::string> repos;
    std::optional<std::string> commit;
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
};

/// Config file (if any) with command-line overrides applied through the same validator.
io::PipelineConfig resolve_config(const Globals& g, const std::vector<std::pair<std::string, std::string>>& extra) {
    io::PipelineConfig cfg = g.config ? io::validate_config(*g.config) : io::PipelineConfig{};
    if (!g.repos.empty()) cfg.repos = g.repos;
    if (g.commit) io::set_config_value(cfg, "commit", *g.commit);
    if (g.out) io::set_config_value(cfg, "out", *g.out);
    if (g.seed) cfg.seed = *g.seed;
    if (g.jobs) io::set_config_value(cfg, "jobs", std::to_string(*g.jobs));
    for (const auto& [k, v] : extra) io::set_config_value(cfg, k, v);
    return cfg;
}

fs::path in_out(const io::PipelineConfig& cfg, const std::string& explicit_path, const std::string& name) {
    return explicit_path.empty() ? fs::path(cfg.out) / name : fs::path(explicit_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Method-level change-proneness analysis of Java repositories"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--repo", g.repos, "Local git clone (repeatable; project name = directory name)");
    app.add_option("--commit", g.commit, "Snapshot commit (default HEAD)");
    app.add_option("--config", g.config, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output directory (default methodlens-out)");
    app.add_option("--seed", g.seed, "Root random seed");
    app.add_option("--jobs", g.jobs, "Worker threads for tracing and training");

    // Overrides collected per subcommand, applied through set_config_value.
    std::vector<std::pair<std::string, std::string>> extra;
    auto setting = [&](CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(flag, [&extra, key](const std::string& v) { extra.emplace_back(key, v); },
                                              help);
    };

    std::string methods_path, histories_single, dataset_path, input_path, csv_path, cdf_csv;
    std::vector<std::string> histories_paths;
    std::string bug_dataset = "high-precision";
    int approach = 1;

    auto* extract = app.add_subcommand("extract", "Write methods.ndjson for the snapshot");
    setting(extract, "--files", "files", "Glob over repository paths (default *.java)");

    auto* metrics = app.add_subcommand("metrics", "Append metrics to method records");
    metrics->add_option("--methods", methods_path, "methods.ndjson (default <out>/methods.ndjson)");
    metrics->add_option("--csv", csv_path, "Also write the 17-column metric CSV here");

    auto* trace = app.add_subcommand("trace", "Trace method histories into histories.ndjson");
    trace->add_option("--methods", methods_path, "methods.ndjson (default <out>/methods.ndjson)");
    setting(trace, "--window-years", "window_years", "Age window in years (default 5)");
    setting(trace, "--theta", "theta", "Body similarity threshold (default 0.75)");

    auto* label = app.add_subcommand("label", "Label aged methods into dataset.ndjson");
    label->add_option("--histories", histories_paths, "histories.ndjson files (repeatable)");
    setting(label, "--indicator", "indicator", "revisions|diff-size|addition-only|edit-distance");
    setting(label, "--ugly-fraction", "ugly_fraction", "Share of methods labeled ugly (default 0.2)");
    setting(label, "--window-years", "window_years", "Age window in years (default 5)");

    auto* pareto = app.add_subcommand("pareto", "Write pareto.csv (project, fraction, captured)");
    pareto->add_option("--dataset", dataset_path, "dataset.ndjson (default <out>/dataset.ndjson)");
    setting(pareto, "--indicator", "indicator", "Change indicator");
    setting(pareto, "--fractions", "fractions", "Comma-separated top fractions");

    auto* bugs = app.add_subcommand("bugs", "Write bug capture curves (project, fraction, captured)");
    bugs->add_option("--dataset", bug_dataset, "high-recall|high-precision")
        ->check(CLI::IsMember({"high-recall", "high-precision"}));
    bugs->add_option("--input", input_path, "dataset.ndjson (default <out>/dataset.ndjson)");
    setting(bugs, "--indicator", "indicator", "Change indicator used for ranking");
    setting(bugs, "--fractions", "fractions", "Comma-separated top fractions");

    auto* correlate = app.add_subcommand("correlate", "Write correlations.csv (metric, tau, p, n)");
    correlate->add_option("--dataset", dataset_path, "dataset.ndjson (default <out>/dataset.ndjson)");
    setting(correlate, "--indicator", "indicator", "Change indicator");

    auto* rank = app.add_subcommand("rank", "Write surprisingly good and ugly candidates");
    rank->add_option("--dataset", dataset_path, "dataset.ndjson (default <out>/dataset.ndjson)");
    rank->add_option("--histories", histories_single, "histories.ndjson (default <out>/histories.ndjson)");
    setting(rank, "--top", "top_n", "Candidates per list (default 50)");
    setting(rank, "--per-project", "per_project_cap", "Candidates per project (default 2)");
    setting(rank, "--indicator", "indicator", "Change indicator");

    auto* train = app.add_subcommand("train", "Train and evaluate classifiers into report.json");
    train->add_option("--approach", approach, "1 = project split, 2 = leave one project out")
        ->check(CLI::IsMember({1, 2}));
    setting(train, "--classifier", "classifiers", "logistic|tree|forest (comma-separated)");
    train->add_option("--dataset", dataset_path, "dataset.ndjson (default <out>/dataset.ndjson)");
    train->add_option("--cdf-csv", cdf_csv, "Write (project, precision, recall) for approach 2");

    auto* report = app.add_subcommand("report", "Write plot-ready CDF files under <out>/plots");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage, skipping up-to-date ones");
    std::string write_config_path;
    pipeline_cmd->add_option("--write-config", write_config_path, "Also write the effective config here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto cfg = resolve_config(g, extra);
        const auto repos = pipeline::project_repos(cfg);
        if (extract->parsed()) {
            pipeline::run_extract(repos, cfg, fs::path(cfg.out) / files::kMethods);
        } else if (metrics->parsed()) {
            const auto in = in_out(cfg, methods_path, files::kMethods);
            std::optional<fs::path> csv;
            if (!csv_path.empty()) csv = csv_path;
            pipeline::run_metrics(in, fs::path(cfg.out) / "methods.metrics.ndjson", csv, cfg);
        } else if (trace->parsed()) {
            pipeline::run_trace(repos, in_out(cfg, methods_path, files::kMethods), cfg,
                                fs::path(cfg.out) / files::kHistories);
        } else if (label->parsed()) {
            std::vector<fs::path> inputs(histories_paths.begin(), histories_paths.end());
            if (inputs.empty()) inputs.push_back(fs::path(cfg.out) / files::kHistories);
            pipeline::run_label(inputs, cfg, fs::path(cfg.out) / files::kDataset,
                                fs::path(cfg.out) / files::kLabelSummary);
        } else if (pareto->parsed()) {
            pipeline::run_pareto(in_out(cfg, dataset_path, files::kDataset), cfg, fs::path(cfg.out) / files::kPareto);
        } else if (bugs->parsed()) {
            const auto which = labeling::parse_bug_dataset(bug_dataset);
            pipeline::run_bugs(in_out(cfg, input_path, files::kDataset), cfg, which,
                               fs::path(cfg.out) / (which == labeling::BugDataset::high_recall
                                                        ? files::kBugsHighRecall
                                                        : files::kBugsHighPrecision));
        } else if (correlate->parsed()) {
            pipeline::run_correlate(in_out(cfg, dataset_path, files::kDataset), cfg,
                                    fs::path(cfg.out) / files::kCorrelations);
        } else if (rank->parsed()) {
            pipeline::run_rank(in_out(cfg, dataset_path, files::kDataset),
                               {in_out(cfg, histories_single, files::kHistories)}, cfg,
                               fs::path(cfg.out) / files::kSurprisingGood, fs::path(cfg.out) / files::kSurprisingUgly);
        } else if (train->parsed()) {
            std::optional<fs::path> cdf;
            if (!cdf_csv.empty()) cdf = cdf_csv;
            pipeline::run_train(in_out(cfg, dataset_path, files::kDataset), cfg, {approach},
                                fs::path(cfg.out) / files::kReport, cdf);
        } else if (report->parsed()) {
            pipeline::emit_plot_data(cfg.out);
        } else if (pipeline_cmd->parsed()) {
            if (!write_config_path.empty()) io::write_atomic(write_config_path, io::write_config(cfg));
            const auto summary = pipeline::run_pipeline(cfg);
            for (const auto& s : summary.stages) {
                std::cout << s.stage << ": " << (s.ran ? "ran" : "up to date") << '\n';
            }
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
