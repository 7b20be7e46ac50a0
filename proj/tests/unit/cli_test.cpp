#include <gtest/gtest.h>

#include "methodlens/io/ndjson.hpp"
#include "methodlens/io/csv.hpp"

#include "../support/fixture_repo.hpp"

namespace fs = std::filesystem;
using methodlens::history::ProcessResult;
using methodlens::history::run_process;

namespace {

ProcessResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), METHODLENS_CLI);
    return run_process(args);
}

}  // namespace

TEST(Cli, SubcommandChainWritesReadableArtifacts) {
    const auto& fx = testsupport::fixture_repo();
    testsupport::TempDir tmp;
    const std::string out = (tmp.path() / "out").string();
    auto ok = [&](std::vector<std::string> args) {
        const auto r = cli(std::move(args));
        EXPECT_EQ(r.exit_code, 0) << r.err;
    };
    ok({"extract", "--repo", fx.repo, "--out", out});
    ok({"metrics", "--out", out, "--csv", out + "/metrics.csv"});
    ok({"trace", "--repo", fx.repo, "--out", out, "--window-years", "5", "--theta", "0.75"});
    ok({"label", "--out", out, "--indicator", "edit-distance", "--ugly-fraction", "0.2"});
    ok({"pareto", "--out", out});
    ok({"bugs", "--dataset", "high-precision", "--out", out});
    ok({"correlate", "--out", out});
    ok({"rank", "--out", out, "--top", "50", "--per-project", "2"});
    ok({"train", "--out", out, "--approach", "1", "--classifier", "logistic", "--seed", "7"});

    EXPECT_EQ(methodlens::io::read_ndjson(out + "/methods.ndjson").header.stage, "extract");
    EXPECT_EQ(methodlens::io::read_ndjson(out + "/methods.metrics.ndjson").records.at(0).contains("metrics"), true);
    const auto metric_rows = methodlens::io::parse_csv(methodlens::io::read_text(out + "/metrics.csv"));
    ASSERT_FALSE(metric_rows.empty());
    EXPECT_EQ(metric_rows[0].size(), 17u);
    EXPECT_EQ(metric_rows[0][0], "size");
    EXPECT_EQ(methodlens::io::read_ndjson(out + "/histories.ndjson").records.size(), fx.ledger["methods"].size());
    EXPECT_TRUE(fs::exists(out + "/bugs-high-precision.csv"));
    EXPECT_TRUE(fs::exists(out + "/surprising-good.ndjson"));
    const auto report = nlohmann::json::parse(methodlens::io::read_text(out + "/report.json"));
    EXPECT_EQ(report["seed"], 7);
    EXPECT_TRUE(report["approach1"].contains("skipped"));
}

TEST(Cli, ExitCodes) {
    const auto& fx = testsupport::fixture_repo();
    testsupport::TempDir tmp;
    const std::string out = (tmp.path() / "out").string();
    EXPECT_EQ(cli({}).exit_code, 2);
    EXPECT_EQ(cli({"label", "--out", out, "--ugly-fraction", "-1"}).exit_code, 2);
    const auto cfg = (tmp.path() / "bad.cfg").string();
    methodlens::io::write_atomic(cfg, "# header\nbogus = 3\n");
    const auto bad_key = cli({"pipeline", "--config", cfg});
    EXPECT_EQ(bad_key.exit_code, 2);
    EXPECT_NE(bad_key.err.find("line 2"), std::string::npos);
    EXPECT_EQ(cli({"extract", "--repo", fx.repo, "--commit", "nosuchref", "--out", out}).exit_code, 3);
    EXPECT_EQ(cli({"extract", "--repo", (tmp.path() / "missing").string(), "--out", out}).exit_code, 3);
    EXPECT_EQ(cli({"pareto", "--out", out}).exit_code, 4);
}

TEST(Cli, GitExecutableOverride) {
    const auto& fx = testsupport::fixture_repo();
    testsupport::TempDir tmp;
    const auto r = run_process({"env", "METHODLENS_GIT=/nonexistent/git", METHODLENS_CLI, "extract", "--repo", fx.repo,
                                "--out", (tmp.path() / "o").string()});
    EXPECT_EQ(r.exit_code, 3) << r.err;
}

TEST(Cli, PipelineSecondRunSkipsEverything) {
    const auto& fx = testsupport::fixture_repo();
    testsupport::TempDir tmp;
    const std::string out = (tmp.path() / "out").string();
    const auto first = cli({"pipeline", "--repo", fx.repo, "--out", out, "--write-config", out + ".cfg"});
    ASSERT_EQ(first.exit_code, 0) << first.err;
    const auto second = cli({"pipeline", "--config", out + ".cfg"});
    ASSERT_EQ(second.exit_code, 0) << second.err;
    EXPECT_EQ(second.out.find(": ran"), std::string::npos) << second.out;
    EXPECT_NE(second.out.find("report: up to date"), std::string::npos);
}
