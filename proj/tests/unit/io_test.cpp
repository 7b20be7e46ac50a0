#include <gtest/gtest.h>

#include "methodlens/io/config.hpp"
#include "methodlens/io/csv.hpp"
#include "methodlens/io/ndjson.hpp"
#include "methodlens/io/records.hpp"
#include "methodlens/metrics/metrics.hpp"

#include "../support/fixture_repo.hpp"

using namespace methodlens;
using namespace methodlens::io;

TEST(Files, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Files, FormatDoubleRoundTrips) {
    for (double v : {0.1, 0.2, 1.0 / 3.0, 1e-300, 123456.789, -0.0, 5.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.2), "0.2");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Files, WriteAtomicReplacesContent) {
    testsupport::TempDir dir;
    const auto p = dir.path() / "sub" / "a.txt";
    write_atomic(p, "one");
    write_atomic(p, "two");
    EXPECT_EQ(read_text(p), "two");
    EXPECT_EQ(std::distance(fs::directory_iterator(p.parent_path()), fs::directory_iterator{}), 1);
}

TEST(Files, MissingFileIsMissingStage) {
    try {
        (void)read_text("/nonexistent/methodlens/file");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::missing_stage);
    }
}

TEST(Csv, QuotesOnlyWhenNeeded) {
    CsvWriter w({"a", "b"});
    w.row({"plain", "has,comma"});
    w.row({"say \"hi\"", "line\nbreak"});
    EXPECT_EQ(w.str(), "a,b\nplain,\"has,comma\"\n\"say \"\"hi\"\"\",\"line\nbreak\"\n");
    const auto rows = parse_csv(w.str());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][1], "has,comma");
    EXPECT_EQ(rows[2][0], "say \"hi\"");
    EXPECT_EQ(rows[2][1], "line\nbreak");
}

TEST(Ndjson, HeaderFirstAndRoundTrip) {
    StageRecord h;
    h.stage = "extract";
    h.input_digests = {{"repo", "abc"}};
    const std::vector<json> recs = {json{{"x", 1}}, json{{"y", "z"}}};
    const auto text = to_ndjson(h, recs);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              R"({"stageRecord":{"inputDigests":{"repo":"abc"},"schemaVersion":1,"stage":"extract","toolVersion":"0.1.0"}})");
    const auto parsed = parse_ndjson(text);
    EXPECT_EQ(parsed.header, h);
    EXPECT_EQ(parsed.records, recs);
}

TEST(Ndjson, RejectsMissingHeaderAndBadLines) {
    EXPECT_THROW((void)parse_ndjson("{\"x\":1}\n"), Error);
    EXPECT_THROW((void)parse_ndjson(""), Error);
    try {
        (void)parse_ndjson(to_ndjson(StageRecord{}, {}) + "{broken\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.line(), 2);
    }
}

namespace {
java::MethodDeclaration sample_decl() {
    const java::SourceFile f("A.java",
                             "class A {\n  class B {\n    @Deprecated\n    public static <T> int f(java.util.List<T> xs, "
                             "int[] a) {\n      // count\n      return xs.size() + a.length;\n    }\n  }\n}\n");
    return java::extract_methods(f).at(0);
}
}  // namespace

TEST(Records, DeclarationRoundTrip) {
    const auto d = sample_decl();
    EXPECT_EQ(declaration_from_json(json::parse(declaration_fields(d).dump())), d);
    const auto rec = method_record("proj", "c0ffee", "A.java", d);
    EXPECT_EQ(rec["signature"], "A.B#f(java.util.List,int[])");
    EXPECT_EQ(rec["file"], "A.java");
}

TEST(Records, MetricsRoundTripExactly) {
    const auto m = metrics::compute_metric_vector(sample_decl());
    const auto j = to_json(m);
    EXPECT_TRUE(j["isPublic"].is_boolean());
    EXPECT_TRUE(j["size"].is_number_integer());
    EXPECT_EQ(metrics_from_json(json::parse(j.dump())), m);
}

TEST(Records, HistoryAndLabeledRoundTrip) {
    history::MethodHistory h;
    h.identity = {"proj", "A.java", "A.B#f(List,int[])", 4};
    h.introduction.commit = {"aaa", std::nullopt, 100, "Initial"};
    h.introduction.path = "A.java";
    h.introduction.declaration = sample_decl();
    history::Revision r;
    r.commit = {"bbb", std::nullopt, 86500, "Fix bug"};
    r.lines_added = 2;
    r.lines_deleted = 1;
    r.edit_distance = 17;
    r.days_since_introduction = 1.0;
    h.revisions.push_back(r);
    const history::ChangeIndicators ind{1, 3, 2, 17};
    const auto m = metrics::compute_metric_vector(h.introduction.declaration);
    const auto j = json::parse(history_record(h, {"ccc", std::nullopt, 999999, ""}, ind, m).dump());
    const auto back = history_from_json(j);
    EXPECT_EQ(back.history.identity, h.identity);
    EXPECT_EQ(back.history.introduction.declaration, h.introduction.declaration);
    EXPECT_EQ(back.history.introduction.commit.id, "aaa");
    ASSERT_EQ(back.history.revisions.size(), 1u);
    EXPECT_EQ(back.history.revisions[0].commit.message, "Fix bug");
    EXPECT_EQ(back.history.revisions[0].edit_distance, 17);
    EXPECT_EQ(back.indicators, ind);
    EXPECT_EQ(back.metrics, m);
    EXPECT_EQ(back.snapshot_time, 999999);

    labeling::LabeledMethod lm{h.identity, m, ind, labeling::Label::ugly, 1, 0};
    const auto lb = labeled_from_json(json::parse(to_json(lm).dump()));
    EXPECT_EQ(lb.identity, lm.identity);
    EXPECT_EQ(lb.label, labeling::Label::ugly);
    EXPECT_EQ(lb.metrics, m);
    EXPECT_EQ(lb.bug_count_high_recall, 1);
}

TEST(Records, MalformedRecordIsInvalidInput) {
    try {
        (void)labeled_from_json(json{{"identity", 3}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_input);
    }
}

TEST(Config, EmptyFileGivesDefaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c, PipelineConfig{});
    EXPECT_DOUBLE_EQ(c.window_years, 5.0);
    EXPECT_DOUBLE_EQ(c.ugly_fraction, 0.2);
    EXPECT_DOUBLE_EQ(c.theta, 0.75);
    EXPECT_EQ(c.indicator, labeling::Indicator::edit_distance);
}

TEST(Config, ParsesValuesAndComments) {
    const auto c = parse_config(
        "# comment\n\nugly_fraction = 0.2\nrepo = /a/x, /b/y\nindicator=revisions\nclassifiers = tree\n"
        "single_method_only = false\nfractions = 0.1,0.5\n");
    EXPECT_DOUBLE_EQ(c.ugly_fraction, 0.2);
    EXPECT_EQ(c.repos, (std::vector<std::string>{"/a/x", "/b/y"}));
    EXPECT_EQ(c.indicator, labeling::Indicator::revisions);
    EXPECT_EQ(c.classifiers, std::vector<ml::ClassifierKind>{ml::ClassifierKind::tree});
    EXPECT_FALSE(c.bug_rules.single_method_only);
    EXPECT_EQ(c.fractions, (std::vector<double>{0.1, 0.5}));
}

TEST(Config, ErrorsCarryLineNumbers) {
    auto expect = [](const std::string& text, ErrorCode code, int line) {
        try {
            (void)parse_config(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), code) << text;
            EXPECT_EQ(e.line(), line) << text;
        }
    };
    expect("ugly_fraction = -1\n", ErrorCode::type_mismatch, 1);
    expect("# c\nbogus = 1\n", ErrorCode::unknown_key, 2);
    expect("\n\ntheta = abc\n", ErrorCode::type_mismatch, 3);
    expect("seed = -4\n", ErrorCode::type_mismatch, 1);
    expect("indicator = churn\n", ErrorCode::type_mismatch, 1);
    expect("jobs = 0\n", ErrorCode::type_mismatch, 1);
    expect("no equals sign\n", ErrorCode::type_mismatch, 1);
    expect("window_years = inf\n", ErrorCode::type_mismatch, 1);
}

TEST(Config, RoundTripsLosslessly) {
    PipelineConfig c;
    c.repos = {"/r/one", "/r/two"};
    c.commit = "abc123";
    c.window_years = 2.5;
    c.indicator = labeling::Indicator::addition_only;
    c.ugly_fraction = 0.1 + 0.2;
    c.theta = 1.0 / 3.0;
    c.seed = 18446744073709551615ull;
    c.bug_rules.high_recall_keywords = {"oops"};
    c.bug_rules.single_method_only = false;
    c.fractions = {0.01, 0.3};
    c.top_n = 7;
    c.per_project_cap = 3;
    c.classifiers = {ml::ClassifierKind::forest, ml::ClassifierKind::logistic};
    c.out = "/tmp/out dir";
    c.jobs = 4;
    EXPECT_EQ(parse_config(write_config(c)), c);
    EXPECT_EQ(parse_config(write_config(PipelineConfig{})), PipelineConfig{});
}
