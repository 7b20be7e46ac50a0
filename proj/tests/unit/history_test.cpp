#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "methodlens/history/git_repository.hpp"
#include "methodlens/history/levenshtein.hpp"
#include "methodlens/history/line_diff.hpp"
#include "methodlens/history/tracer.hpp"
#include "methodlens/java/extract.hpp"
#include "../support/fixture_repo.hpp"

using namespace methodlens;
using namespace methodlens::history;

namespace {

std::vector<java::MethodDeclaration> methods_of(const std::string& body) {
    return java::extract_methods(java::SourceFile("A.java", "class A {\n" + body + "\n}\n"));
}

Revision revision_at(double days, int added, int deleted, long edit) {
    Revision r;
    r.days_since_introduction = days;
    r.lines_added = added;
    r.lines_deleted = deleted;
    r.edit_distance = edit;
    return r;
}

}  // namespace

TEST(Levenshtein, Examples) {
    EXPECT_EQ(levenshtein("abc", "abc"), 0u);
    EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
    EXPECT_EQ(levenshtein("", "hello"), 5u);
    EXPECT_EQ(levenshtein("hello", ""), 5u);
    EXPECT_DOUBLE_EQ(similarity("", ""), 1.0);
    EXPECT_DOUBLE_EQ(similarity("ab", "cd"), 0.0);
}

TEST(LineDiff, Examples) {
    EXPECT_EQ(line_diff("a\nb", "a\nb"), (LineDiff{0, 0}));
    EXPECT_EQ(line_diff("a\nb", "a\nb\nc"), (LineDiff{1, 0}));
    EXPECT_EQ(line_diff("a\nb\nc", "a\nB\nc"), (LineDiff{1, 1}));
    EXPECT_EQ(line_diff("", "x"), (LineDiff{1, 0}));
}

TEST(MatchMethod, ExactSignatureWins) {
    const auto prev = methods_of("  int f(int a) {\n    return a;\n  }\n  int g(int a) {\n    return a;\n  }");
    const auto now = methods_of("  int g(int a) {\n    return a + 1;\n  }");
    const auto m = match_method(prev, now[0], 0.75);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->name, "g");
}

TEST(MatchMethod, RenamedWithSameBodyMatches) {
    const auto prev = methods_of("  int computeTotalValue(int a, int b) {\n    return a * 31 + b * 17 + 5;\n  }");
    const auto now = methods_of("  int totalValue(int a, int b) {\n    return a * 31 + b * 17 + 5;\n  }");
    const auto m = match_method(prev, now[0], 0.75);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->name, "computeTotalValue");
    EXPECT_DOUBLE_EQ(similarity(m->block_text(), now[0].block_text()), 1.0);
}

TEST(MatchMethod, SameNameDifferentParameters) {
    const auto prev = methods_of("  int scale(int a) {\n    return a * 1000 + offset;\n  }");
    const auto now = methods_of("  int scale(long a) {\n    return a * 1000 + offset;\n  }");
    const auto m = match_method(prev, now[0], 0.75);
    ASSERT_TRUE(m);
    EXPECT_EQ(java::signature(*m), "A#scale(int)");
}

TEST(MatchMethod, TinyDissimilarMethodsDoNotMatch) {
    const auto prev = methods_of("  int a() {\n    return 1; }");
    const auto now = methods_of("  int b() {\n    return 2; }");
    // Bodies "{\n    return 1; }" vs "{\n    return 2; }" are similar, but
    // tiny methods need identical names.
    EXPECT_FALSE(match_method(prev, now[0], 0.75));
    const auto other = methods_of("  int b() {\n    x = y; }");
    EXPECT_LT(similarity(prev[0].block_text(), other[0].block_text()), 0.75);
    EXPECT_FALSE(match_method(prev, other[0], 0.75));
}

TEST(MatchMethod, TiesGoToSmallerStartLine) {
    const auto prev = methods_of(
        "  void p1() {\n    doSomethingRatherLong(first, second, third);\n  }\n"
        "  void p2() {\n    doSomethingRatherLong(first, second, third);\n  }");
    const auto now = methods_of("  void p3() {\n    doSomethingRatherLong(first, second, third);\n  }");
    const auto m = match_method(prev, now[0], 0.75);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->name, "p1");
}

TEST(Indicators, EmptyHistory) {
    MethodHistory h;
    EXPECT_EQ(compute_indicators(h, TraceConfig{}), (ChangeIndicators{0, 0, 0, 0}));
}

TEST(Indicators, WindowExcludesLateRevision) {
    MethodHistory h;
    h.revisions = {revision_at(100, 1, 0, 5), revision_at(2000, 3, 3, 50)};
    const auto ind = compute_indicators(h, TraceConfig{});
    EXPECT_EQ(ind.revisions, 1);
    EXPECT_EQ(ind.edit_distance, 5);
}

TEST(Indicators, Summation) {
    MethodHistory h;
    h.revisions = {revision_at(10, 2, 1, 30), revision_at(20, 2, 1, 30)};
    EXPECT_EQ(compute_indicators(h, TraceConfig{}), (ChangeIndicators{2, 6, 4, 60}));
}

TEST(Indicators, BoundaryIsInclusive) {
    MethodHistory h;
    h.revisions = {revision_at(1826.25, 1, 0, 1)};
    EXPECT_EQ(compute_indicators(h, TraceConfig{}).revisions, 1);
}

TEST(Indicators, WindowMonotonicity) {
    std::mt19937 rng(3);
    TraceConfig five;
    TraceConfig forever;
    forever.window_years = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 200; ++round) {
        MethodHistory h;
        const int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) {
            h.revisions.push_back(revision_at(static_cast<double>(rng() % 4000), static_cast<int>(rng() % 5) + 1,
                                              static_cast<int>(rng() % 5), static_cast<long>(rng() % 90) + 1));
        }
        const auto a = compute_indicators(h, five);
        const auto b = compute_indicators(h, forever);
        EXPECT_LE(a.revisions, b.revisions);
        EXPECT_LE(a.diff_size, b.diff_size);
        EXPECT_LE(a.addition_only, b.addition_only);
        EXPECT_LE(a.edit_distance, b.edit_distance);
        EXPECT_LE(a.addition_only, a.diff_size);
    }
}

TEST(FilterByAge, ClosedBound) {
    const std::int64_t day = 86400;
    const std::int64_t snapshot = 4000 * day;
    auto make = [&](double age_days) {
        MethodHistory h;
        h.introduction.commit.author_time = snapshot - static_cast<std::int64_t>(age_days * day);
        return h;
    };
    const std::vector<MethodHistory> hs = {make(6 * 365.25), make(4 * 365.25), make(5 * 365.25)};
    const auto kept = filter_by_age(hs, snapshot, TraceConfig{});
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].introduction.commit.author_time, hs[0].introduction.commit.author_time);
    EXPECT_EQ(kept[1].introduction.commit.author_time, hs[2].introduction.commit.author_time);
}

TEST(TraceConfigTest, Validation) {
    TraceConfig c;
    c.similarity_threshold = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c.similarity_threshold = 1.0;
    EXPECT_NO_THROW(c.validate());
    c.window_years = -1;
    EXPECT_THROW(c.validate(), Error);
}

TEST(GitRepositoryTest, SingleCommitRepository) {
    testsupport::TempDir dir;
    testsupport::sh(dir.path(),
                    "git init -q -b master && mkdir -p src && printf 'class A {\\n  void f() {\\n  }\\n}\\n' > src/A.java "
                    "&& git add -A && git commit -q -m 'first'");
    GitRepository repo(dir.path().string());
    const auto chain = walk_first_parent(repo, "HEAD");
    ASSERT_EQ(chain.size(), 1u);
    EXPECT_FALSE(chain[0].first_parent_id);
    EXPECT_EQ(chain[0].message, "first");
    EXPECT_EQ(repo.list_files(chain[0].id), std::vector<std::string>{"src/A.java"});
    EXPECT_THROW((void)walk_first_parent(repo, "0123456789abcdef0123456789abcdef01234567"), Error);
    try {
        (void)repo.resolve("no-such-ref");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_commit);
    }

    TraceConfig cfg;
    cfg.snapshot_commit = chain[0].id;
    const auto h = trace_method(repo, MethodIdentity{"p", "src/A.java", "A#f()", 2}, cfg);
    EXPECT_TRUE(h.revisions.empty());
    EXPECT_EQ(h.introduction.commit.id, chain[0].id);
}

TEST(GitRepositoryTest, NotARepository) {
    testsupport::TempDir dir;
    try {
        GitRepository repo(dir.path().string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::repo_access);
    }
}

TEST(TracerTest, MissingMethodAtSnapshot) {
    const auto& fx = testsupport::fixture_repo();
    GitRepository repo(fx.repo);
    TraceConfig cfg;
    cfg.snapshot_commit = "HEAD";
    try {
        (void)trace_method(repo, MethodIdentity{"p", "src/p/Core.java", "Core#nope()", 1}, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::method_not_at_snapshot);
    }
}

TEST(TracerTest, FixtureChainHasElevenFirstParentCommits) {
    const auto& fx = testsupport::fixture_repo();
    GitRepository repo(fx.repo);
    const auto chain = walk_first_parent(repo, "HEAD");
    ASSERT_EQ(chain.size(), 11u);
    EXPECT_EQ(fx.ledger["totalCommits"].get<int>(), 12);
    for (std::size_t i = 0; i < chain.size(); ++i) EXPECT_EQ(chain[i].id, fx.ledger["firstParentChain"][i]);
}

TEST(TracerTest, ParallelTracingIsScheduleIndependent) {
    const auto& fx = testsupport::fixture_repo();
    GitRepository repo(fx.repo);
    TraceConfig cfg;
    cfg.snapshot_commit = "HEAD";
    Tracer tracer(repo, cfg, "fixture");
    std::vector<MethodIdentity> ids;
    for (const auto& path : {"src/p/Core.java", "src/p/util/Util.java"}) {
        for (const auto& m : *tracer.snapshot_methods(path)) {
            ids.push_back(MethodIdentity{"fixture", path, java::signature(m), m.start_line});
        }
    }
    const auto serial = tracer.trace_all(ids, 1);
    Tracer fresh(repo, cfg, "fixture");
    const auto parallel = fresh.trace_all(ids, 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].identity, parallel[i].identity);
        EXPECT_EQ(serial[i].revisions.size(), parallel[i].revisions.size());
        EXPECT_EQ(compute_indicators(serial[i], cfg), compute_indicators(parallel[i], cfg));
    }
}
