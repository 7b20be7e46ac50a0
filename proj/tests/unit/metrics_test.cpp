#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "methodlens/java/extract.hpp"
#include "methodlens/metrics/metrics.hpp"

using namespace methodlens;
using namespace methodlens::metrics;

namespace {

java::MethodDeclaration method(const std::string& member) {
    const auto ms = java::extract_methods(java::SourceFile("A.java", "class A {\n" + member + "\n}\n"));
    if (ms.size() != 1) throw std::runtime_error("expected one method");
    return ms[0];
}

}  // namespace

TEST(Size, GetterIsThreeLines) { EXPECT_EQ(compute_size(method("int getX() {\n  return x;\n}")), 3); }

TEST(Size, BlankBodyCountsHeaderAndBrace) { EXPECT_EQ(compute_size(method("void f() {\n\n\n}")), 2); }

TEST(Size, CommentLinesIgnored) {
    EXPECT_EQ(compute_size(method("int getX() {\n  // note\n  return x;\n}")), 3);
}

TEST(McCabe, EmptyBody) { EXPECT_EQ(compute_mccabe(method("void f() {}")), 1); }

TEST(McCabe, IfWithConjunction) { EXPECT_EQ(compute_mccabe(method("void f() { if (a && b) g(); }")), 3); }

TEST(McCabe, SwitchDefaultNotCounted) {
    EXPECT_EQ(compute_mccabe(method("void f(int x) {\n switch (x) { case 1: a(); break; case 2: b(); break; "
                                    "case 3: c(); break; default: d(); }\n}")),
              4);
}

TEST(McCabe, LoopsCatchTernary) {
    EXPECT_EQ(compute_mccabe(method("int f(int[] xs) {\n for (int x : xs) { while (x > 0) x--; }\n"
                                    " do { g(); } while (h());\n try { g(); } catch (Exception e) { }\n"
                                    " return xs.length > 0 ? 1 : 0;\n}")),
              1 + 1 + 1 + 1 + 1 + 1);
}

TEST(McCabe, WildcardQuestionMarkNotAPredicate) {
    EXPECT_EQ(compute_mccabe(method("void f() { List<? extends T> a = null; }")), 1);
}

TEST(McClure, NoConditionals) {
    const auto m = compute_mcclure(method("void f() { x = 1; }"));
    EXPECT_EQ(m.nvar, 0);
    EXPECT_EQ(m.ncomp, 0);
}

TEST(McClure, RangeCheck) {
    const auto m = compute_mcclure(method("void f() { if (x > 0 && x < n) g(); }"));
    EXPECT_EQ(m.nvar, 2);
    EXPECT_EQ(m.ncomp, 2);
}

TEST(McClure, WhileFlag) {
    const auto m = compute_mcclure(method("void f() { while (flag) step(); }"));
    EXPECT_EQ(m.nvar, 1);
    EXPECT_EQ(m.ncomp, 0);
}

TEST(McClure, InstanceofForConditionAndTernary) {
    const auto m = compute_mcclure(method(
        "int f(Object o) {\n if (o instanceof String s && s.isEmpty()) return 0;\n"
        " for (int i = 0; i <= k; i++) { }\n return a == b ? c : d;\n}"));
    // if: o, s (call name excluded); for: i, k; ternary: a, b
    EXPECT_EQ(m.nvar, 6);
    EXPECT_EQ(m.ncomp, 3);
}

TEST(IndentStd, Uniform) { EXPECT_DOUBLE_EQ(compute_indent_std(method("void f() { a(); }")), 0.0); }

TEST(IndentStd, ClosedForm) {
    // widths [0,4,4,0]
    EXPECT_DOUBLE_EQ(compute_indent_std(method("void f() {\n    a();\n    b();\n}")), 2.0);
}

TEST(IndentStd, TabsEqualFourSpaces) {
    EXPECT_DOUBLE_EQ(compute_indent_std(method("void f() {\n\ta();\n\t\tb();\n}")),
                     compute_indent_std(method("void f() {\n    a();\n        b();\n}")));
}

TEST(BlockDepth, StraightLine) { EXPECT_EQ(compute_max_block_depth(method("void f() { a(); b(); }")), 0); }

TEST(BlockDepth, IfInsideFor) {
    EXPECT_EQ(compute_max_block_depth(method("void f() { for (;;) { if (x) { a(); } } }")), 2);
}

TEST(BlockDepth, BracelessBodies) {
    EXPECT_EQ(compute_max_block_depth(method("void f() { for (;;) if (x) a(); }")), 2);
}

TEST(BlockDepth, TryCatchTopLevel) {
    EXPECT_EQ(compute_max_block_depth(method("void f() { try { a(); } catch (E e) { b(); } finally { c(); } }")), 1);
}

TEST(BlockDepth, ElseIfChainStaysFlat) {
    EXPECT_EQ(compute_max_block_depth(method("void f() { if (a) { x(); } else if (b) { y(); } else { z(); } }")), 1);
}

TEST(Fanout, NoCalls) { EXPECT_EQ(compute_fanout(method("int f() { return x + 1; }")), 0); }

TEST(Fanout, DistinctNames) { EXPECT_EQ(compute_fanout(method("void f() { a.foo(); b.foo(); bar(); }")), 2); }

TEST(Fanout, RecursiveSelfCall) { EXPECT_EQ(compute_fanout(method("int f(int n) { return f(n - 1); }")), 1); }

TEST(Fanout, ConstructorCallsExcluded) {
    EXPECT_EQ(compute_fanout(method("void f() { Object o = new Object(); o.hashCode(); }")), 1);
}

TEST(Halstead, BareReturn) {
    const auto h = compute_halstead(method("void f() { return; }"));
    EXPECT_EQ(h.total_operators, 2);
    EXPECT_EQ(h.total_operands, 0);
    EXPECT_EQ(h.length, 2);
}

TEST(Halstead, ReturnVariable) {
    const auto h = compute_halstead(method("int f() { return x; }"));
    EXPECT_EQ(h.length, 3);
    EXPECT_EQ(h.distinct_operators, 2);
    EXPECT_EQ(h.distinct_operands, 1);
    EXPECT_DOUBLE_EQ(h.volume, 3 * std::log2(3.0));
}

TEST(Halstead, EmptyVolume) { EXPECT_DOUBLE_EQ(halstead_volume(0, 0), 0.0); }

TEST(Halstead, CallCountsAsOneOperator) {
    // {} , foo() , ; ignored , a operand
    const auto h = compute_halstead(method("void f() { foo(a); }"));
    EXPECT_EQ(h.total_operators, 2);
    EXPECT_EQ(h.total_operands, 1);
}

TEST(MaintainabilityIndex, LogTermsVanish) {
    HalsteadCounts h;
    h.volume = 1.0;
    EXPECT_NEAR(compute_maintainability_index(1, 1, h), 170.77, 1e-12);
}

TEST(MaintainabilityIndex, DirectEvaluation) {
    HalsteadCounts h;
    h.volume = 100.0;
    EXPECT_NEAR(compute_maintainability_index(20, 5, h), 97.37, 0.01);
}

TEST(MaintainabilityIndex, DecreasesWithSize) {
    HalsteadCounts h;
    h.volume = 50.0;
    double previous = compute_maintainability_index(1, 3, h);
    for (int size = 2; size < 200; ++size) {
        const double mi = compute_maintainability_index(size, 3, h);
        EXPECT_LT(mi, previous);
        previous = mi;
    }
}

TEST(Readability, RangeAndLineLengthMonotonicity) {
    const auto short_lines = method("void f() {\n  int a = b;\n  c(a);\n}");
    const auto long_lines = method("void f() {\n  int a = b;            \n  c(a);                 \n}");
    const double s = compute_readability_buse(short_lines);
    const double l = compute_readability_buse(long_lines);
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
    EXPECT_LT(l, s);
}

TEST(Readability, CommentsDoNotHurt) {
    const auto plain = method("void f() {\n  a();\n  b();\n}");
    const auto commented = method("void f() {\n  a();\n  //\n  b();\n}");
    EXPECT_GE(compute_readability_buse(commented), compute_readability_buse(plain));
}

TEST(Posnett, RangeAndVolumeMonotonicity) {
    EXPECT_GT(posnett_score(2e4, 3, 4.0), 0.0);
    EXPECT_GE(posnett_score(1e6, 3, 4.0), 0.0);
    EXPECT_LT(posnett_score(0.0, 3, 0.0), 1.0);
    EXPECT_LT(posnett_score(200, 5, 3.0), posnett_score(100, 5, 3.0));
    EXPECT_DOUBLE_EQ(byte_entropy("x"), 0.0);
}

TEST(Counts, DeclaratorsAndCommentRatio) {
    const auto c = compute_counts(method("void f(int p) {\n  // one\n  int a, b;\n  // two\n  use(a, b);\n}"));
    EXPECT_EQ(c.parameters, 1);
    EXPECT_EQ(c.variables, 2);
    EXPECT_DOUBLE_EQ(c.comment_ratio, 0.5);  // 2 comment lines over size 4
}

TEST(Counts, ForInitResourcesAndExclusions) {
    const auto c = compute_counts(method(
        "void f() {\n  for (int i = 0, j = 1; i < j; i++) { }\n  for (String s : xs) { }\n"
        "  try (Reader r = open()) { } catch (IOException e) { }\n  xs.forEach(x -> use(x));\n"
        "  int[] arr = {1, 2}; final var v = cond ? a : b;\n}"));
    EXPECT_EQ(c.parameters, 0);
    EXPECT_EQ(c.variables, 6);
}

TEST(GetterSetter, Rules) {
    EXPECT_TRUE(detect_getter_setter(method("int getX(){ return x; }")));
    EXPECT_FALSE(detect_getter_setter(method("void setX(int v){ x=v; log(); }")));
    EXPECT_TRUE(detect_getter_setter(method("boolean isEmpty(){ return size==0; }")));
    EXPECT_TRUE(detect_getter_setter(method("void setX(int v){ this.x = v; }")));
    EXPECT_FALSE(detect_getter_setter(method("int getX(int i){ return x; }")));
    EXPECT_FALSE(detect_getter_setter(method("int compute(){ return x; }")));
}

TEST(MetricVectorTest, CanonicalGetter) {
    const auto v = compute_metric_vector(method("public int getX() {\n  return x;\n}"));
    EXPECT_EQ(v.size, 3);
    EXPECT_EQ(v.mccabe, 1);
    EXPECT_TRUE(v.getter_setter);
    EXPECT_TRUE(v.is_public);
    EXPECT_FALSE(v.is_static);
}

TEST(MetricVectorTest, PathIndependentAndDeterministic) {
    const std::string text = "class A {\n  static int f(int a) {\n    if (a > 1) return a * f(a - 1);\n    return 1;\n  }\n}\n";
    const auto a = java::extract_methods(java::SourceFile("x/A.java", text)).at(0);
    const auto b = java::extract_methods(java::SourceFile("y/z/B.java", text)).at(0);
    EXPECT_EQ(to_array(compute_metric_vector(a)), to_array(compute_metric_vector(b)));
}

TEST(MetricVectorTest, TrailingCommentOnlyMovesCommentSensitiveFields) {
    const auto base = compute_metric_vector(method("int f(int a) {\n  if (a > 0) return g(a);\n  return 0;\n}"));
    const auto more = compute_metric_vector(method("int f(int a) {\n  if (a > 0) return g(a);\n  return 0;\n  // done\n}"));
    EXPECT_EQ(base.size, more.size);
    EXPECT_EQ(base.mccabe, more.mccabe);
    EXPECT_EQ(base.nvar, more.nvar);
    EXPECT_EQ(base.ncomp, more.ncomp);
    EXPECT_EQ(base.fanout, more.fanout);
    EXPECT_EQ(base.halstead_length, more.halstead_length);
    EXPECT_EQ(base.parameters, more.parameters);
    EXPECT_EQ(base.variables, more.variables);
    EXPECT_GT(more.comment_ratio, base.comment_ratio);
}
