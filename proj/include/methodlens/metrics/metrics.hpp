#pragma once

#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "methodlens/java/extract.hpp"
#include "methodlens/metrics/body_walker.hpp"
#include "methodlens/metrics/halstead.hpp"
#include "methodlens/metrics/method_view.hpp"
#include "methodlens/metrics/metric_vector.hpp"
#include "methodlens/metrics/readability.hpp"

namespace methodlens::metrics {

using java::MethodDeclaration;

struct McClure {
    int nvar = 0;
    int ncomp = 0;
    friend bool operator==(const McClure&, const McClure&) = default;
};

struct Counts {
    int parameters = 0;
    int variables = 0;
    int comment_lines = 0;
    double comment_ratio = 0.0;
};

// ---------------------------------------------------------------------------
// View-based implementations. The declaration-based entry points below
// tokenize once per call; compute_metric_vector shares a single view.

[[nodiscard]] inline int size_of(const MethodView& v) {
    int n = 0;
    for (bool code : v.code_line) n += code ? 1 : 0;
    return n;
}

[[nodiscard]] inline int comment_lines_of(const MethodView& v) {
    int n = 0;
    for (bool c : v.comment_line) n += c ? 1 : 0;
    return n;
}

[[nodiscard]] inline int mccabe_of(const MethodView& v, const BodyWalker::Result& walk) {
    const auto& b = v.body;
    std::set<std::size_t> do_whiles(walk.do_while_tokens.begin(), walk.do_while_tokens.end());
    int predicates = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Token& t = b[i];
        if (t.kind == TokenKind::keyword) {
            const auto& w = t.text;
            if (w == "if" || w == "for" || w == "do" || w == "case" || w == "catch") ++predicates;
            if (w == "while" && !do_whiles.count(i)) ++predicates;
        } else if (t.kind == TokenKind::op) {
            if (t.text == "&&" || t.text == "||") ++predicates;
            if (t.text == "?" && !is_wildcard(b, i)) ++predicates;
        }
    }
    return 1 + predicates;
}

namespace detail {

inline bool is_assignment_op(const Token& t) {
    if (t.kind != TokenKind::op) return false;
    static constexpr std::string_view ops[] = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                               "&=", "|=", "^=", "<<=", ">>=", ">>>="};
    for (auto o : ops) {
        if (t.text == o) return true;
    }
    return false;
}

// Half-open range of the condition operand of the ternary whose '?' is at q.
inline std::pair<std::size_t, std::size_t> ternary_condition(const std::vector<Token>& b, std::size_t q) {
    int depth = 0;
    std::size_t k = q;
    while (k > 0) {
        const Token& t = b[k - 1];
        if (t.is_sep(")") || t.is_sep("]") || t.is_sep("}")) {
            ++depth;
        } else if (t.is_sep("(") || t.is_sep("[") || t.is_sep("{")) {
            if (depth == 0) break;
            --depth;
        } else if (depth == 0) {
            if (t.is_sep(",") || t.is_sep(";") || is_assignment_op(t) || t.is_op("->") || t.is_op(":") ||
                t.is_op("?") || t.is_keyword("return") || t.is_keyword("throw") || t.is_keyword("case") ||
                t.is_keyword("assert")) {
                break;
            }
        }
        --k;
    }
    return {k, q};
}

}  // namespace detail

[[nodiscard]] inline McClure mcclure_of(const MethodView& v, const BodyWalker::Result& walk) {
    const auto& b = v.body;
    std::vector<bool> in_predicate(b.size(), false);
    auto mark = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to && i < b.size(); ++i) in_predicate[i] = true;
    };
    for (const auto& [from, to] : walk.predicates) mark(from, to);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].is_op("?") && !v.generic[i] && !is_wildcard(b, i)) {
            const auto [from, to] = detail::ternary_condition(b, i);
            mark(from, to);
        }
    }

    McClure m;
    std::set<std::string> variables;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!in_predicate[i]) continue;
        const Token& t = b[i];
        if (t.is_keyword("instanceof")) {
            ++m.ncomp;
            // The tested type (and an optional pattern binding) are not control variables.
            std::size_t k = i + 1;
            if (k < b.size() && b[k].is_keyword("final")) ++k;
            if (k < b.size() && (b[k].is_identifier() || b[k].kind == TokenKind::keyword)) ++k;
            while (k < b.size()) {
                if (b[k].is_sep(".") && k + 1 < b.size() && b[k + 1].is_identifier()) {
                    k += 2;
                } else if (v.generic[k] && b[k].is_op("<")) {
                    const auto close = java::generic_close(b, k);
                    k = close ? *close + 1 : k + 1;
                } else if (b[k].is_sep("[") && k + 1 < b.size() && b[k + 1].is_sep("]")) {
                    k += 2;
                } else {
                    break;
                }
            }
            if (k < b.size() && b[k].is_identifier()) ++k;  // pattern binding
            i = k - 1;
            continue;
        }
        if (t.kind == TokenKind::op && !v.generic[i]) {
            if (t.text == "==" || t.text == "!=" || t.text == "<" || t.text == "<=" || t.text == ">" ||
                t.text == ">=") {
                ++m.ncomp;
            }
        }
        if (t.is_identifier() && !is_invocation(b, v.generic, i)) variables.insert(t.text);
    }
    m.nvar = static_cast<int>(variables.size());
    return m;
}

[[nodiscard]] inline double indent_std_of(const MethodView& v) {
    std::vector<double> widths;
    for (auto line : v.lines) {
        if (!is_blank(line)) widths.push_back(indentation_width(line));
    }
    if (widths.empty()) return 0.0;
    double mean = 0.0;
    for (double w : widths) mean += w;
    mean /= static_cast<double>(widths.size());
    double var = 0.0;
    for (double w : widths) var += (w - mean) * (w - mean);
    var /= static_cast<double>(widths.size());
    return std::sqrt(var);
}

[[nodiscard]] inline int fanout_of(const MethodView& v) {
    std::set<std::string> called;
    for (std::size_t i = 0; i < v.body.size(); ++i) {
        if (is_invocation(v.body, v.generic, i) && !is_constructor_call(v.body, i)) called.insert(v.body[i].text);
    }
    return static_cast<int>(called.size());
}

[[nodiscard]] inline HalsteadCounts halstead_of(const MethodView& v) {
    return halstead_counts(halstead_tally(v.body, v.generic));
}

/// Single-statement getter (get*/is*, no parameters, `return expr;`) or
/// setter (set*, one parameter, `target = expr;`).
[[nodiscard]] inline bool getter_setter_of(const MethodDeclaration& decl, const MethodView& v) {
    const auto& b = v.body;
    if (b.size() < 4) return false;  // '{' stmt ';' '}'
    const std::size_t first = 1;
    const std::size_t last = b.size() - 2;  // expected ';'
    if (!b[last].is_sep(";")) return false;
    int depth = 0;
    int assignments = 0;
    for (std::size_t i = first; i < last; ++i) {
        const Token& t = b[i];
        if (t.is_sep("(") || t.is_sep("{") || t.is_sep("[")) ++depth;
        else if (t.is_sep(")") || t.is_sep("}") || t.is_sep("]")) --depth;
        else if (depth == 0 && t.is_sep(";")) return false;
        else if (depth == 0 && t.is_op("=")) ++assignments;
    }
    const std::string_view name = decl.name;
    const bool getter_name = name.rfind("get", 0) == 0 || name.rfind("is", 0) == 0;
    if (getter_name && decl.arity() == 0 && b[first].is_keyword("return") && last > first + 1) return true;
    if (name.rfind("set", 0) == 0 && decl.arity() == 1 && assignments == 1 &&
        (b[first].is_identifier() || b[first].is_keyword("this"))) {
        std::vector<bool> generic = java::generic_bracket_mask(b);
        // `Type x = v;` is a declaration, not an assignment.
        const bool declaration = b[first + 1].is_identifier() || (generic[first + 1] && b[first + 1].is_op("<"));
        return !declaration;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Declaration-based API.

/// Lines of the declaration that hold at least one non-comment token.
[[nodiscard]] inline int compute_size(const MethodDeclaration& decl) { return size_of(MethodView(decl)); }

/// 1 + predicates (if, for, while, do, case, catch, ternary '?', '&&', '||').
/// `default:` is not a predicate, and a do-while counts once.
[[nodiscard]] inline int compute_mccabe(const MethodDeclaration& decl) {
    MethodView v(decl);
    return mccabe_of(v, BodyWalker(v.body, v.generic).run());
}

[[nodiscard]] inline McClure compute_mcclure(const MethodDeclaration& decl) {
    MethodView v(decl);
    return mcclure_of(v, BodyWalker(v.body, v.generic).run());
}

/// Population standard deviation of indentation (tab = 4) over non-blank lines.
[[nodiscard]] inline double compute_indent_std(const MethodDeclaration& decl) { return indent_std_of(MethodView(decl)); }

[[nodiscard]] inline int compute_max_block_depth(const MethodDeclaration& decl) {
    MethodView v(decl);
    return BodyWalker(v.body, v.generic).run().max_depth;
}

[[nodiscard]] inline int compute_fanout(const MethodDeclaration& decl) { return fanout_of(MethodView(decl)); }

[[nodiscard]] inline HalsteadCounts compute_halstead(const MethodDeclaration& decl) {
    return halstead_of(MethodView(decl));
}

/// Classic unnormalized maintainability index.
[[nodiscard]] inline double compute_maintainability_index(int size, int mccabe, const HalsteadCounts& halstead) {
    return 171.0 - 5.2 * std::log(std::max(halstead.volume, 1.0)) - 0.23 * static_cast<double>(mccabe) -
           16.2 * std::log(static_cast<double>(std::max(size, 1)));
}

[[nodiscard]] inline double compute_readability_buse(const MethodDeclaration& decl) {
    return readability_score(readability_features(MethodView(decl)));
}

[[nodiscard]] inline double compute_readability_posnett(const MethodDeclaration& decl, const HalsteadCounts& halstead) {
    return posnett_score(halstead.volume, static_cast<int>(java::split_lines(decl.body_text).size()),
                         byte_entropy(decl.body_text));
}

[[nodiscard]] inline Counts compute_counts(const MethodDeclaration& decl) {
    MethodView v(decl);
    Counts c;
    c.parameters = static_cast<int>(decl.arity());
    c.variables = BodyWalker(v.body, v.generic).run().variables;
    c.comment_lines = comment_lines_of(v);
    const int size = size_of(v);
    c.comment_ratio = size > 0 ? static_cast<double>(c.comment_lines) / static_cast<double>(size) : 0.0;
    return c;
}

[[nodiscard]] inline bool detect_getter_setter(const MethodDeclaration& decl) {
    return getter_setter_of(decl, MethodView(decl));
}

/// All 17 metrics from one tokenization of the declaration. Throws
/// Error(lexical_error) when the body text cannot be tokenized.
[[nodiscard]] inline MetricVector compute_metric_vector(const MethodDeclaration& decl) {
    const MethodView v(decl);
    const auto walk = BodyWalker(v.body, v.generic).run();
    const auto halstead = halstead_of(v);
    const auto mcclure = mcclure_of(v, walk);

    MetricVector m;
    m.size = size_of(v);
    m.mccabe = mccabe_of(v, walk);
    m.nvar = mcclure.nvar;
    m.ncomp = mcclure.ncomp;
    m.indent_std = indent_std_of(v);
    m.max_block_depth = walk.max_depth;
    m.fanout = fanout_of(v);
    m.halstead_length = halstead.length;
    m.maintainability_index = compute_maintainability_index(m.size, m.mccabe, halstead);
    m.readability = readability_score(readability_features(v));
    m.simple_readability =
        posnett_score(halstead.volume, static_cast<int>(v.lines.size()), byte_entropy(decl.body_text));
    m.parameters = static_cast<int>(decl.arity());
    m.variables = walk.variables;
    const int comments = comment_lines_of(v);
    m.comment_ratio = m.size > 0 ? static_cast<double>(comments) / static_cast<double>(m.size) : 0.0;
    m.getter_setter = getter_setter_of(decl, v);
    m.is_public = decl.modifiers.has(java::Modifier::public_);
    m.is_static = decl.modifiers.has(java::Modifier::static_);
    return m;
}

}  // namespace methodlens::metrics
