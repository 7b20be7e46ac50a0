#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "methodlens/java/token.hpp"
#include "methodlens/java/token_utils.hpp"

namespace methodlens::metrics {

using java::Token;
using java::TokenKind;

/// True when tokens[i] is a method name at a call site (`foo(`, `a.foo(`,
/// `new Foo(`, `this.<T>foo(`) rather than the name of a declaration such as
/// a method of an anonymous class.
[[nodiscard]] inline bool is_invocation(const std::vector<Token>& tokens, const std::vector<bool>& generic,
                                        std::size_t i) {
    if (!tokens[i].is_identifier() || i + 1 >= tokens.size() || !tokens[i + 1].is_sep("(")) return false;
    if (i == 0) return true;
    const Token& prev = tokens[i - 1];
    if (prev.is_identifier()) return prev.text == "yield";
    if (prev.kind == TokenKind::keyword && java::detail::is_primitive(prev.text)) return false;
    if (prev.is_sep("]")) return false;
    if (generic[i - 1] && java::angle_closers(prev) > 0) {
        // Explicit type arguments (`obj.<T>foo(`) versus a generic return type (`List<T> foo(`).
        int depth = 0;
        for (std::size_t k = i - 1;; --k) {
            if (generic[k]) {
                if (tokens[k].is_op("<")) ++depth;
                else depth -= java::angle_closers(tokens[k]);
                if (depth >= 0 && tokens[k].is_op("<")) {
                    return k > 0 && tokens[k - 1].is_sep(".");
                }
            }
            if (k == 0) break;
        }
        return false;
    }
    return true;
}

/// True when the invocation at i is a constructor call (`new Foo(`, `new a.b.Foo(`).
[[nodiscard]] inline bool is_constructor_call(const std::vector<Token>& tokens, std::size_t i) {
    std::size_t k = i;
    while (k >= 2 && tokens[k - 1].is_sep(".") && tokens[k - 2].is_identifier()) k -= 2;
    return k >= 1 && tokens[k - 1].is_keyword("new");
}

/// True when a '?' is a wildcard inside type arguments rather than a ternary.
[[nodiscard]] inline bool is_wildcard(const std::vector<Token>& tokens, std::size_t i) {
    if (i == 0 || i + 1 >= tokens.size()) return false;
    const Token& prev = tokens[i - 1];
    const Token& next = tokens[i + 1];
    const bool prev_ok = prev.is_op("<") || prev.is_sep(",");
    const bool next_ok = java::angle_closers(next) > 0 || next.is_keyword("extends") || next.is_keyword("super") ||
                         next.is_sep(",");
    return prev_ok && next_ok;
}

/// Statement-level walk over a method body (outer braces included).
///
/// Collects the nesting depth of control-structure blocks, the number of
/// local-variable declarators, the token ranges of predicate expressions and
/// the `while` tokens that close do-while loops.
class BodyWalker {
public:
    struct Result {
        int max_depth = 0;
        int variables = 0;
        std::vector<std::pair<std::size_t, std::size_t>> predicates;  ///< half-open token ranges
        std::vector<std::size_t> do_while_tokens;
    };

    BodyWalker(const std::vector<Token>& tokens, const std::vector<bool>& generic)
        : t_(tokens), generic_(generic), n_(tokens.size()) {}

    Result run() {
        std::size_t i = 0;
        if (n_ > 0 && t_[0].is_sep("{")) block(i, 0);
        std::sort(r_.predicates.begin(), r_.predicates.end());
        return r_;
    }

private:
    const std::vector<Token>& t_;
    const std::vector<bool>& generic_;
    std::size_t n_;
    Result r_;

    bool at(std::size_t i, std::string_view sep) const { return i < n_ && t_[i].is_sep(sep); }
    bool kw(std::size_t i, std::string_view word) const { return i < n_ && t_[i].is_keyword(word); }

    std::size_t close_of(std::size_t open) const {
        auto c = java::find_matching(t_, open);
        return c ? *c : n_;
    }

    void block(std::size_t& i, int depth) {
        ++i;  // '{'
        while (i < n_ && !t_[i].is_sep("}")) statement(i, depth);
        if (i < n_) ++i;  // '}'
    }

    void control_body(std::size_t& i, int depth) {
        r_.max_depth = std::max(r_.max_depth, depth);
        statement(i, depth);
    }

    // Skips a parenthesised header at i; optionally records its contents as a predicate.
    void parens(std::size_t& i, bool predicate) {
        if (!at(i, "(")) return;
        const std::size_t close = close_of(i);
        if (predicate && close > i + 1) r_.predicates.emplace_back(i + 1, std::min(close, n_));
        i = std::min(close + 1, n_);
    }

    void statement(std::size_t& i, int depth) {
        if (i >= n_) return;
        const Token& tok = t_[i];
        if (tok.is_sep("{")) {
            block(i, depth);
            return;
        }
        if (tok.is_sep(";")) {
            ++i;
            return;
        }
        if (tok.kind == TokenKind::keyword) {
            const auto& w = tok.text;
            if (w == "if") {
                ++i;
                parens(i, true);
                control_body(i, depth + 1);
                if (kw(i, "else")) {
                    ++i;
                    if (kw(i, "if")) statement(i, depth);
                    else control_body(i, depth + 1);
                }
                return;
            }
            if (w == "while") {
                ++i;
                parens(i, true);
                control_body(i, depth + 1);
                return;
            }
            if (w == "do") {
                ++i;
                control_body(i, depth + 1);
                if (kw(i, "while")) {
                    r_.do_while_tokens.push_back(i);
                    ++i;
                    parens(i, true);
                }
                if (at(i, ";")) ++i;
                return;
            }
            if (w == "for") {
                ++i;
                for_header(i);
                control_body(i, depth + 1);
                return;
            }
            if (w == "switch") {
                ++i;
                parens(i, true);
                r_.max_depth = std::max(r_.max_depth, depth + 1);
                if (at(i, "{")) block(i, depth + 1);
                return;
            }
            if (w == "synchronized") {
                ++i;
                parens(i, false);
                control_body(i, depth + 1);
                return;
            }
            if (w == "try") {
                ++i;
                if (at(i, "(")) try_resources(i);
                control_body(i, depth + 1);
                while (kw(i, "catch")) {
                    ++i;
                    parens(i, false);
                    control_body(i, depth + 1);
                }
                if (kw(i, "finally")) {
                    ++i;
                    control_body(i, depth + 1);
                }
                return;
            }
            if (w == "case") {
                skip_case_label(i);
                return;
            }
            if (w == "default" && i + 1 < n_ && (t_[i + 1].is_op(":") || t_[i + 1].is_op("->"))) {
                i += 2;
                return;
            }
            if (w == "class" || w == "interface" || w == "enum" ||
                ((w == "final" || w == "abstract" || w == "static") && local_type_follows(i))) {
                local_type(i, depth);
                return;
            }
        }
        if (tok.is_identifier() && i + 1 < n_ && t_[i + 1].is_op(":")) {  // label
            i += 2;
            return;
        }
        if (tok.is_identifier() && tok.text == "record" && i + 2 < n_ && t_[i + 1].is_identifier() &&
            (t_[i + 2].is_sep("(") || t_[i + 2].is_op("<"))) {
            local_type(i, depth);
            return;
        }
        if (const auto type_end = declaration_type_end(i)) {
            r_.variables += count_declarators(*type_end, n_);
        }
        expression(i, depth);
    }

    bool local_type_follows(std::size_t i) const {
        while (i < n_ && (t_[i].is_keyword("final") || t_[i].is_keyword("abstract") || t_[i].is_keyword("static"))) ++i;
        return kw(i, "class") || kw(i, "interface") || kw(i, "enum");
    }

    void local_type(std::size_t& i, int depth) {
        while (i < n_ && !t_[i].is_sep("{")) ++i;
        if (i < n_) block(i, depth);
    }

    void skip_case_label(std::size_t& i) {
        ++i;
        int paren = 0;
        while (i < n_) {
            const Token& t = t_[i];
            if (t.is_sep("(")) ++paren;
            if (t.is_sep(")")) --paren;
            if (paren == 0 && (t.is_op(":") || t.is_op("->"))) {
                ++i;
                return;
            }
            if (t.is_sep("{") || t.is_sep("}") || t.is_sep(";")) return;
            ++i;
        }
    }

    void for_header(std::size_t& i) {
        if (!at(i, "(")) return;
        const std::size_t open = i;
        const std::size_t close = close_of(open);
        std::vector<std::size_t> semis;
        int depth = 0;
        for (std::size_t k = open + 1; k < close; ++k) {
            if (t_[k].is_sep("(") || t_[k].is_sep("{") || t_[k].is_sep("[")) ++depth;
            if (t_[k].is_sep(")") || t_[k].is_sep("}") || t_[k].is_sep("]")) --depth;
            if (depth == 0 && t_[k].is_sep(";")) semis.push_back(k);
        }
        if (semis.size() >= 2) {
            if (const auto type_end = declaration_type_end(open + 1); type_end && *type_end < semis[0]) {
                r_.variables += count_declarators(*type_end, semis[0]);
            }
            if (semis[1] > semis[0] + 1) r_.predicates.emplace_back(semis[0] + 1, semis[1]);
        } else if (const auto type_end = declaration_type_end(open + 1); type_end && *type_end < close) {
            r_.variables += 1;  // enhanced for
        }
        i = std::min(close + 1, n_);
    }

    void try_resources(std::size_t& i) {
        const std::size_t open = i;
        const std::size_t close = close_of(open);
        std::size_t start = open + 1;
        int depth = 0;
        for (std::size_t k = open + 1; k <= close && k < n_; ++k) {
            if (k < close && (t_[k].is_sep("(") || t_[k].is_sep("{") || t_[k].is_sep("["))) ++depth;
            if (k < close && (t_[k].is_sep(")") || t_[k].is_sep("}") || t_[k].is_sep("]"))) --depth;
            if (k == close || (depth == 0 && t_[k].is_sep(";"))) {
                if (start < k) {
                    if (const auto type_end = declaration_type_end(start); type_end && *type_end < k) ++r_.variables;
                }
                start = k + 1;
            }
        }
        i = std::min(close + 1, n_);
    }

    // Expression or declaration statement: runs to ';' (consumed) or an
    // unmatched '}' (left for the enclosing block).
    void expression(std::size_t& i, int depth) {
        int paren = 0;
        while (i < n_) {
            const Token& t = t_[i];
            if (t.is_sep("{")) {
                block(i, depth);
                continue;
            }
            if (t.is_sep("}")) return;
            if (t.is_sep(";") && paren <= 0) {
                ++i;
                return;
            }
            if (t.is_keyword("switch") && i + 1 < n_ && t_[i + 1].is_sep("(")) {
                ++i;
                parens(i, true);
                r_.max_depth = std::max(r_.max_depth, depth + 1);
                if (at(i, "{")) block(i, depth + 1);
                continue;
            }
            if (t.is_sep("(")) ++paren;
            if (t.is_sep(")")) --paren;
            ++i;
        }
    }

    // If a local-variable declaration starts at i, returns the index of the
    // first declarator name.
    std::optional<std::size_t> declaration_type_end(std::size_t i) const {
        std::size_t j = i;
        while (j < n_) {
            if (t_[j].is_keyword("final")) {
                ++j;
            } else if (t_[j].is_sep("@")) {
                ++j;
                while (j < n_ && (t_[j].is_identifier() || t_[j].is_sep("."))) ++j;
                if (at(j, "(")) j = close_of(j) + 1;
            } else {
                break;
            }
        }
        if (j >= n_) return std::nullopt;
        const Token& first = t_[j];
        if (first.kind == TokenKind::keyword) {
            if (!java::detail::is_primitive(first.text) || first.text == "void") return std::nullopt;
            ++j;
        } else if (first.is_identifier()) {
            if (first.text == "yield") return std::nullopt;
            ++j;
            while (j < n_) {
                if (generic_[j] && t_[j].is_op("<")) {
                    auto close = java::generic_close(t_, j);
                    if (!close) return std::nullopt;
                    j = *close + 1;
                } else if (at(j, ".") && j + 1 < n_ && t_[j + 1].is_identifier()) {
                    j += 2;
                } else {
                    break;
                }
            }
        } else {
            return std::nullopt;
        }
        while (at(j, "[") && at(j + 1, "]")) j += 2;
        if (j + 1 >= n_ || !t_[j].is_identifier()) return std::nullopt;
        const Token& after = t_[j + 1];
        if (after.is_op("=") || after.is_sep(",") || after.is_sep(";") || after.is_sep("[") || after.is_op(":")) {
            return j;
        }
        return std::nullopt;
    }

    // Declarators from `name` up to `limit`: depth-0 commas plus one.
    int count_declarators(std::size_t name, std::size_t limit) const {
        int count = 1;
        int depth = 0;
        for (std::size_t k = name; k < limit && k < n_; ++k) {
            const Token& t = t_[k];
            if (t.is_sep("(") || t.is_sep("{") || t.is_sep("[")) ++depth;
            else if (t.is_sep(")") || t.is_sep("}") || t.is_sep("]")) --depth;
            else if (generic_[k] && t.is_op("<")) ++depth;
            else if (generic_[k]) depth -= java::angle_closers(t);
            else if (depth == 0 && t.is_sep(";")) break;
            else if (depth == 0 && t.is_sep(",")) ++count;
            if (depth < 0) break;
        }
        return count;
    }
};

}  // namespace methodlens::metrics
