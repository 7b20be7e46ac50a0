#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "methodlens/java/token.hpp"

namespace methodlens::java {

/// Index of the bracket closing the one at `open`, counting only the same
/// bracket kind. std::nullopt when the stream ends first.
[[nodiscard]] inline std::optional<std::size_t> find_matching(const std::vector<Token>& tokens, std::size_t open) {
    const std::string_view o = tokens[open].text;
    const std::string_view c = o == "(" ? ")" : o == "{" ? "}" : "]";
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::separator) continue;
        if (tokens[i].text == o) {
            ++depth;
        } else if (tokens[i].text == c) {
            if (--depth == 0) return i;
        }
    }
    return std::nullopt;
}

/// Number of '>' characters an angle-closing token contributes, 0 otherwise.
[[nodiscard]] inline int angle_closers(const Token& t) {
    if (t.kind != TokenKind::op) return 0;
    if (t.text == ">") return 1;
    if (t.text == ">>") return 2;
    if (t.text == ">>>") return 3;
    return 0;
}

namespace detail {
inline bool is_primitive(std::string_view w) {
    return w == "int" || w == "long" || w == "short" || w == "byte" || w == "char" || w == "boolean" ||
           w == "float" || w == "double" || w == "void";
}

inline bool allowed_inside_generic(const Token& t) {
    switch (t.kind) {
        case TokenKind::identifier: return true;
        case TokenKind::keyword:
            return is_primitive(t.text) || t.text == "extends" || t.text == "super";
        case TokenKind::separator:
            return t.text == "." || t.text == "," || t.text == "[" || t.text == "]" || t.text == "@";
        case TokenKind::op: return t.text == "?" || t.text == "&" || t.text == "<" || angle_closers(t) > 0;
        default: return false;
    }
}
}  // namespace detail

/// If tokens[open] is a '<' that opens a type-argument list, returns the index
/// of the token that closes it (which may be a '>>' or '>>>' shared with an
/// outer list). Comparisons such as `i < n` yield std::nullopt.
[[nodiscard]] inline std::optional<std::size_t> generic_close(const std::vector<Token>& tokens, std::size_t open) {
    if (!tokens[open].is_op("<")) return std::nullopt;
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (!detail::allowed_inside_generic(t)) return std::nullopt;
        if (t.is_op("<")) {
            ++depth;
        } else if (const int closers = angle_closers(t); closers > 0) {
            depth -= closers;
            if (depth <= 0) {
                // A diamond or type list must be followed by something a type can precede.
                if (i + 1 < tokens.size()) {
                    const Token& next = tokens[i + 1];
                    if (next.kind == TokenKind::literal) return std::nullopt;
                    if (next.kind == TokenKind::op && !next.is_op("&") && angle_closers(next) == 0 &&
                        !next.is_op("=") && !next.is_op("?") && !next.is_op(":") && !next.is_op("->")) {
                        return std::nullopt;
                    }
                }
                return i;
            }
        }
    }
    return std::nullopt;
}

/// Marks every token that belongs to angle brackets of a type-argument list.
[[nodiscard]] inline std::vector<bool> generic_bracket_mask(const std::vector<Token>& tokens) {
    std::vector<bool> mask(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (mask[i] || !tokens[i].is_op("<")) continue;
        if (const auto close = generic_close(tokens, i)) {
            for (std::size_t j = i; j <= *close; ++j) {
                if (tokens[j].is_op("<") || angle_closers(tokens[j]) > 0) mask[j] = true;
            }
            i = *close;
        }
    }
    return mask;
}

}  // namespace methodlens::java
