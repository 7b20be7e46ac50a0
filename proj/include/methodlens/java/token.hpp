#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace methodlens::java {

enum class TokenKind { keyword, identifier, literal, op, separator, comment };

inline const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::keyword: return "keyword";
        case TokenKind::identifier: return "identifier";
        case TokenKind::literal: return "literal";
        case TokenKind::op: return "operator";
        case TokenKind::separator: return "separator";
        case TokenKind::comment: return "comment";
    }
    return "?";
}

/// A lexeme with its exact source text. Whitespace between tokens is not
/// represented; `offset` lets callers recover it.
struct Token {
    TokenKind kind{TokenKind::separator};
    std::string text;
    int line{1};          ///< 1-based line of the first character
    int column{1};        ///< 1-based column (bytes) of the first character
    std::size_t offset{0};
    int line_count{1};    ///< physical lines spanned (>1 for block comments, text blocks)

    [[nodiscard]] int end_line() const noexcept { return line + line_count - 1; }
    [[nodiscard]] bool is(TokenKind k, std::string_view t) const noexcept {
        return kind == k && text == t;
    }
    [[nodiscard]] bool is_op(std::string_view t) const noexcept { return kind == TokenKind::op && text == t; }
    [[nodiscard]] bool is_sep(std::string_view t) const noexcept {
        return kind == TokenKind::separator && text == t;
    }
    [[nodiscard]] bool is_keyword(std::string_view t) const noexcept {
        return kind == TokenKind::keyword && text == t;
    }
    [[nodiscard]] bool is_identifier() const noexcept { return kind == TokenKind::identifier; }
    [[nodiscard]] bool is_comment() const noexcept { return kind == TokenKind::comment; }
};

}  // namespace methodlens::java
