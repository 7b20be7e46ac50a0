#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/java/token.hpp"

namespace methodlens::java {

namespace detail {

inline constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",       "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",    "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",    "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",       "interface",
    "long",     "native",     "new",       "package",   "private",    "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",      "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",        "void",      "volatile",
    "while"};

// Longest first so a greedy scan picks the maximal munch.
inline constexpr std::array<std::string_view, 38> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "->", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=",   "-=",  "*=",  "/=",  "&=", "|=", "^=", "%=", "<<", ">>", "=",  ">",  "<",
    "!",    "~",   "?",   ":",   "+",  "-",  "*",  "/",  "&",  "|",  "^",  "%"};

inline bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

inline bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                line_start_ = pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
                ++pos_;
                continue;
            }
            out.push_back(next_token());
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    Token make(TokenKind kind, std::size_t begin, int begin_line, std::size_t begin_col) const {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(begin, pos_ - begin));
        t.line = begin_line;
        t.column = static_cast<int>(begin_col);
        t.offset = begin;
        t.line_count = line_ - begin_line + 1;
        return t;
    }

    // Advances over one character, keeping line bookkeeping for multi-line tokens.
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            line_start_ = pos_ + 1;
        }
        ++pos_;
    }

    Token next_token() {
        const std::size_t begin = pos_;
        const int begin_line = line_;
        const std::size_t begin_col = pos_ - line_start_ + 1;
        const auto c = static_cast<unsigned char>(peek());

        if (c == '/' && peek(1) == '/') {
            while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            return make(TokenKind::comment, begin, begin_line, begin_col);
        }
        if (c == '/' && peek(1) == '*') {
            pos_ += 2;
            while (true) {
                if (pos_ >= src_.size()) {
                    throw Error(ErrorCode::lexical_error, "UnterminatedComment", begin_line);
                }
                if (src_[pos_] == '*' && peek(1) == '/') {
                    pos_ += 2;
                    break;
                }
                advance();
            }
            return make(TokenKind::comment, begin, begin_line, begin_col);
        }
        if (c == '"') {
            if (peek(1) == '"' && peek(2) == '"') return text_block(begin, begin_line, begin_col);
            quoted('"', begin_line);
            return make(TokenKind::literal, begin, begin_line, begin_col);
        }
        if (c == '\'') {
            quoted('\'', begin_line);
            return make(TokenKind::literal, begin, begin_line, begin_col);
        }
        if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
            number();
            return make(TokenKind::literal, begin, begin_line, begin_col);
        }
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const std::string_view word = src_.substr(begin, pos_ - begin);
            TokenKind kind = TokenKind::identifier;
            if (word == "true" || word == "false" || word == "null") {
                kind = TokenKind::literal;
            } else if (is_keyword(word)) {
                kind = TokenKind::keyword;
            }
            return make(kind, begin, begin_line, begin_col);
        }
        if (c == '.' && peek(1) == '.' && peek(2) == '.') {
            pos_ += 3;
            return make(TokenKind::separator, begin, begin_line, begin_col);
        }
        if (c == ':' && peek(1) == ':') {
            pos_ += 2;
            return make(TokenKind::separator, begin, begin_line, begin_col);
        }
        if (std::string_view("(){}[];,.@").find(static_cast<char>(c)) != std::string_view::npos) {
            ++pos_;
            return make(TokenKind::separator, begin, begin_line, begin_col);
        }
        for (std::string_view op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                pos_ += op.size();
                return make(TokenKind::op, begin, begin_line, begin_col);
            }
        }
        throw Error(ErrorCode::lexical_error,
                    "unexpected character 0x" + to_hex(c) + " at column " + std::to_string(begin_col),
                    begin_line);
    }

    static std::string to_hex(unsigned char c) {
        static constexpr char digits[] = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 0xF]};
    }

    void quoted(char quote, int begin_line) {
        ++pos_;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw Error(ErrorCode::lexical_error, "UnterminatedString", begin_line);
            }
            const char ch = src_[pos_];
            if (ch == '\\') {
                if (pos_ + 1 >= src_.size() || src_[pos_ + 1] == '\n') {
                    throw Error(ErrorCode::lexical_error, "UnterminatedString", begin_line);
                }
                pos_ += 2;
                continue;
            }
            ++pos_;
            if (ch == quote) return;
        }
    }

    Token text_block(std::size_t begin, int begin_line, std::size_t begin_col) {
        pos_ += 3;
        while (true) {
            if (pos_ >= src_.size()) throw Error(ErrorCode::lexical_error, "UnterminatedString", begin_line);
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                advance();
                advance();
                continue;
            }
            if (src_[pos_] == '"' && peek(1) == '"' && peek(2) == '"') {
                pos_ += 3;
                return make(TokenKind::literal, begin, begin_line, begin_col);
            }
            advance();
        }
    }

    void number() {
        const bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
        bool seen_dot = false;
        while (pos_ < src_.size()) {
            const auto ch = static_cast<unsigned char>(src_[pos_]);
            if (is_ident_part(ch) && ch < 0x80) {
                ++pos_;
            } else if (ch == '.' && !seen_dot && peek(1) != '.' &&
                       !(pos_ + 1 < src_.size() && is_ident_start(static_cast<unsigned char>(src_[pos_ + 1])) &&
                         !is_exponent_char(src_[pos_ + 1], hex) && src_[pos_ + 1] != 'f' &&
                         src_[pos_ + 1] != 'F' && src_[pos_ + 1] != 'd' && src_[pos_ + 1] != 'D')) {
                seen_dot = true;
                ++pos_;
            } else if ((ch == '+' || ch == '-') && pos_ > 0 && is_exponent_char(src_[pos_ - 1], hex)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    static bool is_exponent_char(char ch, bool hex) {
        return hex ? (ch == 'p' || ch == 'P') : (ch == 'e' || ch == 'E');
    }
};

}  // namespace detail

/// Full-fidelity Java token stream, comments included.
///
/// Throws Error(lexical_error) for an unterminated string, character literal,
/// text block or block comment, and for bytes that cannot start any Java token.
[[nodiscard]] inline std::vector<Token> tokenize(std::string_view source) {
    return detail::Lexer(source).run();
}

/// The same stream with comment tokens removed.
[[nodiscard]] inline std::vector<Token> strip_comments(const std::vector<Token>& tokens) {
    std::vector<Token> out;
    out.reserve(tokens.size());
    std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
                 [](const Token& t) { return !t.is_comment(); });
    return out;
}

}  // namespace methodlens::java
