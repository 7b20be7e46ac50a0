#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/java/lexer.hpp"
#include "methodlens/java/source_file.hpp"
#include "methodlens/java/token_utils.hpp"
#include "methodlens/log.hpp"

namespace methodlens::java {

enum class Modifier : std::uint16_t {
    public_ = 1 << 0,
    private_ = 1 << 1,
    protected_ = 1 << 2,
    static_ = 1 << 3,
    abstract_ = 1 << 4,
    final_ = 1 << 5,
    synchronized_ = 1 << 6,
    default_ = 1 << 7,
    native_ = 1 << 8,
};

class ModifierSet {
public:
    static constexpr std::string_view kNames[] = {"public", "private", "protected", "static", "abstract",
                                                  "final",  "synchronized", "default", "native"};

    void insert(Modifier m) noexcept { bits_ |= static_cast<std::uint16_t>(m); }
    [[nodiscard]] bool has(Modifier m) const noexcept { return (bits_ & static_cast<std::uint16_t>(m)) != 0; }
    [[nodiscard]] bool empty() const noexcept { return bits_ == 0; }

    /// Returns false when `word` is not a tracked modifier.
    bool insert(std::string_view word) noexcept {
        for (std::size_t i = 0; i < std::size(kNames); ++i) {
            if (kNames[i] == word) {
                bits_ |= static_cast<std::uint16_t>(1u << i);
                return true;
            }
        }
        return false;
    }

    /// Names in canonical order.
    [[nodiscard]] std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < std::size(kNames); ++i) {
            if (bits_ & (1u << i)) out.emplace_back(kNames[i]);
        }
        return out;
    }

    friend bool operator==(ModifierSet, ModifierSet) = default;

private:
    std::uint16_t bits_ = 0;
};

struct MethodDeclaration {
    std::string name;
    std::vector<std::string> parameter_types;  ///< generics erased, declared order
    ModifierSet modifiers;
    std::vector<std::string> annotations;      ///< names without '@' or arguments
    std::string body_text;                     ///< lines start_line..end_line verbatim
    int start_line = 1;
    int end_line = 1;
    std::vector<std::string> container_chain;  ///< outermost type first
    int start_column = 1;                      ///< column of the first declaration token on start_line
    int end_column = 1;                        ///< column of the closing brace on end_line
    std::size_t body_offset = 0;               ///< offset of the body's '{' within body_text

    [[nodiscard]] std::size_t arity() const noexcept { return parameter_types.size(); }

    /// Text of the body block from its opening brace onwards.
    [[nodiscard]] std::string_view block_text() const noexcept {
        return std::string_view(body_text).substr(std::min(body_offset, body_text.size()));
    }

    friend bool operator==(const MethodDeclaration&, const MethodDeclaration&) = default;
};

/// Identity key: "Outer.Inner#name(T1,T2)".
[[nodiscard]] inline std::string signature(const MethodDeclaration& decl) {
    std::string key;
    for (std::size_t i = 0; i < decl.container_chain.size(); ++i) {
        if (i) key += '.';
        key += decl.container_chain[i];
    }
    key += '#';
    key += decl.name;
    key += '(';
    for (std::size_t i = 0; i < decl.parameter_types.size(); ++i) {
        if (i) key += ',';
        key += decl.parameter_types[i];
    }
    key += ')';
    return key;
}

namespace detail {

enum class TypeKind { class_, interface_, enum_, record_, annotation_ };

inline bool is_member_modifier(const Token& t) {
    if (t.kind != TokenKind::keyword) {
        return t.is_identifier() && (t.text == "sealed");
    }
    static constexpr std::string_view mods[] = {"public",   "private",      "protected", "static",
                                                "abstract", "final",        "synchronized", "default",
                                                "native",   "strictfp",     "transient", "volatile"};
    for (auto m : mods) {
        if (t.text == m) return true;
    }
    return false;
}

class Extractor {
public:
    Extractor(const SourceFile& file, std::vector<Token> tokens)
        : file_(file), tokens_(std::move(tokens)), starts_(line_starts(file.content())) {}

    std::vector<MethodDeclaration> run() {
        std::size_t i = 0;
        while (i < tokens_.size()) {
            if (auto type = type_declaration_at(i, i == 0 ? nullptr : &tokens_[i - 1])) {
                i = parse_type(type->keyword_index, type->kind, {}) + 1;
            } else {
                ++i;
            }
        }
        return std::move(out_);
    }

private:
    struct TypeStart {
        std::size_t keyword_index;
        TypeKind kind;
    };

    const SourceFile& file_;
    std::vector<Token> tokens_;
    std::vector<std::size_t> starts_;
    std::vector<MethodDeclaration> out_;

    const Token& at(std::size_t i) const {
        if (i >= tokens_.size()) {
            const int line = tokens_.empty() ? 1 : tokens_.back().line;
            throw Error(ErrorCode::extraction_error, "UnbalancedBraces: unexpected end of file", line);
        }
        return tokens_[i];
    }

    std::size_t matching(std::size_t open) const {
        if (auto close = find_matching(tokens_, open)) return *close;
        throw Error(ErrorCode::extraction_error, "UnbalancedBraces", tokens_[open].line);
    }

    std::optional<TypeStart> type_declaration_at(std::size_t i, const Token* prev) const {
        const Token& t = tokens_[i];
        if (prev && prev->is_sep(".")) return std::nullopt;  // Foo.class
        if (t.is_keyword("class")) return TypeStart{i, TypeKind::class_};
        if (t.is_keyword("interface")) {
            if (prev && prev->is_sep("@")) return TypeStart{i, TypeKind::annotation_};
            return TypeStart{i, TypeKind::interface_};
        }
        if (t.is_keyword("enum")) return TypeStart{i, TypeKind::enum_};
        if (t.is_identifier() && t.text == "record" && i + 2 < tokens_.size() && tokens_[i + 1].is_identifier() &&
            (tokens_[i + 2].is_sep("(") || tokens_[i + 2].is_op("<"))) {
            return TypeStart{i, TypeKind::record_};
        }
        return std::nullopt;
    }

    // Parses a type declaration whose keyword sits at `kw`; returns the index of its closing brace.
    std::size_t parse_type(std::size_t kw, TypeKind kind, std::vector<std::string> chain) {
        const Token& name = at(kw + 1);
        if (!name.is_identifier()) {
            throw Error(ErrorCode::extraction_error, "type declaration without a name", name.line);
        }
        chain.push_back(name.text);
        std::size_t j = kw + 2;
        while (!at(j).is_sep("{")) {
            if (at(j).is_sep("(")) {
                j = matching(j) + 1;
            } else if (at(j).is_sep(";")) {
                throw Error(ErrorCode::extraction_error, "type declaration without a body", at(j).line);
            } else {
                ++j;
            }
        }
        return parse_type_body(j, kind, chain);
    }

    std::size_t skip_annotation(std::size_t j, std::vector<std::string>* names) const {
        // j points at '@'
        std::size_t k = j + 1;
        std::string name;
        while (at(k).is_identifier() || at(k).is_sep(".")) {
            name += at(k).text;
            ++k;
        }
        if (names) names->push_back(name);
        if (k < tokens_.size() && tokens_[k].is_sep("(")) k = matching(k) + 1;
        return k;
    }

    std::size_t skip_generic(std::size_t j) const {
        int depth = 0;
        for (std::size_t k = j; k < tokens_.size(); ++k) {
            if (tokens_[k].is_op("<")) {
                ++depth;
            } else if (const int c = angle_closers(tokens_[k]); c > 0) {
                depth -= c;
                if (depth <= 0) return k + 1;
            }
        }
        throw Error(ErrorCode::extraction_error, "unterminated type parameter list", tokens_[j].line);
    }

    // Skips a field or other ';'-terminated member starting at j.
    std::size_t skip_to_semicolon(std::size_t j) const {
        while (!at(j).is_sep(";")) {
            if (at(j).is_sep("(") || at(j).is_sep("{") || at(j).is_sep("[")) {
                j = matching(j) + 1;
            } else if (at(j).is_sep("}")) {
                throw Error(ErrorCode::extraction_error, "UnbalancedBraces: '}' inside a field declaration",
                            at(j).line);
            } else {
                ++j;
            }
        }
        return j + 1;
    }

    std::size_t skip_enum_constants(std::size_t j) const {
        while (true) {
            const Token& t = at(j);
            if (t.is_sep(";")) return j + 1;
            if (t.is_sep("}")) return j;
            if (t.is_sep("(") || t.is_sep("{") || t.is_sep("[")) {
                j = matching(j) + 1;
            } else {
                ++j;
            }
        }
    }

    std::size_t parse_type_body(std::size_t open, TypeKind kind, const std::vector<std::string>& chain) {
        std::size_t i = open + 1;
        if (kind == TypeKind::enum_) i = skip_enum_constants(i);
        while (true) {
            const Token& t = at(i);
            if (t.is_sep("}")) return i;
            if (t.is_sep(";")) {
                ++i;
                continue;
            }
            i = parse_member(i, kind, chain);
        }
    }

    std::size_t parse_member(std::size_t start, TypeKind kind, const std::vector<std::string>& chain) {
        std::vector<std::string> annotations;
        ModifierSet modifiers;
        std::size_t j = start;
        while (true) {
            const Token& t = at(j);
            if (t.is_sep("@") && !at(j + 1).is_keyword("interface")) {
                j = skip_annotation(j, &annotations);
            } else if (is_member_modifier(t)) {
                modifiers.insert(t.text);
                ++j;
            } else if (t.is_identifier() && t.text == "non" && at(j + 1).is_op("-") &&
                       at(j + 2).is_identifier() && at(j + 2).text == "sealed") {
                j += 3;
            } else {
                break;
            }
        }

        if (at(j).is_sep("@") && at(j + 1).is_keyword("interface")) {
            return parse_type(j + 1, TypeKind::annotation_, chain) + 1;
        }
        if (auto nested = type_declaration_at(j, nullptr)) {
            return parse_type(nested->keyword_index, nested->kind, chain) + 1;
        }

        const std::size_t after_modifiers = j;
        std::size_t paren = 0;
        bool found_paren = false;
        while (!found_paren) {
            const Token& t = at(j);
            if (t.is_sep("{")) return matching(j) + 1;  // initializer block
            if (t.is_sep(";") || t.is_op("=")) return skip_to_semicolon(j);
            if (t.is_sep("}")) return j;
            if (t.is_op("<")) {
                j = skip_generic(j);
            } else if (t.is_sep("(")) {
                paren = j;
                found_paren = true;
            } else if (t.is_sep("@")) {
                j = skip_annotation(j, &annotations);
            } else {
                ++j;
            }
        }

        if (paren == 0 || !tokens_[paren - 1].is_identifier()) {
            throw Error(ErrorCode::extraction_error, "unrecognised member declaration", at(paren).line);
        }
        const std::size_t name_index = paren - 1;
        std::size_t type_start = after_modifiers;
        if (at(type_start).is_op("<")) type_start = skip_generic(type_start);
        while (at(type_start).is_sep("@")) type_start = skip_annotation(type_start, nullptr);
        const bool is_constructor = type_start == name_index;

        const std::size_t close_paren = matching(paren);
        std::size_t k = close_paren + 1;
        if (kind == TypeKind::annotation_) return skip_to_semicolon(k);
        while (true) {
            const Token& t = at(k);
            if (t.is_sep(";")) return k + 1;
            if (t.is_sep("{")) break;
            if (t.is_sep("}")) {
                throw Error(ErrorCode::extraction_error, "UnbalancedBraces: '}' in method header", t.line);
            }
            if (t.is_sep("(")) {
                k = matching(k) + 1;
            } else {
                ++k;
            }
        }
        const std::size_t body_open = k;
        const std::size_t body_close = matching(body_open);
        if (is_constructor) return body_close + 1;

        MethodDeclaration decl;
        decl.name = tokens_[name_index].text;
        decl.parameter_types = parse_parameters(paren, close_paren);
        decl.modifiers = modifiers;
        decl.annotations = std::move(annotations);
        decl.container_chain = chain;
        const Token& first = tokens_[start];
        const Token& last = tokens_[body_close];
        decl.start_line = first.line;
        decl.end_line = last.line;
        decl.start_column = first.column;
        decl.end_column = last.column;
        decl.body_text = slice_lines(file_.content(), starts_, decl.start_line, decl.end_line);
        decl.body_offset = tokens_[body_open].offset - starts_[static_cast<std::size_t>(decl.start_line - 1)];

        if (!out_.empty() && out_.back().start_line == decl.start_line) {
            log::warn(file_.path() + ":" + std::to_string(decl.start_line) + ": method '" + decl.name +
                      "' shares its first line with '" + out_.back().name + "', skipped");
        } else {
            out_.push_back(std::move(decl));
        }
        return body_close + 1;
    }

    std::vector<std::string> parse_parameters(std::size_t open, std::size_t close) const {
        std::vector<std::string> types;
        std::vector<std::vector<const Token*>> params(1);
        int depth = 0;
        for (std::size_t i = open + 1; i < close; ++i) {
            const Token& t = tokens_[i];
            if (t.is_sep("(") || t.is_sep("[") || t.is_op("<")) {
                ++depth;
            } else if (t.is_sep(")") || t.is_sep("]")) {
                --depth;
            } else if (const int c = angle_closers(t); c > 0) {
                depth -= c;
            } else if (t.is_sep(",") && depth == 0) {
                params.emplace_back();
                continue;
            }
            params.back().push_back(&t);
        }
        for (const auto& p : params) {
            if (p.empty()) continue;
            if (auto type = erase_parameter_type(p)) types.push_back(*type);
        }
        return types;
    }

    // Type of one formal parameter with annotations, modifiers and generic
    // arguments removed. A receiver parameter (`Foo this`) yields nullopt.
    static std::optional<std::string> erase_parameter_type(const std::vector<const Token*>& p) {
        std::vector<const Token*> kept;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Token& t = *p[i];
            if (t.is_sep("@")) {
                ++i;
                while (i < p.size() && (p[i]->is_identifier() || p[i]->is_sep("."))) ++i;
                if (i < p.size() && p[i]->is_sep("(")) {
                    int depth = 0;
                    for (; i < p.size(); ++i) {
                        if (p[i]->is_sep("(")) ++depth;
                        if (p[i]->is_sep(")") && --depth == 0) break;
                    }
                } else {
                    --i;
                }
                continue;
            }
            if (t.is_keyword("final")) continue;
            kept.push_back(&t);
        }
        if (kept.empty()) return std::nullopt;
        if (kept.back()->is_keyword("this")) return std::nullopt;

        // C-style array dimensions after the name belong to the type.
        std::string trailing_dims;
        while (kept.size() >= 2 && kept.back()->is_sep("]") && kept[kept.size() - 2]->is_sep("[")) {
            trailing_dims += "[]";
            kept.resize(kept.size() - 2);
        }
        if (kept.size() >= 2 && kept.back()->is_identifier()) kept.pop_back();

        std::string type;
        int generic_depth = 0;
        for (const Token* t : kept) {
            if (t->is_op("<")) {
                ++generic_depth;
                continue;
            }
            if (const int c = angle_closers(*t); c > 0) {
                generic_depth -= c;
                continue;
            }
            if (generic_depth > 0) continue;
            type += t->text;
        }
        return type + trailing_dims;
    }
};

}  // namespace detail

/// Every body-bearing method declared in a named type, in source order.
/// Constructors, initializer blocks, bodiless declarations and methods of
/// anonymous or local classes are not reported.
[[nodiscard]] inline std::vector<MethodDeclaration> extract_methods(const SourceFile& file) {
    auto tokens = strip_comments(tokenize(file.content()));
    return detail::Extractor(file, std::move(tokens)).run();
}

struct FileExtraction {
    std::string path;
    std::vector<MethodDeclaration> methods;
};

struct ExtractionFailure {
    std::string path;
    std::string message;
};

struct BatchExtraction {
    std::vector<FileExtraction> files;
    std::vector<ExtractionFailure> failures;
};

/// Extracts every file; a file that fails to lex or parse is reported and skipped.
[[nodiscard]] inline BatchExtraction extract_all(const std::vector<SourceFile>& files) {
    BatchExtraction result;
    for (const auto& f : files) {
        try {
            result.files.push_back({f.path(), extract_methods(f)});
        } catch (const Error& e) {
            log::warn(f.path() + ": " + e.what());
            result.failures.push_back({f.path(), e.what()});
        }
    }
    return result;
}

}  // namespace methodlens::java
