#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "methodlens/java/extract.hpp"
#include "methodlens/java/lexer.hpp"
#include "methodlens/java/token_utils.hpp"

namespace methodlens::metrics {

/// Tokenized view of one MethodDeclaration shared by all metric passes.
///
/// Line-based metrics look at every line of body_text. Token-based metrics
/// look only at the exact declaration span, and most of them only at the
/// body block (`body`, outer braces included).
struct MethodView {
    std::vector<std::string_view> lines;
    std::vector<java::Token> all_tokens;  ///< body_text tokens, comments included
    std::vector<java::Token> body;        ///< non-comment tokens from the body '{' to its '}'
    std::vector<bool> generic;            ///< generic_bracket_mask(body)
    std::vector<bool> code_line;          ///< per line: holds a non-comment token
    std::vector<bool> comment_line;       ///< per line: holds comment content

    explicit MethodView(const java::MethodDeclaration& decl)
        : lines(java::split_lines(decl.body_text)), all_tokens(java::tokenize(decl.body_text)) {
        const int line_total = static_cast<int>(lines.size());
        code_line.assign(lines.size(), false);
        comment_line.assign(lines.size(), false);
        for (const auto& t : all_tokens) {
            auto& flags = t.is_comment() ? comment_line : code_line;
            for (int l = t.line; l <= t.end_line() && l <= line_total; ++l) flags[static_cast<std::size_t>(l - 1)] = true;
        }

        bool in_body = false;
        int brace_depth = 0;
        for (const auto& t : all_tokens) {
            if (t.is_comment()) continue;
            if (!in_body) {
                if (t.offset == decl.body_offset && t.is_sep("{")) in_body = true;
                else continue;
            }
            body.push_back(t);
            if (t.is_sep("{")) ++brace_depth;
            if (t.is_sep("}") && --brace_depth == 0) break;
        }
        if (body.empty()) {
            throw Error(ErrorCode::invalid_input, "method '" + decl.name + "' has no body block at the recorded offset",
                        decl.start_line);
        }
        generic = java::generic_bracket_mask(body);
    }
};

}  // namespace methodlens::metrics
