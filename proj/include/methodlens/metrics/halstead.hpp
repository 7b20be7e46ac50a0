#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "methodlens/metrics/body_walker.hpp"
#include "methodlens/metrics/metric_vector.hpp"

namespace methodlens::metrics {

/// Operator and operand multisets of a body token stream.
///
/// Convention:
///  - operands: identifiers and literals, except identifiers at a call site;
///  - operators: operator symbols, keywords, the separators `.` `::` `...` `@`,
///    one `name()` operator per call (its parentheses are not counted again),
///    and one operator per `()`, `{}`, `[]` or type-argument `<>` pair;
///  - `;` and `,` are ignored.
struct HalsteadTally {
    std::map<std::string, int> operators;
    std::map<std::string, int> operands;
};

[[nodiscard]] inline HalsteadTally halstead_tally(const std::vector<Token>& body, const std::vector<bool>& generic) {
    HalsteadTally tally;
    std::set<std::size_t> call_parens;
    for (std::size_t i = 0; i < body.size(); ++i) {
        const Token& t = body[i];
        if (call_parens.count(i)) continue;
        switch (t.kind) {
            case TokenKind::comment: break;
            case TokenKind::literal: ++tally.operands[t.text]; break;
            case TokenKind::keyword: ++tally.operators[t.text]; break;
            case TokenKind::identifier:
                if (is_invocation(body, generic, i)) {
                    ++tally.operators[t.text + "()"];
                    call_parens.insert(i + 1);
                } else {
                    ++tally.operands[t.text];
                }
                break;
            case TokenKind::op:
                if (generic[i]) {
                    if (t.is_op("<")) ++tally.operators["<>"];
                } else {
                    ++tally.operators[t.text];
                }
                break;
            case TokenKind::separator:
                if (t.text == "(") ++tally.operators["()"];
                else if (t.text == "{") ++tally.operators["{}"];
                else if (t.text == "[") ++tally.operators["[]"];
                else if (t.text == ")" || t.text == "}" || t.text == "]" || t.text == ";" || t.text == ",") {
                } else {
                    ++tally.operators[t.text];
                }
                break;
        }
    }
    return tally;
}

/// V = N * log2(max(n, 2)); zero for an empty body.
[[nodiscard]] inline double halstead_volume(int length, int vocabulary) {
    if (length <= 0) return 0.0;
    return static_cast<double>(length) * std::log2(static_cast<double>(std::max(vocabulary, 2)));
}

[[nodiscard]] inline HalsteadCounts halstead_counts(const HalsteadTally& tally) {
    HalsteadCounts h;
    for (const auto& [_, c] : tally.operators) h.total_operators += c;
    for (const auto& [_, c] : tally.operands) h.total_operands += c;
    h.distinct_operators = static_cast<int>(tally.operators.size());
    h.distinct_operands = static_cast<int>(tally.operands.size());
    h.length = h.total_operators + h.total_operands;
    h.vocabulary = h.distinct_operators + h.distinct_operands;
    h.volume = halstead_volume(h.length, h.vocabulary);
    return h;
}

}  // namespace methodlens::metrics
