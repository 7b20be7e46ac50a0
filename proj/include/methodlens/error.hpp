#pragma once

#include <stdexcept>
#include <string>

namespace methodlens {

/// Machine-readable failure category. The CLI maps these onto exit codes.
enum class ErrorCode {
    lexical_error,
    extraction_error,
    repo_access,
    unknown_commit,
    method_not_at_snapshot,
    empty_project,
    too_few_projects,
    single_class,
    no_ugly_rows,
    empty_test_set,
    non_finite_loss,
    unknown_key,
    type_mismatch,
    missing_stage,
    invalid_input,
    stage_failure,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::lexical_error: return "LexicalError";
        case ErrorCode::extraction_error: return "ExtractionError";
        case ErrorCode::repo_access: return "RepoAccessError";
        case ErrorCode::unknown_commit: return "UnknownCommit";
        case ErrorCode::method_not_at_snapshot: return "MethodNotAtSnapshot";
        case ErrorCode::empty_project: return "EmptyProject";
        case ErrorCode::too_few_projects: return "TooFewProjects";
        case ErrorCode::single_class: return "SingleClass";
        case ErrorCode::no_ugly_rows: return "NoUglyRows";
        case ErrorCode::empty_test_set: return "EmptyTestSet";
        case ErrorCode::non_finite_loss: return "NonFiniteLoss";
        case ErrorCode::unknown_key: return "UnknownKey";
        case ErrorCode::type_mismatch: return "TypeMismatch";
        case ErrorCode::missing_stage: return "MissingStage";
        case ErrorCode::invalid_input: return "InvalidInput";
        case ErrorCode::stage_failure: return "StageFailure";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, int line = 0)
        : std::runtime_error(std::string(to_string(code)) + ": " + message +
                             (line > 0 ? " (line " + std::to_string(line) + ")" : "")),
          code_(code),
          line_(line) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// 1-based source or config line the error refers to, 0 when not applicable.
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    ErrorCode code_;
    int line_;
};

}  // namespace methodlens
