#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace methodlens::history {

struct CommitMeta {
    std::string id;
    std::optional<std::string> first_parent_id;
    std::int64_t author_time = 0;  ///< seconds since the Unix epoch, UTC
    std::string message;

    friend bool operator==(const CommitMeta&, const CommitMeta&) = default;
};

enum class ChangeStatus { added, modified, deleted, renamed, copied, type_changed };

/// One path-level change between a commit and its first parent.
struct FileChange {
    ChangeStatus status = ChangeStatus::modified;
    std::string old_path;  ///< empty for additions
    std::string new_path;  ///< empty for deletions
};

/// Read-only access to a version-controlled repository.
class Repository {
public:
    virtual ~Repository() = default;

    /// Throws Error(unknown_commit) when `rev` does not name a commit.
    virtual CommitMeta resolve(const std::string& rev) = 0;

    /// `snapshot` followed by its first-parent ancestors, newest first.
    virtual std::vector<CommitMeta> first_parent_chain(const std::string& snapshot) = 0;

    /// Changes of `commit` against its first parent (everything is added for a root commit).
    virtual std::vector<FileChange> changes(const CommitMeta& commit) = 0;

    virtual std::optional<std::string> read_file(const std::string& commit, const std::string& path) = 0;

    virtual std::vector<std::string> list_files(const std::string& commit) = 0;
};

/// The snapshot and its first-parent chain to the root, newest first.
inline std::vector<CommitMeta> walk_first_parent(Repository& repo, const std::string& snapshot) {
    return repo.first_parent_chain(repo.resolve(snapshot).id);
}

}  // namespace methodlens::history
