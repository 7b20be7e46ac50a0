#pragma once

#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/history/process.hpp"
#include "methodlens/history/repository.hpp"

namespace methodlens::history {

/// Repository backed by the `git` executable (or $METHODLENS_GIT).
///
/// Results are cached per commit, and the cache is guarded so one instance can
/// serve concurrent tracers.
class GitRepository final : public Repository {
public:
    explicit GitRepository(std::string path) : path_(std::move(path)), git_(git_executable()) {
        const auto r = git({"rev-parse", "--git-dir"});
        if (r.exit_code != 0) {
            throw Error(ErrorCode::repo_access, "'" + path_ + "' is not a readable git repository: " + trim(r.err));
        }
    }

    static std::string git_executable() {
        const char* env = std::getenv("METHODLENS_GIT");
        return env && *env ? env : "git";
    }

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

    CommitMeta resolve(const std::string& rev) override {
        const auto r = git({"rev-parse", "--verify", "--quiet", rev + "^{commit}"});
        if (r.exit_code != 0) throw Error(ErrorCode::unknown_commit, "'" + rev + "' is not a commit in " + path_);
        const std::string id = trim(r.out);
        {
            std::lock_guard lock(mutex_);
            if (auto it = commits_.find(id); it != commits_.end()) return it->second;
        }
        auto chain = parse_log(checked({"log", "-1", std::string(kLogFormat), id}).out);
        if (chain.empty()) throw Error(ErrorCode::unknown_commit, rev);
        std::lock_guard lock(mutex_);
        commits_.emplace(id, chain.front());
        return chain.front();
    }

    std::vector<CommitMeta> first_parent_chain(const std::string& snapshot) override {
        const std::string id = resolve(snapshot).id;
        auto chain = parse_log(checked({"log", "--first-parent", std::string(kLogFormat), id}).out);
        std::lock_guard lock(mutex_);
        for (const auto& c : chain) commits_.emplace(c.id, c);
        return chain;
    }

    std::vector<FileChange> changes(const CommitMeta& commit) override {
        {
            std::lock_guard lock(mutex_);
            if (auto it = changes_.find(commit.id); it != changes_.end()) return it->second;
        }
        std::vector<std::string> args = {"diff-tree", "-r", "-M", "--no-commit-id", "--name-status", "-z"};
        if (commit.first_parent_id) {
            args.push_back(*commit.first_parent_id);
        } else {
            args.emplace_back("--root");
        }
        args.push_back(commit.id);
        auto parsed = parse_name_status(checked(args).out);
        std::lock_guard lock(mutex_);
        changes_.emplace(commit.id, parsed);
        return parsed;
    }

    std::optional<std::string> read_file(const std::string& commit, const std::string& path) override {
        const std::string key = commit + ":" + path;
        {
            std::lock_guard lock(mutex_);
            if (auto it = blobs_.find(key); it != blobs_.end()) return it->second;
        }
        const auto r = git({"cat-file", "blob", key});
        std::optional<std::string> content;
        if (r.exit_code == 0) content = r.out;
        std::lock_guard lock(mutex_);
        blobs_.emplace(key, content);
        return content;
    }

    std::vector<std::string> list_files(const std::string& commit) override {
        const auto out = checked({"ls-tree", "-r", "--name-only", "-z", commit}).out;
        std::vector<std::string> files;
        for (auto part : split(out, '\0')) {
            if (!part.empty()) files.emplace_back(part);
        }
        return files;
    }

private:
    static constexpr std::string_view kLogFormat = "--format=%H%x1f%P%x1f%at%x1f%B%x1e";

    std::string path_;
    std::string git_;
    std::mutex mutex_;
    std::map<std::string, CommitMeta> commits_;
    std::map<std::string, std::vector<FileChange>> changes_;
    std::map<std::string, std::optional<std::string>> blobs_;

    ProcessResult git(std::vector<std::string> args) const {
        args.insert(args.begin(), {git_, "-C", path_, "-c", "core.quotepath=off"});
        return run_process(args);
    }

    ProcessResult checked(const std::vector<std::string>& args) const {
        auto r = git(args);
        if (r.exit_code != 0) {
            throw Error(ErrorCode::repo_access, "git " + args.front() + " failed: " + trim(r.err));
        }
        return r;
    }

    static std::string trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(b, e - b + 1));
    }

    static std::vector<std::string_view> split(std::string_view s, char sep) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(sep, start);
            if (pos == std::string_view::npos) {
                parts.push_back(s.substr(start));
                return parts;
            }
            parts.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
    }

    static std::vector<CommitMeta> parse_log(std::string_view out) {
        std::vector<CommitMeta> commits;
        for (auto record : split(out, '\x1e')) {
            while (!record.empty() && (record.front() == '\n' || record.front() == '\r')) record.remove_prefix(1);
            if (record.empty()) continue;
            const auto fields = split(record, '\x1f');
            if (fields.size() < 4) throw Error(ErrorCode::repo_access, "unexpected git log output");
            CommitMeta c;
            c.id = std::string(fields[0]);
            const std::string parent_field = trim(fields[1]);
            const auto parents = split(parent_field, ' ');
            if (!parents.empty() && !parents.front().empty()) c.first_parent_id = std::string(parents.front());
            c.author_time = std::stoll(std::string(fields[2]));
            std::string message(fields[3]);
            for (std::size_t k = 4; k < fields.size(); ++k) message += "\x1f" + std::string(fields[k]);
            c.message = trim(message);
            commits.push_back(std::move(c));
        }
        return commits;
    }

    static std::vector<FileChange> parse_name_status(std::string_view out) {
        std::vector<FileChange> changes;
        auto parts = split(out, '\0');
        std::size_t i = 0;
        while (i < parts.size()) {
            const auto status = parts[i++];
            if (status.empty()) continue;
            FileChange change;
            switch (status.front()) {
                case 'A': change.status = ChangeStatus::added; break;
                case 'D': change.status = ChangeStatus::deleted; break;
                case 'R': change.status = ChangeStatus::renamed; break;
                case 'C': change.status = ChangeStatus::copied; break;
                case 'T': change.status = ChangeStatus::type_changed; break;
                default: change.status = ChangeStatus::modified; break;
            }
            if (change.status == ChangeStatus::renamed || change.status == ChangeStatus::copied) {
                if (i + 1 >= parts.size()) break;
                change.old_path = std::string(parts[i++]);
                change.new_path = std::string(parts[i++]);
            } else {
                if (i >= parts.size()) break;
                const std::string path(parts[i++]);
                if (change.status != ChangeStatus::added) change.old_path = path;
                if (change.status != ChangeStatus::deleted) change.new_path = path;
            }
            changes.push_back(std::move(change));
        }
        return changes;
    }
};

}  // namespace methodlens::history
