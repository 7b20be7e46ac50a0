#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "methodlens/error.hpp"
#include "methodlens/history/levenshtein.hpp"
#include "methodlens/history/line_diff.hpp"
#include "methodlens/history/repository.hpp"
#include "methodlens/java/extract.hpp"
#include "methodlens/log.hpp"

namespace methodlens::history {

using java::MethodDeclaration;

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kDaysPerYear = 365.25;

/// Stable identity of a method at the snapshot commit.
struct MethodIdentity {
    std::string project;
    std::string path;
    std::string signature;
    int start_line = 0;

    [[nodiscard]] std::string key() const { return project + ":" + path + ":" + signature; }

    friend auto operator<=>(const MethodIdentity& a, const MethodIdentity& b) {
        return std::tie(a.project, a.path, a.signature, a.start_line) <=>
               std::tie(b.project, b.path, b.signature, b.start_line);
    }
    friend bool operator==(const MethodIdentity&, const MethodIdentity&) = default;
};

/// A method's text at one commit.
struct MethodVersion {
    CommitMeta commit;
    std::string path;
    MethodDeclaration declaration;
};

struct Revision {
    CommitMeta commit;
    int lines_added = 0;
    int lines_deleted = 0;
    long edit_distance = 0;
    double days_since_introduction = 0.0;
};

struct MethodHistory {
    MethodIdentity identity;
    MethodVersion introduction;
    std::vector<Revision> revisions;  ///< oldest first
};

struct ChangeIndicators {
    long revisions = 0;
    long diff_size = 0;
    long addition_only = 0;
    long edit_distance = 0;

    friend bool operator==(const ChangeIndicators&, const ChangeIndicators&) = default;
};

struct TraceConfig {
    double similarity_threshold = 0.75;
    double window_years = 5.0;
    std::string snapshot_commit;
    /// Below this body length a fuzzy match must keep the method name.
    std::size_t small_method_chars = 60;

    void validate() const {
        if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
            throw Error(ErrorCode::type_mismatch, "theta must lie in (0, 1]");
        }
        if (!(window_years > 0.0)) throw Error(ErrorCode::type_mismatch, "window years must be positive");
    }

    [[nodiscard]] double window_days() const { return kDaysPerYear * window_years; }
};

/// Finds `target`'s counterpart among the methods of the parent-side file.
///
/// Priority: identical signature; then same name with a body similarity of at
/// least `theta`; then the most similar body overall (at least `theta`).
/// Similarity is 1 - levenshtein / max length over the body blocks. Ties go
/// to the smaller start line. Methods shorter than `small_method_chars` only
/// match fuzzily when the name is unchanged.
[[nodiscard]] inline std::optional<MethodDeclaration> match_method(const std::vector<MethodDeclaration>& previous,
                                                                   const MethodDeclaration& target, double theta,
                                                                   std::size_t small_method_chars = 60) {
    const std::string key = java::signature(target);
    const MethodDeclaration* exact = nullptr;
    for (const auto& m : previous) {
        if (java::signature(m) == key && (!exact || m.start_line < exact->start_line)) exact = &m;
    }
    if (exact) return *exact;

    const auto target_block = target.block_text();
    auto best_of = [&](auto&& eligible) -> const MethodDeclaration* {
        const MethodDeclaration* best = nullptr;
        double best_sim = -1.0;
        for (const auto& m : previous) {
            if (!eligible(m)) continue;
            const auto block = m.block_text();
            const double longest = static_cast<double>(std::max(block.size(), target_block.size()));
            const double shortest = static_cast<double>(std::min(block.size(), target_block.size()));
            if (longest > 0 && shortest / longest < theta) continue;  // cannot reach theta
            const double sim = similarity(block, target_block);
            if (sim < theta) continue;
            if (sim > best_sim || (sim == best_sim && m.start_line < best->start_line)) {
                best = &m;
                best_sim = sim;
            }
        }
        return best;
    };

    if (const auto* m = best_of([&](const MethodDeclaration& m) { return m.name == target.name; })) return *m;
    const bool small = target.body_text.size() < small_method_chars;
    if (const auto* m = best_of([&](const MethodDeclaration& m) { return !small || m.name == target.name; })) {
        return *m;
    }
    return std::nullopt;
}

/// Sums the indicators over revisions no later than the window after introduction.
[[nodiscard]] inline ChangeIndicators compute_indicators(const MethodHistory& history, const TraceConfig& cfg) {
    ChangeIndicators ind;
    const double limit = cfg.window_days();
    for (const auto& r : history.revisions) {
        if (r.days_since_introduction > limit) continue;
        ++ind.revisions;
        ind.diff_size += r.lines_added + r.lines_deleted;
        ind.addition_only += r.lines_added;
        ind.edit_distance += r.edit_distance;
    }
    return ind;
}

[[nodiscard]] inline double age_days(std::int64_t snapshot_time, std::int64_t introduction_time) {
    return static_cast<double>(snapshot_time - introduction_time) / kSecondsPerDay;
}

/// Keeps methods at least window_years old at the snapshot (inclusive bound).
[[nodiscard]] inline std::vector<MethodHistory> filter_by_age(const std::vector<MethodHistory>& histories,
                                                              std::int64_t snapshot_time, const TraceConfig& cfg) {
    std::vector<MethodHistory> kept;
    for (const auto& h : histories) {
        if (age_days(snapshot_time, h.introduction.commit.author_time) >= cfg.window_days()) kept.push_back(h);
    }
    return kept;
}

/// Traces methods backwards along the first-parent chain of a snapshot.
///
/// One tracer caches the chain and every parent-side extraction, so tracing
/// many methods of one snapshot reuses work. trace() may be called from
/// several threads.
class Tracer {
public:
    Tracer(Repository& repo, TraceConfig cfg, std::string project)
        : repo_(repo), cfg_(std::move(cfg)), project_(std::move(project)) {
        cfg_.validate();
        chain_ = walk_first_parent(repo_, cfg_.snapshot_commit);
    }

    [[nodiscard]] const std::vector<CommitMeta>& chain() const noexcept { return chain_; }
    [[nodiscard]] const CommitMeta& snapshot() const { return chain_.front(); }
    [[nodiscard]] const TraceConfig& config() const noexcept { return cfg_; }

    /// Methods of `path` at the snapshot commit.
    std::shared_ptr<const std::vector<MethodDeclaration>> snapshot_methods(const std::string& path) {
        auto methods = methods_at(snapshot().id, path);
        if (!methods) throw Error(ErrorCode::method_not_at_snapshot, "cannot extract " + path + " at snapshot");
        return methods;
    }

    MethodHistory trace(const MethodIdentity& identity) {
        const auto methods = snapshot_methods(identity.path);
        const MethodDeclaration* start = nullptr;
        for (const auto& m : *methods) {
            if (java::signature(m) != identity.signature) continue;
            if (!start || std::abs(m.start_line - identity.start_line) < std::abs(start->start_line - identity.start_line)) {
                start = &m;
            }
        }
        if (!start) {
            throw Error(ErrorCode::method_not_at_snapshot, identity.signature + " not found in " + identity.path);
        }
        return trace_from(identity, *start);
    }

    MethodHistory trace_from(const MethodIdentity& identity, const MethodDeclaration& at_snapshot) {
        MethodDeclaration current = at_snapshot;
        std::string path = identity.path;
        std::vector<Revision> newest_first;
        std::size_t introduced_at = chain_.size() - 1;

        for (std::size_t i = 0; i < chain_.size(); ++i) {
            const CommitMeta& commit = chain_[i];
            const auto changes = repo_.changes(commit);
            const FileChange* change = nullptr;
            for (const auto& c : changes) {
                if (c.new_path == path) {
                    change = &c;
                    break;
                }
            }
            if (!change) continue;
            if (change->status == ChangeStatus::added || !commit.first_parent_id || i + 1 >= chain_.size()) {
                introduced_at = i;
                break;
            }
            const std::string parent_path = change->old_path.empty() ? path : change->old_path;
            const auto parent_methods = methods_at(chain_[i + 1].id, parent_path);
            if (!parent_methods) {
                log::warn("skipping " + commit.id.substr(0, 12) + " for " + identity.signature +
                          ": parent-side extraction of " + parent_path + " failed");
                path = parent_path;
                continue;
            }
            auto match = match_method(*parent_methods, current, cfg_.similarity_threshold, cfg_.small_method_chars);
            if (!match) {
                introduced_at = i;
                break;
            }
            if (match->body_text != current.body_text) {
                Revision r;
                r.commit = commit;
                const auto diff = line_diff(match->body_text, current.body_text);
                r.lines_added = diff.added;
                r.lines_deleted = diff.deleted;
                r.edit_distance = static_cast<long>(levenshtein(match->body_text, current.body_text));
                newest_first.push_back(std::move(r));
            }
            current = std::move(*match);
            path = parent_path;
        }

        MethodHistory h;
        h.identity = identity;
        h.introduction = MethodVersion{chain_[introduced_at], path, std::move(current)};
        const auto intro_time = h.introduction.commit.author_time;
        h.revisions.assign(std::make_move_iterator(newest_first.rbegin()), std::make_move_iterator(newest_first.rend()));
        for (auto& r : h.revisions) {
            r.days_since_introduction = std::max(0.0, age_days(r.commit.author_time, intro_time));
        }
        return h;
    }

    /// Traces every identity with up to `jobs` threads; output follows input order.
    std::vector<MethodHistory> trace_all(const std::vector<MethodIdentity>& identities, unsigned jobs = 1) {
        std::vector<std::optional<MethodHistory>> slots(identities.size());
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::vector<std::pair<std::size_t, std::string>> errors;
        auto worker = [&] {
            for (std::size_t k = next++; k < identities.size(); k = next++) {
                try {
                    slots[k] = trace(identities[k]);
                } catch (const Error& e) {
                    std::lock_guard lock(error_mutex);
                    errors.emplace_back(k, e.what());
                }
            }
        };
        jobs = std::max(1u, jobs);
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
            for (auto& t : threads) t.join();
        }
        std::sort(errors.begin(), errors.end());
        for (const auto& [k, msg] : errors) log::warn("trace failed for " + identities[k].key() + ": " + msg);
        std::vector<MethodHistory> out;
        for (auto& s : slots) {
            if (s) out.push_back(std::move(*s));
        }
        return out;
    }

private:
    Repository& repo_;
    TraceConfig cfg_;
    std::string project_;
    std::vector<CommitMeta> chain_;
    std::mutex cache_mutex_;
    std::map<std::pair<std::string, std::string>, std::shared_ptr<const std::vector<MethodDeclaration>>> cache_;

    // nullptr when the file is missing or cannot be extracted.
    std::shared_ptr<const std::vector<MethodDeclaration>> methods_at(const std::string& commit, const std::string& path) {
        const auto key = std::make_pair(commit, path);
        {
            std::lock_guard lock(cache_mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        std::shared_ptr<const std::vector<MethodDeclaration>> result;
        if (auto content = repo_.read_file(commit, path)) {
            try {
                result = std::make_shared<const std::vector<MethodDeclaration>>(
                    java::extract_methods(java::SourceFile(path, *content)));
            } catch (const Error& e) {
                log::warn(path + "@" + commit.substr(0, 12) + ": " + e.what());
            }
        }
        std::lock_guard lock(cache_mutex_);
        cache_.emplace(key, result);
        return result;
    }
};

/// Convenience wrapper: one-off trace of a single method.
[[nodiscard]] inline MethodHistory trace_method(Repository& repo, const MethodIdentity& identity,
                                                const TraceConfig& cfg) {
    return Tracer(repo, cfg, identity.project).trace(identity);
}

}  // namespace methodlens::history
