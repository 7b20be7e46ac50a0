#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace methodlens::log {

enum class Level { info, warning };

using Sink = std::function<void(Level, const std::string&)>;

namespace detail {
inline std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}
inline Sink& sink() {
    static Sink s = [](Level level, const std::string& msg) {
        std::cerr << (level == Level::warning ? "warning: " : "") << msg << '\n';
    };
    return s;
}
}  // namespace detail

/// Replace the process-wide sink; returns the previous one so tests can restore it.
inline Sink set_sink(Sink sink) {
    std::lock_guard lock(detail::sink_mutex());
    Sink previous = std::move(detail::sink());
    detail::sink() = std::move(sink);
    return previous;
}

inline void write(Level level, const std::string& msg) {
    std::lock_guard lock(detail::sink_mutex());
    if (detail::sink()) detail::sink()(level, msg);
}

inline void warn(const std::string& msg) { write(Level::warning, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }

}  // namespace methodlens::log
