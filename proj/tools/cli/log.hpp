#pragma once

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace tmadf::cli {

enum class LogLevel { Quiet = 0, Error, Warn, Info, Debug };

/// Level from TMADF_LOG_LEVEL (quiet, error, warn, info, debug); default warn.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("TMADF_LOG_LEVEL");
        const std::string_view v = env ? env : "warn";
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "error") return LogLevel::Error;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log(LogLevel level, std::string_view message) {
    if (level > log_level() || level == LogLevel::Quiet) return;
    static constexpr std::string_view names[] = {"", "error", "warn", "info", "debug"};
    std::clog << "[tmadf " << names[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace tmadf::cli
