#pragma once

#include <functional>
#include <string_view>

namespace beatmark {

enum class LogLevel { kDebug, kInfo, kWarning, kError };

using LogSink = std::function<void(LogLevel, std::string_view)>;

// Replaces the process-wide sink. The default writes warnings and errors to
// stderr. Passing an empty function silences logging.
void set_log_sink(LogSink sink);
void set_log_level(LogLevel min_level);

void log(LogLevel level, std::string_view message);
inline void log_warning(std::string_view message) { log(LogLevel::kWarning, message); }
inline void log_info(std::string_view message) { log(LogLevel::kInfo, message); }

}  // namespace beatmark
