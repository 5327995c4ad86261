#include "beatmark/log.hpp"

#include <iostream>
#include <mutex>

namespace beatmark {

namespace {

std::mutex g_mutex;
LogLevel g_level = LogLevel::kWarning;

void default_sink(LogLevel level, std::string_view message) {
  static constexpr std::string_view kNames[] = {"debug", "info", "warning", "error"};
  std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

LogSink& sink() {
  static LogSink s = default_sink;
  return s;
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(g_mutex);
  sink() = std::move(s);
}

void set_log_level(LogLevel min_level) {
  std::lock_guard lock(g_mutex);
  g_level = min_level;
}

void log(LogLevel level, std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (level < g_level || !sink()) return;
  sink()(level, message);
}

}  // namespace beatmark
