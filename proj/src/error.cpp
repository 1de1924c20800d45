#include "gamspline/error.hpp"

#include <iostream>
#include <mutex>
#include <utility>

#include "gamspline/log.hpp"

namespace gamspline {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kNumericalFailure: return "numerical-failure";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kUnstableCi: return "unstable-ci";
    case ErrorKind::kTuningFailure: return "tuning-failure";
    case ErrorKind::kUnsupportedOperation: return "unsupported-operation";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kLoad: return "load";
  }
  return "unknown";
}

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s = [](LogLevel level, const std::string& message) {
    if (level == LogLevel::kWarning) std::cerr << "warning: " << message << '\n';
  };
  return s;
}

void emit(LogLevel level, const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace

LogSink set_log_sink(LogSink s) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  return std::exchange(sink(), std::move(s));
}

void log_info(const std::string& message) { emit(LogLevel::kInfo, message); }
void log_warning(const std::string& message) { emit(LogLevel::kWarning, message); }

}  // namespace gamspline
