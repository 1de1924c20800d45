#ifndef GAMSPLINE_LOG_HPP_
#define GAMSPLINE_LOG_HPP_

#include <functional>
#include <string>

namespace gamspline {

enum class LogLevel { kInfo, kWarning };

using LogSink = std::function<void(LogLevel, const std::string&)>;

// Replaces the process-wide sink and returns the previous one. The default
// sink writes warnings to stderr and drops info messages.
LogSink set_log_sink(LogSink sink);

void log_info(const std::string& message);
void log_warning(const std::string& message);

}  // namespace gamspline

#endif  // GAMSPLINE_LOG_HPP_
