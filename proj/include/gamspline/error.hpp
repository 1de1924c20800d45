#ifndef GAMSPLINE_ERROR_HPP_
#define GAMSPLINE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gamspline {

enum class ErrorKind {
  kInvalidInput,
  kDomain,
  kNumericalFailure,
  kUndefinedMetric,
  kUnstableCi,
  kTuningFailure,
  kUnsupportedOperation,
  kIo,
  kLoad,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; kind() lets callers
// (notably the CLI) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace gamspline

#endif  // GAMSPLINE_ERROR_HPP_
