#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swhomog {

enum class ErrorKind {
  invalid_profile,
  invalid_argument,
  consistency,
  domain,
  non_finite,
  blow_up,
  dry_state,
  non_convergence,
  unsupported,
  config,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_profile: return "invalid_profile";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::domain: return "domain";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::dry_state: return "dry_state";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
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

}  // namespace swhomog
