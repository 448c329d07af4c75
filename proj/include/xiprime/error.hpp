#pragma once

#include <stdexcept>
#include <string>

namespace xiprime {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  config,    // invalid parameters or preconditions (exit 2)
  numeric,   // domain, range, accuracy, capacity (exit 3)
  io,        // file access and parse failures (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable tag such as "domain" or "parse".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error config_error(const std::string& msg) {
  return Error(ErrorKind::config, "config", msg);
}
inline Error precondition_error(const std::string& msg) {
  return Error(ErrorKind::config, "precondition", msg);
}
inline Error domain_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "domain", msg);
}
inline Error range_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "range", msg);
}
inline Error capacity_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "capacity", msg);
}
inline Error accuracy_error(const std::string& msg) {
  return Error(ErrorKind::numeric, "accuracy", msg);
}
inline Error io_error(const std::string& msg) {
  return Error(ErrorKind::io, "io", msg);
}
inline Error parse_error(const std::string& msg) {
  return Error(ErrorKind::io, "parse", msg);
}

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
      return 2;
    case ErrorKind::numeric:
      return 3;
    case ErrorKind::io:
      return 4;
  }
  return 1;
}

}  // namespace xiprime
