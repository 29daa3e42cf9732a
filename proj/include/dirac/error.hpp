#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

enum class ErrorKind {
  InvalidParameter,
  Configuration,
  Evaluation,
  Validation,
  Accuracy,
  NoData,
  DegenerateFit,
  Io,
};

const char* to_string(ErrorKind kind);

// Single exception type; `kind()` drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dirac
