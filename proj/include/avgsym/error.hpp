#pragma once

#include <stdexcept>
#include <string>

namespace avgsym {

enum class ErrorKind {
  usage,
  size_limit,
  capability,
  group_mismatch,
  numerical,
  degenerate_rep,
  search_failure,
  training_failure,
  io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the toolkit; the kind selects the CLI exit code.
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

/// Exit status used by the command line tool for a given error kind.
int exit_code(ErrorKind kind);

}  // namespace avgsym
