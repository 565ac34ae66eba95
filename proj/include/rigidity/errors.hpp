#pragma once

#include <stdexcept>
#include <string>

namespace rigidity {

enum class ErrorKind {
  validation,       // bad input, violated precondition
  nonconvergence,   // an iterative solver gave up
  infeasible,       // target outside the achievable set
  escape,           // ray leaves the table
  grazing,          // tangential collision
  degenerate,       // degenerate geometry or data
  capability,       // request above a configured ceiling
  internal,         // invariant violated, a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  const char* kind_name() const;
  // CLI exit code: 2 validation, 3 numerical failure, 4 infeasible.
  int exit_code() const;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::validation, what);
}

}  // namespace rigidity
