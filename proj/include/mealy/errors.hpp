#pragma once

#include <stdexcept>
#include <string>

namespace mealy {

/// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  input_domain,        // out-of-range state or letter
  capability,          // operation not defined for this class of automaton
  size,                // resource cap exceeded
  parse,               // malformed document or word
  invariant,           // constructor-level invariant violated (bad id_state, ...)
  precondition,        // missing prerequisite (e.g. no designated identity state)
  sampling_exhausted,  // rejection sampler gave up
  internal,            // two independent computations disagree
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit code used by the command-line tool for an error of this kind.
int exit_code(ErrorKind kind) noexcept;

}  // namespace mealy
