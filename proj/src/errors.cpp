#include "mealy/errors.hpp"

namespace mealy {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input_domain: return "input-domain";
    case ErrorKind::capability: return "capability";
    case ErrorKind::size: return "size";
    case ErrorKind::parse: return "parse";
    case ErrorKind::invariant: return "invariant";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::sampling_exhausted: return "sampling-exhausted";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::input_domain: return 2;
    case ErrorKind::invariant: return 3;
    case ErrorKind::capability:
    case ErrorKind::precondition: return 4;
    case ErrorKind::size:
    case ErrorKind::sampling_exhausted: return 5;
    case ErrorKind::internal: return 1;
  }
  return 1;
}

}  // namespace mealy
