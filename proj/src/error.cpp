#include "avgsym/error.hpp"

namespace avgsym {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::size_limit: return "size_limit";
    case ErrorKind::capability: return "capability";
    case ErrorKind::group_mismatch: return "group_mismatch";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::degenerate_rep: return "degenerate_rep";
    case ErrorKind::search_failure: return "search_failure";
    case ErrorKind::training_failure: return "training_failure";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical:
    case ErrorKind::training_failure: return 2;
    case ErrorKind::search_failure: return 3;
    default: return 1;
  }
}

}  // namespace avgsym
