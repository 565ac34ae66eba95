#include "rigidity/errors.hpp"

namespace rigidity {

const char* Error::kind_name() const {
  switch (kind_) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::nonconvergence: return "nonconvergence";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::escape: return "escape";
    case ErrorKind::grazing: return "grazing";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::capability: return "capability";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

int Error::exit_code() const {
  switch (kind_) {
    case ErrorKind::validation:
    case ErrorKind::capability: return 2;
    case ErrorKind::infeasible: return 4;
    default: return 3;
  }
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace rigidity
