// Error taxonomy shared by the library and the CLI.  Every failure carries a
// code; the CLI maps codes to process exit categories (validation = 1,
// numerical guard = 2, internal invariant = 3).
#pragma once

#include <stdexcept>
#include <string>

namespace ancestree {

enum class Errc {
  InvalidArgument,    // bad user input (sizes, ranges, flag combinations)
  MutationRequired,   // operation needs u > 0
  SelectionRequired,  // operation needs s > 0
  UseClosedForm,      // u = 0, s > 0: the coefficient solve is degenerate,
                      // callers must use h_no_mutation instead
  StepTooLarge,       // ODE step fails the stability bound
  TooManyLines,       // assignment enumeration refused (> 2^20 cases)
  PrecisionLoss,      // inversion conditioning exceeds the error budget
  EventCapExceeded,   // simulator hit its per-replica event cap
  PathExplosion,      // path enumeration exceeded the configured cap
  ReplicaTimeout,     // forward Monte Carlo replica failed to absorb in time
  NotMonotone,        // coefficient vector is not a valid tail sequence
  InternalError,      // invariant violation inside the library
};

const char* errc_name(Errc c);

// 1 = validation, 2 = numerical guard, 3 = internal invariant violation.
int errc_exit_category(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ancestree
