#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Process exit codes shared by every subcommand.
enum class ExitCode : int {
  kOk = 0,
  kAcceptanceFailure = 1,
  kInvalidInput = 2,
  kNotConverged = 3,
  kNumericalAbort = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Bad parameters, mismatched grids, unreadable files.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ExitCode::kInvalidInput, what) {}
};

/// NaN or overflow during an iteration or time step.
class NumericalAbort : public Error {
 public:
  NumericalAbort(const std::string& what, long index)
      : Error(ExitCode::kNumericalAbort,
              what + " (at index " + std::to_string(index) + ")"),
        index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

}  // namespace fraclab
