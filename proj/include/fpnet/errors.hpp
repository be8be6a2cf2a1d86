#pragma once

#include <stdexcept>
#include <string>

namespace fpnet {

// Base for failures of a numerical computation (as opposed to bad usage).
// `code()` is a stable machine-readable tag used by the CLI error line.
class ComputationError : public std::runtime_error {
 public:
  ComputationError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class SingularMatrix : public ComputationError {
 public:
  explicit SingularMatrix(const std::string& what) : ComputationError("SingularMatrix", what) {}
};

class NoConvergence : public ComputationError {
 public:
  explicit NoConvergence(const std::string& what) : ComputationError("NoConvergence", what) {}
};

class StepUnderflow : public ComputationError {
 public:
  explicit StepUnderflow(const std::string& what) : ComputationError("StepUnderflow", what) {}
};

class DataExhausted : public ComputationError {
 public:
  explicit DataExhausted(const std::string& what) : ComputationError("DataExhausted", what) {}
};

class AllZeroResponse : public ComputationError {
 public:
  explicit AllZeroResponse(const std::string& what) : ComputationError("AllZeroResponse", what) {}
};

// Shape errors are programming/usage errors, not numerical ones.
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class EmptyBatch : public std::invalid_argument {
 public:
  explicit EmptyBatch(const std::string& what) : std::invalid_argument(what) {}
};

class EmptyReport : public std::invalid_argument {
 public:
  explicit EmptyReport(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fpnet
