#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brng {

/// Process exit codes used by the CLI; every error type maps to one.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 1,
  kRegime = 2,
  kStatistical = 3,
  kNumerical = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::kNumerical)
      : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::kConfig) {}
};

/// Invalid argument or physically meaningless parameter set.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what, ExitCode::kConfig) {}
};

class BelowExcitation : public Error {
 public:
  explicit BelowExcitation(const std::string& what) : Error(what, ExitCode::kRegime) {}
};

class ScanBudgetExhausted : public Error {
 public:
  explicit ScanBudgetExhausted(const std::string& what) : Error(what, ExitCode::kNumerical) {}
};

class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, std::uint64_t step)
      : Error(what, ExitCode::kNumerical), step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

class StepSizeViolation : public Error {
 public:
  explicit StepSizeViolation(const std::string& what) : Error(what, ExitCode::kNumerical) {}
};

class NotBimodal : public Error {
 public:
  explicit NotBimodal(const std::string& what) : Error(what, ExitCode::kStatistical) {}
};

class FewerThanMinTransitions : public Error {
 public:
  FewerThanMinTransitions(const std::string& what, std::size_t found)
      : Error(what, ExitCode::kStatistical), found_(found) {}
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

class BracketInvalid : public Error {
 public:
  explicit BracketInvalid(const std::string& what) : Error(what, ExitCode::kRegime) {}
};

class UnbalancedLifetimes : public Error {
 public:
  explicit UnbalancedLifetimes(const std::string& what) : Error(what, ExitCode::kStatistical) {}
};

class MinLength : public Error {
 public:
  MinLength(const std::string& what, std::size_t required)
      : Error(what, ExitCode::kStatistical), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(what, ExitCode::kStatistical) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, ExitCode::kConfig) {}
};

}  // namespace brng
