#pragma once

#include <stdexcept>
#include <string>

namespace qbnf {

enum class ErrorCode {
  ParseError,
  NonRealResult,
  NotInWPlus,
  NotHomogeneous,
  BadQuadraticPart,
  NonRealInput,
  EngineInconsistency,
  NegativeDiscriminant,
  DegenerateA3,
  SingularStage,
  ZeroScale,
  WrongSign,
  ConfigError,
  WindowError,
  FitError,
  VerificationFailure,
};

const char* error_name(ErrorCode code);

// Process exit code for the CLI: 2 parse or config, 3 degenerate math input,
// 4 verification failure, 5 internal inconsistency.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qbnf
