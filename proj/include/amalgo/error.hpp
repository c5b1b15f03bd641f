#pragma once

#include <stdexcept>
#include <string>

namespace amalgo {

enum class ErrorCode {
  UnknownVertex,
  BudgetExceeded,
  InvalidSpec,
  IdentificationBudget,
  FactorNotFinite,
  MissingBase,
  NotATree,
  TooFewEnds,
  NotMultiEnded,
  MismatchedEndpoint,
  AdhesionCoverage,
  NamespaceInconsistency,
  NotInfinitelyManyEnds,
  EndClassUndetermined,
  Parse,
  Internal,
};

const char* to_string(ErrorCode code);

// Every failure the library reports is an amalgo::Error carrying a stable code;
// the CLI maps these onto exit status 2 and a JSON error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace amalgo
