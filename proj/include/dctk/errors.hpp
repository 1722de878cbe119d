#pragma once

#include <stdexcept>
#include <string>

namespace dctk {

/// Error categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorCode {
  kIndeterminate,      // +inf + -inf, or +inf - +inf
  kOverflow,           // checked 64/128-bit arithmetic overflowed
  kInvalidArgument,    // malformed constructor input or size mismatch
  kDomain,             // point outside dom(phi)
  kUnsupportedForm,    // no closed-form conjugate for this constructor
  kInconclusiveWindow, // a bounded search cannot certify its optimum
  kDegenerateSystem,   // basic-solution enumeration cannot certify the LP
  kNotPrimalFeasible,
  kNotSignFeasible,
  kCriteriaViolated,
  kInfeasible,
  kUnbounded,
  kEmptyIntersection,
  kNoFeasibleWeight,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by certificate verifiers. `criterion` names the failed condition
/// ("slackness", "compatibility", "top-set", "fitting", ...) and `index` the
/// offending row, element or subset bitmask.
class CriteriaViolated : public Error {
 public:
  CriteriaViolated(std::string criterion, long long index, const std::string& detail)
      : Error(ErrorCode::kCriteriaViolated,
              "criteria violated: " + criterion + " at " + std::to_string(index) +
                  (detail.empty() ? "" : " (" + detail + ")")),
        criterion_(std::move(criterion)),
        index_(index) {}

  const std::string& criterion() const noexcept { return criterion_; }
  long long index() const noexcept { return index_; }

 private:
  std::string criterion_;
  long long index_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dctk
