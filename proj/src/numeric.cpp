#include <limits>
#include <sstream>

#include "dctk/errors.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/rational.hpp"

namespace dctk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndeterminate: return "Indeterminate";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kUnsupportedForm: return "UnsupportedForm";
    case ErrorCode::kInconclusiveWindow: return "InconclusiveWindow";
    case ErrorCode::kDegenerateSystem: return "DegenerateSystem";
    case ErrorCode::kNotPrimalFeasible: return "NotPrimalFeasible";
    case ErrorCode::kNotSignFeasible: return "NotSignFeasible";
    case ErrorCode::kCriteriaViolated: return "CriteriaViolated";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kNoFeasibleWeight: return "NoFeasibleWeight";
  }
  return "Unknown";
}

std::string ExtInt::to_string() const {
  switch (kind_) {
    case Kind::kPlusInf: return "+inf";
    case Kind::kMinusInf: return "-inf";
    default: return std::to_string(value_);
  }
}

std::ostream& operator<<(std::ostream& os, const ExtInt& v) { return os << v.to_string(); }

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0) fail(ErrorCode::kInvalidArgument, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits64(n) || !fits64(d)) fail(ErrorCode::kOverflow, "rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::int64_t Rational::floor() const { return checked::floor_div(num_, den_); }
std::int64_t Rational::ceil() const { return checked::ceil_div(num_, den_); }

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace dctk
