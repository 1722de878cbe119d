#pragma once

#include <cstdint>
#include <compare>
#include <ostream>
#include <string>

#include "dctk/errors.hpp"

namespace dctk {

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::kOverflow, "integer overflow in addition");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::kOverflow, "integer overflow in subtraction");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::kOverflow, "integer overflow in multiplication");
  return r;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

// Floor and ceiling division for b > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return neg(floor_div(neg(a), b));
}

}  // namespace checked

/// Integer extended by -inf and +inf. Sums of opposite infinities are a hard
/// error, never a silently chosen value.
class ExtInt {
 public:
  enum class Kind : std::uint8_t { kMinusInf, kFinite, kPlusInf };

  constexpr ExtInt() = default;
  constexpr ExtInt(std::int64_t v) : kind_(Kind::kFinite), value_(v) {}  // NOLINT

  static constexpr ExtInt plus_inf() { return ExtInt(Kind::kPlusInf); }
  static constexpr ExtInt minus_inf() { return ExtInt(Kind::kMinusInf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_plus_inf() const { return kind_ == Kind::kPlusInf; }
  constexpr bool is_minus_inf() const { return kind_ == Kind::kMinusInf; }

  /// Throws kDomain for infinite values.
  std::int64_t value() const {
    if (!finite()) fail(ErrorCode::kDomain, "value() on infinite ExtInt");
    return value_;
  }

  friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::kFinite || a.value_ == b.value_);
  }

  friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != Kind::kFinite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  ExtInt operator-() const {
    switch (kind_) {
      case Kind::kPlusInf: return minus_inf();
      case Kind::kMinusInf: return plus_inf();
      default: return ExtInt(checked::neg(value_));
    }
  }

  friend ExtInt operator+(const ExtInt& a, const ExtInt& b) {
    if (a.finite() && b.finite()) return ExtInt(checked::add(a.value_, b.value_));
    if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()))
      fail(ErrorCode::kIndeterminate, "indeterminate sum of +inf and -inf");
    return a.finite() ? b : a;
  }

  friend ExtInt operator-(const ExtInt& a, const ExtInt& b) { return a + (-b); }

  /// Scalar multiple. 0 * inf is indeterminate; callers with a "0 times
  /// anything is 0" convention must branch before multiplying.
  friend ExtInt operator*(std::int64_t c, const ExtInt& a) {
    if (a.finite()) return ExtInt(checked::mul(c, a.value_));
    if (c == 0) fail(ErrorCode::kIndeterminate, "0 * infinity");
    return c > 0 ? a : -a;
  }

  ExtInt& operator+=(const ExtInt& o) { return *this = *this + o; }
  ExtInt& operator-=(const ExtInt& o) { return *this = *this - o; }

  std::string to_string() const;

 private:
  constexpr explicit ExtInt(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  std::int64_t value_ = 0;
};

inline ExtInt min(const ExtInt& a, const ExtInt& b) { return b < a ? b : a; }
inline ExtInt max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtInt& v);

}  // namespace dctk
