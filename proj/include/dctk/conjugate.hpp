#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dctk/ext_int.hpp"

namespace dctk {

/// Default half-width of the split window used by infimal-convolution
/// conjugates (SumOf, Restricted). Overridable per call.
inline constexpr std::int64_t kDefaultSplitWindow = 64;

class UnivariateConvex;

namespace form {

// Constructor payloads. Use the UnivariateConvex factories rather than
// building these directly; the factories validate parameters.

struct Table {
  std::int64_t k0;
  std::vector<ExtInt> values;  // phi(k0 + i); +inf only as prefix/suffix
};

struct Quadratic {
  std::int64_t a;  // phi(k) = a k^2, a >= 1
};

/// c_minus (k - k0) on [A, k0], c_plus (k - k0) on [k0, B].
struct VShape {
  std::int64_t k0, c_minus, c_plus;
  ExtInt A, B;
};

/// 0 on [a, b], c_minus (k - a) on [A, a), c_plus (k - b) on (b, B].
struct FlatBottom {
  ExtInt a, b;
  std::int64_t c_minus, c_plus;
  ExtInt A, B;
};

struct LinearPlus {
  std::int64_t c;
  std::shared_ptr<const UnivariateConvex> inner;
};

struct Shifted {
  std::int64_t k0;  // phi(k) = inner(k - k0)
  std::shared_ptr<const UnivariateConvex> inner;
};

struct Restricted {
  ExtInt A, B;
  std::shared_ptr<const UnivariateConvex> inner;
};

struct SumOf {
  std::vector<std::shared_ptr<const UnivariateConvex>> parts;
};

}  // namespace form

/// Integer-valued discrete convex function on Z with values in Z + {+inf}.
/// Immutable; copies share their inner functions.
class UnivariateConvex {
 public:
  using Form = std::variant<form::Table, form::Quadratic, form::VShape, form::FlatBottom,
                            form::LinearPlus, form::Shifted, form::Restricted, form::SumOf>;

  static UnivariateConvex table(std::int64_t k0, std::vector<ExtInt> values);
  static UnivariateConvex quadratic(std::int64_t a);
  static UnivariateConvex vshape(std::int64_t k0, std::int64_t c_minus, std::int64_t c_plus,
                                 ExtInt A = ExtInt::minus_inf(), ExtInt B = ExtInt::plus_inf());
  static UnivariateConvex flat_bottom(ExtInt a, ExtInt b, std::int64_t c_minus, std::int64_t c_plus,
                                      ExtInt A = ExtInt::minus_inf(), ExtInt B = ExtInt::plus_inf());
  static UnivariateConvex linear_plus(std::int64_t c, UnivariateConvex inner);
  static UnivariateConvex shifted(std::int64_t k0, UnivariateConvex inner);
  static UnivariateConvex restricted(ExtInt A, ExtInt B, UnivariateConvex inner);
  static UnivariateConvex sum_of(std::vector<UnivariateConvex> parts);

  // Conveniences built from the forms above.
  static UnivariateConvex zero() { return vshape(0, 0, 0); }
  static UnivariateConvex linear(std::int64_t c) { return vshape(0, c, c); }
  /// c1 (w0 - k) below w0 and c2 (k - w0) above; plain l1 deviation for c1 = c2 = 1.
  static UnivariateConvex weighted_l1(std::int64_t w0, std::int64_t c1, std::int64_t c2) {
    return vshape(w0, -c1, c2);
  }
  /// a (k - k0)^2.
  static UnivariateConvex shifted_square(std::int64_t k0, std::int64_t a) {
    return shifted(k0, quadratic(a));
  }

  const Form& form() const { return form_; }

  /// phi(k); +inf outside dom(phi).
  ExtInt operator()(std::int64_t k) const;
  ExtInt eval(std::int64_t k) const { return (*this)(k); }

  /// dom(phi) = [lo, hi], either end possibly infinite.
  std::pair<ExtInt, ExtInt> domain() const { return {dom_lo_, dom_hi_}; }
  bool in_domain(std::int64_t k) const { return dom_lo_ <= ExtInt(k) && ExtInt(k) <= dom_hi_; }
  /// Some finite point of dom(phi).
  std::int64_t anchor() const { return anchor_; }

  /// Limits of phi'(k) as k -> -inf and k -> +inf. Only meaningful on an
  /// unbounded side of the domain; integer slopes make them attained.
  ExtInt left_asymptotic_slope() const { return slope_lo_; }
  ExtInt right_asymptotic_slope() const { return slope_hi_; }

 private:
  explicit UnivariateConvex(Form f);
  void init_domain();

  Form form_;
  ExtInt dom_lo_, dom_hi_;
  std::int64_t anchor_ = 0;
  ExtInt slope_lo_, slope_hi_;
};

/// phi(k+1) - phi(k): +inf past the right end of the domain, -inf before the
/// left end, IndeterminateDifference (kIndeterminate) when both are +inf.
ExtInt right_derivative(const UnivariateConvex& phi, std::int64_t k);

/// sup_k (k ell - phi(k)), located by monotone search on phi'.
ExtInt conjugate_eval(const UnivariateConvex& phi, std::int64_t ell);

/// A k attaining conjugate_eval, or nullopt when the conjugate is +inf.
std::optional<std::int64_t> conjugate_argmax(const UnivariateConvex& phi, std::int64_t ell);

/// Closed-form conjugate. Throws kUnsupportedForm for Table (and for
/// composites whose leaves are Tables). Inf-convolutions scan the split
/// window [ell - split_window, ell + split_window] and throw
/// kInconclusiveWindow when the minimum sits on the window edge.
ExtInt conjugate_closed(const UnivariateConvex& phi, std::int64_t ell,
                        std::int64_t split_window = kDefaultSplitWindow);

struct FittingWitness {
  std::int64_t k_star;
  std::int64_t ell_star;
  ExtInt lower;  // phi'(k* - 1)
  ExtInt upper;  // phi'(k*)
};

/// phi'(k*-1) <= ell* <= phi'(k*). Throws kDomain if k* is outside dom(phi).
std::pair<bool, FittingWitness> is_fitting(const UnivariateConvex& phi, std::int64_t k_star,
                                           std::int64_t ell_star);

/// The subdifferential [phi'(k*-1), phi'(k*)].
std::pair<ExtInt, ExtInt> subdifferential_interval(const UnivariateConvex& phi, std::int64_t k_star);

/// Tabulates phi over [lo, hi] clipped to dom(phi); throws kInvalidArgument if
/// the clipped window is empty.
UnivariateConvex materialize(const UnivariateConvex& phi, std::int64_t lo, std::int64_t hi);

/// Tabulates phi* over [lo, hi]. Values there must be finite.
UnivariateConvex materialize_conjugate(const UnivariateConvex& phi, std::int64_t lo, std::int64_t hi);

/// Phi(z) = sum_s phi_s(z(s)) over an ordered ground set.
class SeparableConvex {
 public:
  SeparableConvex() = default;
  SeparableConvex(std::vector<std::string> names, std::vector<UnivariateConvex> parts);

  /// Same function on every element, elements named e1..en.
  static SeparableConvex uniform(std::size_t n, const UnivariateConvex& phi);
  static SeparableConvex square_sum(std::size_t n) { return uniform(n, UnivariateConvex::quadratic(1)); }
  static SeparableConvex linear(std::span<const std::int64_t> c);

  std::size_t size() const { return parts_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const UnivariateConvex& operator[](std::size_t s) const { return parts_[s]; }
  const std::vector<UnivariateConvex>& parts() const { return parts_; }

  ExtInt operator()(std::span<const std::int64_t> z) const;
  ExtInt eval(std::span<const std::int64_t> z) const { return (*this)(z); }

  /// True when every part is Quadratic(a = 1).
  bool is_square_sum() const;

 private:
  std::vector<std::string> names_;
  std::vector<UnivariateConvex> parts_;
};

/// Phi'(z) and Phi'(z - 1), component-wise.
std::vector<ExtInt> right_derivative(const SeparableConvex& Phi, std::span<const std::int64_t> z);
std::vector<ExtInt> left_derivative(const SeparableConvex& Phi, std::span<const std::int64_t> z);

/// Phi*(w) = sum_s phi_s*(w(s)).
ExtInt separable_conjugate(const SeparableConvex& Phi, std::span<const std::int64_t> w);

/// Phi'(z - 1) <= w <= Phi'(z); returns the first violating element, if any.
std::optional<std::size_t> first_unfitting(const SeparableConvex& Phi, std::span<const std::int64_t> z,
                                           std::span<const std::int64_t> w);

/// floor(l/2) ceil(l/2), the conjugate of k^2.
std::int64_t square_conjugate(std::int64_t ell);

}  // namespace dctk
