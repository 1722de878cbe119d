#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dctk/conjugate.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/rational.hpp"

namespace dctk {

using IntVec = std::vector<std::int64_t>;

enum class RowKind { kGeq, kEq };

struct Row {
  IntVec coeffs;
  std::int64_t rhs = 0;
  RowKind kind = RowKind::kGeq;

  friend bool operator==(const Row&, const Row&) = default;
};

/// [Q' x >= p', Q= x = p=] over an ordered ground set.
class LinearSystem {
 public:
  LinearSystem() = default;
  LinearSystem(std::vector<std::string> elements, std::vector<Row> rows);
  /// Elements named e1..en.
  static LinearSystem with_size(std::size_t n, std::vector<Row> rows);

  std::size_t dim() const { return elements_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t i) const { return rows_[i]; }

  /// row_i . z
  std::int64_t activity(std::size_t i, std::span<const std::int64_t> z) const;
  /// row_i . z - p_i; zero for EQ rows at feasible points.
  std::int64_t slack(std::size_t i, std::span<const std::int64_t> z) const {
    return checked::sub(activity(i, z), rows_[i].rhs);
  }
  bool contains(std::span<const std::int64_t> z) const;
  /// y Q as a vector over S.
  IntVec transpose_apply(std::span<const std::int64_t> y) const;
  /// y p.
  std::int64_t rhs_dot(std::span<const std::int64_t> y) const;

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  std::vector<std::string> elements_;
  std::vector<Row> rows_;
};

/// Finite integer box lo <= x <= hi used for enumeration.
struct Window {
  IntVec lo, hi;

  static Window uniform(std::size_t n, std::int64_t lo, std::int64_t hi) {
    return Window{IntVec(n, lo), IntVec(n, hi)};
  }
  std::size_t dim() const { return lo.size(); }
  /// Number of integer points; throws kOverflow past 2^62.
  std::uint64_t count() const;
  /// Lexicographic rank decoding; first coordinate most significant.
  IntVec point(std::uint64_t index) const;
  bool contains(std::span<const std::int64_t> z) const;
  void validate() const;

  friend bool operator==(const Window&, const Window&) = default;
};

/// "[lo..hi,lo..hi,...]"
std::string window_text(const Window& w);

/// Visits the integer points of `win` in lexicographic order until `f`
/// returns false.
template <class F>
void for_each_point(const Window& win, F&& f) {
  win.validate();
  IntVec z = win.lo;
  const std::size_t n = z.size();
  while (true) {
    if (!f(static_cast<const IntVec&>(z))) return;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (z[i] < win.hi[i]) {
        ++z[i];
        break;
      }
      z[i] = win.lo[i];
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

/// Row multipliers y, one per row of a LinearSystem.
using DualVector = IntVec;

bool sign_feasible(const LinearSystem& sys, std::span<const std::int64_t> y);
std::int64_t support_size(std::span<const std::int64_t> y);

/// Both sides of a min-max formula plus the witnesses that tie them together.
/// dual_value <= primal_value always; "equality" is only set when both sides
/// were actually evaluated and agree.
struct MinMaxReport {
  ExtInt primal_value = ExtInt::plus_inf();
  ExtInt dual_value = ExtInt::minus_inf();
  IntVec primal_witness;
  std::optional<DualVector> dual_rows;  // y
  std::optional<IntVec> dual_cost;      // w (w1 for M2-splits)
  std::optional<IntVec> dual_cost2;     // w2 for M2-splits
  bool equality = false;
  bool verified = false;
  std::int64_t support_size = 0;
  /// Some maximizer within the searched bound has at most 2|S| non-zeros.
  bool small_support_found = false;
  std::map<std::string, std::string> bounds_used;
  std::map<std::string, ExtInt> extra_values;
  std::vector<std::string> notes;
};

enum class LpStatus { kOptimal, kUnbounded, kInfeasible };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;                // meaningful when kOptimal
  std::vector<Rational> argmin;  // lexicographically least optimal vertex

  /// -inf / +inf / value, with a fractional optimum rounded up (the integer
  /// minimum over the same set can only be larger).
  ExtInt ceil_value() const;
};

/// Exact LP oracle for min{wx : x in R} by exhaustive basic-solution
/// enumeration. The lineality space is split off first, so the remaining
/// pointed part has vertices whenever R is non-empty; unboundedness is
/// read off the extreme rays of its recession cone.
class LpOracle {
 public:
  /// Throws kDegenerateSystem when the basis enumeration would exceed
  /// `max_bases` candidate bases.
  explicit LpOracle(const LinearSystem& sys, std::uint64_t max_bases = 20'000'000);

  bool feasible() const { return !vertices_.empty(); }
  LpResult minimize(std::span<const std::int64_t> w) const;

  /// Vertices of R intersected with the orthogonal complement of its
  /// lineality space, in lexicographic order.
  std::vector<std::vector<Rational>> vertices() const;
  const std::vector<IntVec>& rays() const { return rays_; }
  const std::vector<IntVec>& lineality() const { return lineality_; }
  bool integral_vertices() const;

 private:
  struct Vertex {
    IntVec num;
    std::int64_t den;
  };
  std::size_t n_;
  std::vector<Vertex> vertices_;
  std::vector<IntVec> rays_;
  std::vector<IntVec> lineality_;
};

std::vector<IntVec> enumerate_integer_points(const LinearSystem& sys, const Window& win);

LpResult lp_min(const LinearSystem& sys, std::span<const std::int64_t> w);

bool check_compatibility(const LinearSystem& sys, std::span<const std::int64_t> z,
                         std::span<const std::int64_t> y, const SeparableConvex& Phi);

/// Checks primal feasibility, sign-feasibility, complementary slackness and
/// compatibility, then evaluates Phi(z) against yp - Phi*(yQ).
MinMaxReport verify_certificate(const LinearSystem& sys, std::span<const std::int64_t> z,
                                std::span<const std::int64_t> y, const SeparableConvex& Phi);

/// Windowed min of Phi over the integer points of R; lexicographically least
/// argmin.
MinMaxReport minimize_bruteforce(const LinearSystem& sys, const SeparableConvex& Phi, const Window& win);

inline constexpr std::int64_t kDefaultYBound = 6;
inline constexpr std::int64_t kDefaultWBound = 6;

/// max{yp - Phi*(yQ)} over sign-feasible integer y with |y(i)| <= y_bound,
/// lexicographically least maximizer. `pruning_points` are optional integer
/// points of R used for weak-duality pruning; they never change the result.
MinMaxReport dual_search_bruteforce(const LinearSystem& sys, const SeparableConvex& Phi,
                                    std::int64_t y_bound = kDefaultYBound,
                                    std::span<const IntVec> pruning_points = {});

/// max{mu_R(w) - Phi*(w)} over integer w in the window.
MinMaxReport mu_form_dual_search(const LinearSystem& sys, const SeparableConvex& Phi, const Window& w_window);
MinMaxReport mu_form_dual_search(const LpOracle& oracle, const SeparableConvex& Phi, const Window& w_window);

struct FeasibilityResult {
  bool holds = true;
  /// First violating (S-, S+) as bitmasks over S.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> violating_pair;
  ExtInt lhs, rhs;  // l(S-) and u(S+) of the violating pair
};

/// Scans every disjoint (S-, S+) with z* + chi(S+) - chi(S-) in R and tests
/// l(S-) <= u(S+). `ell` entries may be -inf, `u` entries +inf.
FeasibilityResult feasibility_condition(const LinearSystem& sys, std::span<const std::int64_t> z_star,
                                        std::span<const ExtInt> ell, std::span<const ExtInt> u);

/// First integer w (lexicographic) in w_window within [ell, u] making z* an
/// LP minimizer.
std::optional<IntVec> find_weight_in_box(const LinearSystem& sys, std::span<const std::int64_t> z_star,
                                         std::span<const ExtInt> ell, std::span<const ExtInt> u,
                                         const Window& w_window);
std::optional<IntVec> find_weight_in_box(const LpOracle& oracle, std::span<const std::int64_t> z_star,
                                         std::span<const ExtInt> ell, std::span<const ExtInt> u,
                                         const Window& w_window);

/// {x : Qx >= kp} (both row kinds).
LinearSystem dilation(const LinearSystem& sys, std::int64_t k);

struct BoxProbeResult {
  bool box_integer = true;
  std::vector<Rational> fractional_vertex;  // empty when box_integer
  IntVec box_lo, box_hi;                    // the box that exposes it
};

/// Searches every integral box inside `win` for a fractional vertex of
/// R intersected with the box.
BoxProbeResult probe_box_integer(const LinearSystem& sys, const Window& win);

}  // namespace dctk
