#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dctk/conjugate.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/polyhedron.hpp"

namespace dctk {

inline constexpr std::size_t kMaxGroundSet = 20;

/// Supermodular set function on 2^S as a dense table indexed by bitmask
/// (bit s set means element s is in the subset). p(emptyset) = 0, p(S) is
/// finite, other values may be -inf. Never +inf.
class SupermodularFn {
 public:
  SupermodularFn() = default;
  /// Validates normalization and supermodularity (all pairs for n <= 12,
  /// the local two-element form above that).
  SupermodularFn(std::size_t n, std::vector<ExtInt> table);

  std::size_t n() const { return n_; }
  std::uint32_t full() const { return (std::uint32_t{1} << n_) - 1; }
  const ExtInt& operator()(std::uint32_t mask) const { return table_[mask]; }
  const std::vector<ExtInt>& table() const { return table_; }

  friend bool operator==(const SupermodularFn&, const SupermodularFn&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<ExtInt> table_;
};

/// Checks the supermodular inequality; returns the first violating (X, Y).
std::optional<std::pair<std::uint32_t, std::uint32_t>> supermodular_violation(std::size_t n,
                                                                                std::span<const ExtInt> table);

/// p-bar(X) = p(S) - p(S - X), a submodular table (+inf where p(S - X) = -inf).
std::vector<ExtInt> complement(const SupermodularFn& p);

/// GEQ rows x(Z) >= p(Z) for proper nonempty Z with finite p(Z), in bitmask
/// order, then the EQ row x(S) = p(S).
LinearSystem to_system(const SupermodularFn& p);

/// z(Z) summed over the elements of Z.
std::int64_t subset_sum(std::span<const std::int64_t> z, std::uint32_t mask);

bool member(const SupermodularFn& p, std::span<const std::int64_t> z);
bool is_tight(const SupermodularFn& p, std::span<const std::int64_t> z, std::uint32_t mask);

/// Elements sorted by decreasing w, ties by index.
std::vector<std::size_t> decreasing_order(std::span<const std::int64_t> w);

/// p-hat(w); -inf when a positive weight gap meets a -inf prefix set.
ExtInt lovasz_extension(const SupermodularFn& p, std::span<const std::int64_t> w);

/// Greedy base along the decreasing-w order. Within a block of equal
/// weights the order is refined to the lexicographically first one whose
/// prefix sets all have finite p. Throws kUnbounded if p-hat(w) = -inf and
/// kUnsupportedForm if no finite refinement exists.
IntVec greedy_min(const SupermodularFn& p, std::span<const std::int64_t> w);

/// Strict w-top sets {s : w(s) >= beta} for every weight value beta except
/// the smallest, as bitmasks.
std::vector<std::uint32_t> strict_top_sets(std::span<const std::int64_t> w);

/// T(s): intersection of all z-tight sets containing s.
std::uint32_t smallest_tight_set(const SupermodularFn& p, std::span<const std::int64_t> z, std::size_t s);

/// Bounding box of B'(p): p({s}) <= x(s) <= p(S) - p(S - s). Infinite sides
/// fall back to +-fallback around zero.
Window base_window(const SupermodularFn& p, std::int64_t fallback = 64);

struct DescentOptions {
  std::uint64_t max_iterations = 1'000'000;
};

/// Steepest single-exchange descent from greedy_min(p, 0). Throws kUnbounded
/// when some exchange direction is a recession direction of B'(p) along which
/// Phi decreases forever, kInfeasible when no base lies in dom(Phi).
IntVec minimize_separable(const SupermodularFn& p, const SeparableConvex& Phi, DescentOptions opt = {});

struct DualCertificate {
  IntVec w;
  /// Elements where every slope in T(s) was +inf and the left slope was used.
  std::vector<std::size_t> substituted;
};

/// w*(s) = min{phi_t'(z*(t)) : t in T(s)}.
DualCertificate dual_certificate(const SupermodularFn& p, const SeparableConvex& Phi,
                                 std::span<const std::int64_t> z_star);

/// Checks that every strict w*-top set is z*-tight and that
/// Phi'(z* - 1) <= w* <= Phi'(z*), then evaluates p-hat(w*) - Phi*(w*).
/// Throws CriteriaViolated ("top-set" with the bitmask, "fitting" with the
/// element) or kNotPrimalFeasible.
MinMaxReport verify_mconvex_optimality(const SupermodularFn& p, const SeparableConvex& Phi,
                                       std::span<const std::int64_t> z_star, std::span<const std::int64_t> w_star);

/// p-hat(w) - sum floor(w/2) ceil(w/2).
ExtInt square_sum_dual(const SupermodularFn& p, std::span<const std::int64_t> w);

/// Primal by enumeration of the common integer bases; dual by exhaustive
/// search of (w1, w2) over w_window^2. Throws kEmptyIntersection.
MinMaxReport m2_minimize_and_split(const SupermodularFn& p1, const SupermodularFn& p2, const SeparableConvex& Phi,
                                   const Window& w_window);

}  // namespace dctk
