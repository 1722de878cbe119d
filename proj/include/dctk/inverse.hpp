#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dctk/conjugate.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/polyhedron.hpp"

namespace dctk {

/// Rows of the parent tight at z0 with zero right-hand sides: tight GEQ rows
/// and every EQ row.
struct TangentCone {
  IntVec base_point;
  LinearSystem cone_system;
  std::vector<std::size_t> parent_rows;
};

struct InverseInstance {
  LinearSystem parent;
  std::vector<IntVec> targets;
  SeparableConvex deviation;
};

/// Throws kNotPrimalFeasible if z0 is not an integer point of R.
TangentCone tangent_cone(const LinearSystem& sys, std::span<const std::int64_t> z0);

/// min{wx : x in R} = w z0, exactly.
bool is_minimizer(const LinearSystem& sys, std::span<const std::int64_t> z0, std::span<const std::int64_t> w);
bool is_minimizer(const LpOracle& oracle, std::span<const std::int64_t> z0, std::span<const std::int64_t> w);

/// w z0 <= w z for every integer point z of R inside `win`.
bool is_integer_minimizer(const LinearSystem& sys, std::span<const std::int64_t> z0, std::span<const std::int64_t> w,
                          const Window& win);

struct InverseResult {
  IntVec w;
  ExtInt value;
};

/// Lexicographically least w in the window minimizing the deviation among
/// those making z0 an LP minimizer. Throws kNoFeasibleWeight.
InverseResult inverse_minimize(const LinearSystem& sys, std::span<const std::int64_t> z0,
                               const SeparableConvex& deviation, const Window& w_window);

/// Product of the effective domains of the conjugates, with +-fallback on
/// unbounded sides.
Window conjugate_domain_window(const SeparableConvex& deviation, std::int64_t fallback = 6);

/// max{-Phi*(z) : z in the cone, z in the window}. When w_star is given the
/// report also checks w* z* = 0 and Phi'(w* - 1) <= z* <= Phi'(w*), and
/// evaluates Phi(w*) as the primal side.
MinMaxReport inverse_dual_search(const TangentCone& cone, const SeparableConvex& deviation, const Window& z_window,
                                 std::optional<std::span<const std::int64_t>> w_star = std::nullopt);

/// (k-dilation of sys, z_1 + ... + z_k).
std::pair<LinearSystem, IntVec> dilate_targets(const LinearSystem& sys, std::span<const IntVec> targets);

// Deviation builders.
SeparableConvex l1_deviation(std::span<const std::int64_t> w0);
SeparableConvex weighted_l1_deviation(std::span<const std::int64_t> w0, std::span<const std::int64_t> c1,
                                      std::span<const std::int64_t> c2);
/// 0 on [lo, hi], slopes -c1 below and c2 above.
SeparableConvex box_deviation(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi,
                              std::span<const std::int64_t> c1, std::span<const std::int64_t> c2);
/// c (w - w0)^2.
SeparableConvex weighted_square_deviation(std::span<const std::int64_t> w0, std::span<const std::int64_t> c);

}  // namespace dctk
