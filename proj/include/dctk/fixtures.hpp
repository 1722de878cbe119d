#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "dctk/conjugate.hpp"
#include "dctk/mconvex.hpp"
#include "dctk/netflow.hpp"
#include "dctk/polyhedron.hpp"

namespace dctk::fixtures {

/// mt19937_64 with a modulo-based range draw, so streams are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}
  std::uint64_t seed() const { return seed_; }
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin(std::uint64_t num, std::uint64_t den) { return gen_() % den < num; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// p({1}) = p({2}) = 0, p(S) = 2.
SupermodularFn p2();
/// p({1}) = 1, p({2}) = 0, p(S) = 2.
SupermodularFn p2b();
/// [x1 >= 0, x2 >= 0, x1 + x2 = 2].
LinearSystem p2sys();
/// Two parallel arcs s -> t, m(s) = -2, m(t) = 2, square-sum, f = 0, g = +inf.
FlowInstance d2();
/// Facet system of the convex hull of (1,1,1,0,0,0), (1,0,0,1,0,0),
/// (0,1,0,0,1,0), (0,0,1,0,0,1).
LinearSystem s3();

/// Sum of c * max(0, |X & A| - k) terms plus a modular part, with every value
/// in [lo, hi].
SupermodularFn random_supermodular(Rng& rng, std::size_t n, std::int64_t lo = -5, std::int64_t hi = 5);
/// random_supermodular restricted to the ideals of a random partial order
/// (-inf elsewhere).
SupermodularFn random_ring_supermodular(Rng& rng, std::size_t n);

/// Random instance over every constructor with dom inside [-8, 8] and values
/// in [-50, 50].
UnivariateConvex random_univariate(Rng& rng);

enum class CostFamily { kSquareSum, kWeightedSquare, kShiftedSquare, kL1 };
SeparableConvex random_cost(Rng& rng, std::size_t n, CostFamily family);

/// Sum of (k - c_s)^2 with c = center + a uniform offset in [-spread, spread].
SeparableConvex centered_square_cost(Rng& rng, std::span<const std::int64_t> center, std::int64_t spread = 1);

/// 2..max_nodes nodes, 1..max_arcs arcs, f = 0, g in [1, cap], square-sum,
/// m taken from a random flow so the instance is feasible.
FlowInstance random_flow(Rng& rng, std::size_t max_nodes = 4, std::size_t max_arcs = 6, std::int64_t cap = 3);

}  // namespace dctk::fixtures
