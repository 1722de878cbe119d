#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dctk/conjugate.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/polyhedron.hpp"

namespace dctk {

/// Nodes by name, arcs as (tail, head) node indices; parallel arcs and loops allowed.
struct Digraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_arcs() const { return arcs.size(); }
  std::size_t node_index(const std::string& name) const;
  void validate() const;

  friend bool operator==(const Digraph&, const Digraph&) = default;
};

struct FlowInstance {
  Digraph graph;
  IntVec m;                   // per node; inflow - outflow = m(v)
  std::vector<ExtInt> lower;  // per arc, may be -inf
  std::vector<ExtInt> upper;  // per arc, may be +inf
  SeparableConvex cost;       // per arc

  /// Square-sum cost with bounds f = 0, g = +inf.
  static FlowInstance nonneg_square_sum(Digraph d, IntVec m);
  /// Checks sizes, f <= g and m(V) = 0.
  void validate() const;
};

/// Pi(v) per node; tension of uv is pi(v) - pi(u).
using Potential = IntVec;

/// One row per node: +1 on entering arcs, -1 on leaving arcs, 0 on loops.
std::vector<IntVec> incidence_matrix(const Digraph& d);
IntVec tension(const Digraph& d, std::span<const std::int64_t> pi);
/// inflow - outflow at every node.
IntVec net_inflow(const Digraph& d, std::span<const std::int64_t> x);

/// The flow polyhedron as a system: node rows Q_D x = m, then x >= f and
/// -x >= -g for the finite bounds.
LinearSystem flow_system(const FlowInstance& inst);
/// [Q_D; I] x >= (m; 0) with node rows as inequalities, plus -x >= -g for
/// finite upper bounds.
LinearSystem embedding_system(const FlowInstance& inst);

/// Bounds intersected with dom(phi_a).
std::pair<std::vector<ExtInt>, std::vector<ExtInt>> effective_bounds(const FlowInstance& inst);

struct HoffmanResult {
  bool feasible = true;
  std::optional<std::uint32_t> violating_set;  // bitmask over nodes
  ExtInt demand, capacity;                     // m(X) and f(in(X)) - g(out(X))
};

/// Scans every X of V for m(X) >= f(in(X)) - g(out(X)). With f = 0, g = +inf
/// this is m(X) >= 0 whenever no arc leaves X.
HoffmanResult hoffman_feasible(const FlowInstance& inst);
HoffmanResult hoffman_feasible(const Digraph& d, std::span<const std::int64_t> m, std::span<const ExtInt> lower,
                               std::span<const ExtInt> upper);

struct FlowResult {
  IntVec flow;
  ExtInt cost;
  Potential pi_raw;      // shortest distances from a virtual source (all <= 0)
  Potential pi_shifted;  // pi_raw shifted so that min pi = 0
  std::vector<std::string> notes;
};

/// Cycle canceling with unit pushes on residual costs phi'(x) forward and
/// -phi'(x-1) backward, then the lexicographically least optimal flow.
/// Throws kInfeasible or kUnbounded.
FlowResult min_convex_cost_flow(const FlowInstance& inst);

enum class FlowVariant { kNonneg, kFree };

/// m pi - sum floor(t/2) ceil(t/2) with t = max(tension, 0) (kNonneg) or the
/// raw tension (kFree).
ExtInt flow_dual_value(const Digraph& d, std::span<const std::int64_t> m, std::span<const std::int64_t> pi,
                       FlowVariant variant);
/// m pi - sum_a conj(phi_a restricted to [f_a, g_a])(tension).
ExtInt flow_dual_value(const FlowInstance& inst, std::span<const std::int64_t> pi);

bool is_feasible_flow(const FlowInstance& inst, std::span<const std::int64_t> x);

/// Compares cost(x) against the dual value of pi. equality = false reports
/// the gap; throws kNotPrimalFeasible when x is not a feasible flow.
MinMaxReport certify_flow(const FlowInstance& inst, std::span<const std::int64_t> x, std::span<const std::int64_t> pi);
/// certify_flow for square-sum instances; kInvalidArgument otherwise.
MinMaxReport certify_flow_square_sum(const FlowInstance& inst, std::span<const std::int64_t> x,
                                     std::span<const std::int64_t> pi);

}  // namespace dctk
