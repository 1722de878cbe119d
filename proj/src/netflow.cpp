#include "dctk/netflow.hpp"

#include <algorithm>
#include <deque>

namespace dctk {

std::size_t Digraph::node_index(const std::string& name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it == nodes.end()) fail(ErrorCode::kInvalidArgument, "unknown node '" + name + "'");
  return static_cast<std::size_t>(it - nodes.begin());
}

void Digraph::validate() const {
  if (nodes.empty()) fail(ErrorCode::kInvalidArgument, "digraph needs at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) fail(ErrorCode::kInvalidArgument, "duplicate node '" + nodes[i] + "'");
  for (auto [u, v] : arcs)
    if (u >= nodes.size() || v >= nodes.size()) fail(ErrorCode::kInvalidArgument, "arc endpoint out of range");
}

FlowInstance FlowInstance::nonneg_square_sum(Digraph d, IntVec m) {
  const std::size_t na = d.num_arcs();
  FlowInstance inst{std::move(d), std::move(m), std::vector<ExtInt>(na, ExtInt(0)),
                    std::vector<ExtInt>(na, ExtInt::plus_inf()), SeparableConvex::square_sum(na)};
  inst.validate();
  return inst;
}

void FlowInstance::validate() const {
  graph.validate();
  const std::size_t na = graph.num_arcs();
  if (m.size() != graph.num_nodes()) fail(ErrorCode::kInvalidArgument, "m needs one entry per node");
  if (lower.size() != na || upper.size() != na || cost.size() != na)
    fail(ErrorCode::kInvalidArgument, "bounds and cost need one entry per arc");
  for (std::size_t a = 0; a < na; ++a) {
    if (lower[a].is_plus_inf() || upper[a].is_minus_inf() || upper[a] < lower[a])
      fail(ErrorCode::kInvalidArgument, "arc " + std::to_string(a + 1) + " needs f <= g");
  }
  std::int64_t total = 0;
  for (auto v : m) total = checked::add(total, v);
  if (total != 0) fail(ErrorCode::kInvalidArgument, "m(V) must be 0");
}

std::vector<IntVec> incidence_matrix(const Digraph& d) {
  std::vector<IntVec> q(d.num_nodes(), IntVec(d.num_arcs(), 0));
  for (std::size_t a = 0; a < d.num_arcs(); ++a) {
    auto [u, v] = d.arcs[a];
    if (u == v) continue;
    q[v][a] = 1;
    q[u][a] = -1;
  }
  return q;
}

IntVec tension(const Digraph& d, std::span<const std::int64_t> pi) {
  if (pi.size() != d.num_nodes()) fail(ErrorCode::kInvalidArgument, "potential needs one entry per node");
  IntVec t;
  for (auto [u, v] : d.arcs) t.push_back(checked::sub(pi[v], pi[u]));
  return t;
}

IntVec net_inflow(const Digraph& d, std::span<const std::int64_t> x) {
  if (x.size() != d.num_arcs()) fail(ErrorCode::kInvalidArgument, "flow needs one entry per arc");
  IntVec r(d.num_nodes(), 0);
  for (std::size_t a = 0; a < d.num_arcs(); ++a) {
    auto [u, v] = d.arcs[a];
    r[v] = checked::add(r[v], x[a]);
    r[u] = checked::sub(r[u], x[a]);
  }
  return r;
}

namespace {

std::vector<Row> bound_rows(const FlowInstance& inst) {
  std::vector<Row> rows;
  const std::size_t na = inst.graph.num_arcs();
  for (std::size_t a = 0; a < na; ++a)
    if (inst.lower[a].finite()) {
      IntVec c(na, 0);
      c[a] = 1;
      rows.push_back({c, inst.lower[a].value(), RowKind::kGeq});
    }
  for (std::size_t a = 0; a < na; ++a)
    if (inst.upper[a].finite()) {
      IntVec c(na, 0);
      c[a] = -1;
      rows.push_back({c, -inst.upper[a].value(), RowKind::kGeq});
    }
  return rows;
}

LinearSystem node_system(const FlowInstance& inst, RowKind kind) {
  inst.validate();
  std::vector<Row> rows;
  auto q = incidence_matrix(inst.graph);
  for (std::size_t v = 0; v < q.size(); ++v) rows.push_back({q[v], inst.m[v], kind});
  for (auto& r : bound_rows(inst)) rows.push_back(std::move(r));
  return LinearSystem::with_size(inst.graph.num_arcs(), std::move(rows));
}

}  // namespace

LinearSystem flow_system(const FlowInstance& inst) { return node_system(inst, RowKind::kEq); }
LinearSystem embedding_system(const FlowInstance& inst) { return node_system(inst, RowKind::kGeq); }

std::pair<std::vector<ExtInt>, std::vector<ExtInt>> effective_bounds(const FlowInstance& inst) {
  std::vector<ExtInt> lo, hi;
  for (std::size_t a = 0; a < inst.graph.num_arcs(); ++a) {
    auto [dl, dh] = inst.cost[a].domain();
    lo.push_back(max(inst.lower[a], dl));
    hi.push_back(min(inst.upper[a], dh));
  }
  return {lo, hi};
}

HoffmanResult hoffman_feasible(const FlowInstance& inst) {
  inst.validate();
  return hoffman_feasible(inst.graph, inst.m, inst.lower, inst.upper);
}

HoffmanResult hoffman_feasible(const Digraph& d, std::span<const std::int64_t> m, std::span<const ExtInt> lower,
                               std::span<const ExtInt> upper) {
  const std::size_t n = d.num_nodes();
  if (n > 20) fail(ErrorCode::kInvalidArgument, "Hoffman scan limited to |V| <= 20");
  HoffmanResult res;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    std::int64_t demand = 0;
    for (std::size_t v = 0; v < n; ++v)
      if ((x >> v) & 1u) demand = checked::add(demand, m[v]);
    ExtInt in_lo = 0, out_hi = 0;
    for (std::size_t a = 0; a < d.num_arcs(); ++a) {
      bool tail_in = (x >> d.arcs[a].first) & 1u, head_in = (x >> d.arcs[a].second) & 1u;
      if (head_in && !tail_in) in_lo += lower[a];
      if (tail_in && !head_in) out_hi += upper[a];
    }
    ExtInt cap = in_lo - out_hi;
    if (ExtInt(demand) < cap) {
      res.feasible = false;
      res.violating_set = x;
      res.demand = demand;
      res.capacity = cap;
      return res;
    }
  }
  return res;
}

namespace {

constexpr std::int64_t kBig = std::int64_t{1} << 60;

std::int64_t clamp_ext(std::int64_t k, const ExtInt& lo, const ExtInt& hi) {
  if (ExtInt(k) < lo) return lo.value();
  if (hi < ExtInt(k)) return hi.value();
  return k;
}

std::int64_t room(const ExtInt& bound, std::int64_t x) {
  if (!bound.finite()) return kBig;
  return bound.value() > x ? bound.value() - x : x - bound.value();
}

// Some integral flow within [lo, hi], by augmenting from deficit to excess
// nodes along residual paths.
std::optional<IntVec> find_feasible(const Digraph& d, std::span<const std::int64_t> m, std::span<const ExtInt> lo,
                                    std::span<const ExtInt> hi) {
  const std::size_t n = d.num_nodes(), na = d.num_arcs();
  IntVec x(na);
  for (std::size_t a = 0; a < na; ++a) {
    if (hi[a] < lo[a]) return std::nullopt;
    x[a] = clamp_ext(0, lo[a], hi[a]);
  }
  IntVec r = net_inflow(d, x);
  for (std::size_t v = 0; v < n; ++v) r[v] = checked::sub(m[v], r[v]);
  while (true) {
    // Multi-source BFS from nodes that must send more.
    std::vector<long long> via(n, -2);  // arc index * 2 + direction, -1 for a source
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v)
      if (r[v] < 0) {
        via[v] = -1;
        queue.push_back(v);
      }
    if (queue.empty()) return x;
    std::optional<std::size_t> target;
    while (!queue.empty() && !target) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t a = 0; a < na && !target; ++a) {
        auto [p, q] = d.arcs[a];
        if (p == u && hi[a] > ExtInt(x[a]) && via[q] == -2) {
          via[q] = static_cast<long long>(2 * a);
          queue.push_back(q);
          if (r[q] > 0) target = q;
        }
        if (!target && q == u && lo[a] < ExtInt(x[a]) && via[p] == -2) {
          via[p] = static_cast<long long>(2 * a + 1);
          queue.push_back(p);
          if (r[p] > 0) target = p;
        }
      }
    }
    if (!target) return std::nullopt;
    std::int64_t amount = r[*target];
    std::size_t v = *target;
    std::vector<long long> path;
    while (via[v] != -1) {
      long long e = via[v];
      std::size_t a = static_cast<std::size_t>(e / 2);
      bool fwd = e % 2 == 0;
      amount = std::min(amount, fwd ? room(hi[a], x[a]) : room(lo[a], x[a]));
      path.push_back(e);
      v = fwd ? d.arcs[a].first : d.arcs[a].second;
    }
    amount = std::min(amount, -r[v]);
    for (long long e : path) {
      std::size_t a = static_cast<std::size_t>(e / 2);
      x[a] = e % 2 == 0 ? checked::add(x[a], amount) : checked::sub(x[a], amount);
    }
    r[*target] -= amount;
    r[v] += amount;
  }
}

struct ResidualArc {
  std::size_t from, to, arc;
  bool forward;
  std::int64_t cost;
};

std::vector<ResidualArc> residual(const FlowInstance& inst, std::span<const std::int64_t> x,
                                  std::span<const ExtInt> lo, std::span<const ExtInt> hi) {
  std::vector<ResidualArc> out;
  for (std::size_t a = 0; a < inst.graph.num_arcs(); ++a) {
    auto [u, v] = inst.graph.arcs[a];
    if (ExtInt(x[a]) < hi[a]) out.push_back({u, v, a, true, right_derivative(inst.cost[a], x[a]).value()});
    if (lo[a] < ExtInt(x[a])) out.push_back({v, u, a, false, (-right_derivative(inst.cost[a], x[a] - 1)).value()});
  }
  return out;
}

// Bellman-Ford from a virtual source joined to every node at cost 0.
// Returns a negative cycle as residual-arc indices, or fills dist.
std::optional<std::vector<std::size_t>> bellman_ford(std::size_t n, const std::vector<ResidualArc>& arcs,
                                                     std::vector<std::int64_t>& dist) {
  dist.assign(n, 0);
  std::vector<long long> pred(n, -1);
  long long touched = -1;
  for (std::size_t it = 0; it <= n; ++it) {
    touched = -1;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto& e = arcs[k];
      std::int64_t cand = checked::add(dist[e.from], e.cost);
      if (cand < dist[e.to]) {
        dist[e.to] = cand;
        pred[e.to] = static_cast<long long>(k);
        touched = static_cast<long long>(e.to);
      }
    }
    if (touched < 0) return std::nullopt;
  }
  auto v = static_cast<std::size_t>(touched);
  for (std::size_t i = 0; i < n; ++i) v = arcs[static_cast<std::size_t>(pred[v])].from;
  std::vector<std::size_t> cycle;
  std::size_t u = v;
  do {
    std::size_t k = static_cast<std::size_t>(pred[u]);
    cycle.push_back(k);
    u = arcs[k].from;
  } while (u != v);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

// Negative cycle among arc directions of unbounded capacity, weighted by the
// asymptotic slopes.
bool has_unbounded_cycle(const FlowInstance& inst, std::span<const ExtInt> lo, std::span<const ExtInt> hi) {
  std::vector<ResidualArc> arcs;
  for (std::size_t a = 0; a < inst.graph.num_arcs(); ++a) {
    auto [u, v] = inst.graph.arcs[a];
    ExtInt up = inst.cost[a].right_asymptotic_slope(), down = -inst.cost[a].left_asymptotic_slope();
    if (hi[a].is_plus_inf() && up.finite()) arcs.push_back({u, v, a, true, up.value()});
    if (lo[a].is_minus_inf() && down.finite()) arcs.push_back({v, u, a, false, down.value()});
  }
  std::vector<std::int64_t> dist;
  return bellman_ford(inst.graph.num_nodes(), arcs, dist).has_value();
}

// Smallest k with g(k) true, given g(start) true and g monotone (false below
// the answer). nullopt when g stays true for 2^40 steps.
template <class G>
std::optional<std::int64_t> lowest_true(std::int64_t start, const ExtInt& floor_bound, G&& g) {
  std::int64_t good = start, step = 1;
  std::int64_t bad;
  while (true) {
    std::int64_t cand = start - step;
    if (ExtInt(cand) < floor_bound) {
      bad = floor_bound.value() - 1;
      break;
    }
    if (!g(cand)) {
      bad = cand;
      break;
    }
    good = cand;
    if (step > (std::int64_t{1} << 40)) return std::nullopt;
    step *= 2;
  }
  while (good - bad > 1) {
    std::int64_t mid = bad + (good - bad) / 2;
    (g(mid) ? good : bad) = mid;
  }
  return good;
}

template <class G>
std::optional<std::int64_t> highest_true(std::int64_t start, const ExtInt& ceil_bound, G&& g) {
  auto r = lowest_true(-start, -ceil_bound, [&](std::int64_t k) { return g(-k); });
  if (!r) return std::nullopt;
  return -*r;
}

}  // namespace

bool is_feasible_flow(const FlowInstance& inst, std::span<const std::int64_t> x) {
  if (x.size() != inst.graph.num_arcs()) return false;
  for (std::size_t a = 0; a < x.size(); ++a)
    if (ExtInt(x[a]) < inst.lower[a] || inst.upper[a] < ExtInt(x[a])) return false;
  return net_inflow(inst.graph, x) == inst.m;
}

FlowResult min_convex_cost_flow(const FlowInstance& inst) {
  inst.validate();
  const std::size_t n = inst.graph.num_nodes(), na = inst.graph.num_arcs();
  auto [lo, hi] = effective_bounds(inst);
  auto start = find_feasible(inst.graph, inst.m, lo, hi);
  if (!start) fail(ErrorCode::kInfeasible, "no integral m-flow within the bounds");
  if (has_unbounded_cycle(inst, lo, hi))
    fail(ErrorCode::kUnbounded, "a cycle of unbounded capacity has negative asymptotic cost");

  IntVec x = *start;
  std::vector<std::int64_t> dist;
  for (std::uint64_t it = 0;; ++it) {
    if (it == 50'000'000) fail(ErrorCode::kInconclusiveWindow, "cycle canceling exceeded its budget");
    auto arcs = residual(inst, x, lo, hi);
    auto cycle = bellman_ford(n, arcs, dist);
    if (!cycle) break;
    for (auto k : *cycle) x[arcs[k].arc] += arcs[k].forward ? 1 : -1;
  }

  FlowResult res;
  res.pi_raw = dist;
  std::int64_t lowest = *std::min_element(dist.begin(), dist.end());
  for (auto v : dist) res.pi_shifted.push_back(v - lowest);

  // Optimal flows are exactly the feasible flows fitting the tension of pi.
  const IntVec t = tension(inst.graph, res.pi_raw);
  std::vector<UnivariateConvex> g;
  std::vector<ExtInt> fit_lo(na), fit_hi(na);
  for (std::size_t a = 0; a < na; ++a) {
    g.push_back(UnivariateConvex::restricted(lo[a], hi[a], inst.cost[a]));
    auto up = [&](std::int64_t k) { return ExtInt(t[a]) <= right_derivative(g[a], k); };
    auto down = [&](std::int64_t k) { return right_derivative(g[a], k - 1) <= ExtInt(t[a]); };
    auto l = lowest_true(x[a], lo[a], up);
    auto h = highest_true(x[a], hi[a], down);
    fit_lo[a] = l ? ExtInt(*l) : ExtInt::minus_inf();
    fit_hi[a] = h ? ExtInt(*h) : ExtInt::plus_inf();
  }
  for (std::size_t a = 0; a < na; ++a) {
    auto feasible_at = [&](std::int64_t v) {
      auto blo = fit_lo, bhi = fit_hi;
      blo[a] = bhi[a] = v;
      return find_feasible(inst.graph, inst.m, blo, bhi).has_value();
    };
    auto best = lowest_true(x[a], fit_lo[a], feasible_at);
    if (!best) {
      res.notes.push_back("arc " + std::to_string(a + 1) + " has no least optimal value; kept " +
                          std::to_string(x[a]));
      best = x[a];
    }
    fit_lo[a] = fit_hi[a] = *best;
    x = *find_feasible(inst.graph, inst.m, fit_lo, fit_hi);
  }
  res.flow = x;
  res.cost = inst.cost(x);
  return res;
}

ExtInt flow_dual_value(const Digraph& d, std::span<const std::int64_t> m, std::span<const std::int64_t> pi,
                       FlowVariant variant) {
  if (m.size() != d.num_nodes()) fail(ErrorCode::kInvalidArgument, "m needs one entry per node");
  std::int64_t v = 0;
  for (std::size_t i = 0; i < m.size(); ++i) v = checked::add(v, checked::mul(m[i], pi[i]));
  for (auto t : tension(d, pi)) v = checked::sub(v, square_conjugate(variant == FlowVariant::kNonneg ? std::max<std::int64_t>(t, 0) : t));
  return v;
}

ExtInt flow_dual_value(const FlowInstance& inst, std::span<const std::int64_t> pi) {
  inst.validate();
  std::int64_t mp = 0;
  for (std::size_t i = 0; i < inst.m.size(); ++i) mp = checked::add(mp, checked::mul(inst.m[i], pi[i]));
  ExtInt v = mp;
  const IntVec t = tension(inst.graph, pi);
  for (std::size_t a = 0; a < t.size(); ++a)
    v -= conjugate_eval(UnivariateConvex::restricted(inst.lower[a], inst.upper[a], inst.cost[a]), t[a]);
  return v;
}

MinMaxReport certify_flow(const FlowInstance& inst, std::span<const std::int64_t> x, std::span<const std::int64_t> pi) {
  inst.validate();
  if (pi.size() != inst.graph.num_nodes()) fail(ErrorCode::kInvalidArgument, "potential needs one entry per node");
  if (!is_feasible_flow(inst, x)) fail(ErrorCode::kNotPrimalFeasible, "x is not a feasible integral m-flow");
  MinMaxReport rep;
  rep.primal_value = inst.cost(x);
  rep.primal_witness.assign(x.begin(), x.end());
  rep.dual_value = flow_dual_value(inst, pi);
  rep.dual_rows = IntVec(pi.begin(), pi.end());
  rep.dual_cost = tension(inst.graph, pi);
  if (inst.cost.is_square_sum()) {
    auto all = [&](const std::vector<ExtInt>& v, ExtInt want) {
      return std::all_of(v.begin(), v.end(), [&](const ExtInt& e) { return e == want; });
    };
    if (all(inst.lower, ExtInt(0)) && all(inst.upper, ExtInt::plus_inf()))
      rep.extra_values["nonneg_formula"] = flow_dual_value(inst.graph, inst.m, pi, FlowVariant::kNonneg);
    if (all(inst.lower, ExtInt::minus_inf()) && all(inst.upper, ExtInt::plus_inf()))
      rep.extra_values["free_formula"] = flow_dual_value(inst.graph, inst.m, pi, FlowVariant::kFree);
  }
  rep.equality = rep.primal_value == rep.dual_value;
  rep.verified = rep.equality;
  if (!rep.equality && rep.primal_value.finite() && rep.dual_value.finite())
    rep.extra_values["gap"] = rep.primal_value - rep.dual_value;
  return rep;
}

MinMaxReport certify_flow_square_sum(const FlowInstance& inst, std::span<const std::int64_t> x,
                                     std::span<const std::int64_t> pi) {
  if (!inst.cost.is_square_sum()) fail(ErrorCode::kInvalidArgument, "cost is not the square-sum");
  return certify_flow(inst, x, pi);
}

}  // namespace dctk
