#include "dctk/mconvex.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "dctk/parallel.hpp"

namespace dctk {

namespace {

bool has(std::uint32_t mask, std::size_t s) { return (mask >> s) & 1u; }

// z(Z) for every Z, built incrementally over the masks.
std::vector<std::int64_t> all_subset_sums(std::span<const std::int64_t> z) {
  const std::uint32_t count = std::uint32_t{1} << z.size();
  std::vector<std::int64_t> sum(count, 0);
  for (std::uint32_t m = 1; m < count; ++m)
    sum[m] = checked::add(sum[m & (m - 1)], z[static_cast<std::size_t>(std::countr_zero(m))]);
  return sum;
}

// T(s) for every s.
std::vector<std::uint32_t> all_smallest_tight_sets(const SupermodularFn& p, std::span<const std::int64_t> z) {
  const auto sums = all_subset_sums(z);
  std::vector<std::uint32_t> T(p.n(), p.full());
  for (std::uint32_t m = 1; m < p.full(); ++m) {
    if (!p(m).finite() || sums[m] != p(m).value()) continue;
    for (std::size_t s = 0; s < p.n(); ++s)
      if (has(m, s)) T[s] &= m;
  }
  return T;
}

}  // namespace

std::optional<std::pair<std::uint32_t, std::uint32_t>> supermodular_violation(std::size_t n,
                                                                                std::span<const ExtInt> table) {
  const std::uint32_t count = std::uint32_t{1} << n;
  if (n <= 12) {
    for (std::uint32_t x = 0; x < count; ++x)
      for (std::uint32_t y = x + 1; y < count; ++y)
        if (table[x & y] + table[x | y] < table[x] + table[y]) return {{x, y}};
    return std::nullopt;
  }
  for (std::uint32_t x = 0; x < count; ++x)
    for (std::size_t s = 0; s < n; ++s) {
      if (has(x, s)) continue;
      for (std::size_t t = s + 1; t < n; ++t) {
        if (has(x, t)) continue;
        std::uint32_t xs = x | (1u << s), xt = x | (1u << t);
        if (table[x] + table[xs | xt] < table[xs] + table[xt]) return {{xs, xt}};
      }
    }
  return std::nullopt;
}

SupermodularFn::SupermodularFn(std::size_t n, std::vector<ExtInt> table) : n_(n), table_(std::move(table)) {
  if (n < 1 || n > kMaxGroundSet) fail(ErrorCode::kInvalidArgument, "supermodular function needs 1 <= n <= 20");
  if (table_.size() != (std::size_t{1} << n)) fail(ErrorCode::kInvalidArgument, "table needs 2^n entries");
  if (table_[0] != ExtInt(0)) fail(ErrorCode::kInvalidArgument, "p(emptyset) must be 0");
  if (!table_[full()].finite()) fail(ErrorCode::kInvalidArgument, "p(S) must be finite");
  for (const auto& v : table_)
    if (v.is_plus_inf()) fail(ErrorCode::kInvalidArgument, "p takes +inf");
  if (auto bad = supermodular_violation(n, table_))
    fail(ErrorCode::kInvalidArgument, "supermodular inequality fails for X = " + std::to_string(bad->first) +
                                          ", Y = " + std::to_string(bad->second));
}

std::vector<ExtInt> complement(const SupermodularFn& p) {
  std::vector<ExtInt> out(p.table().size());
  for (std::uint32_t x = 0; x <= p.full(); ++x) out[x] = p(p.full()) - p(p.full() & ~x);
  return out;
}

LinearSystem to_system(const SupermodularFn& p) {
  std::vector<Row> rows;
  auto row_for = [&](std::uint32_t m) {
    IntVec c(p.n(), 0);
    for (std::size_t s = 0; s < p.n(); ++s) c[s] = has(m, s) ? 1 : 0;
    return c;
  };
  for (std::uint32_t m = 1; m < p.full(); ++m)
    if (p(m).finite()) rows.push_back({row_for(m), p(m).value(), RowKind::kGeq});
  rows.push_back({row_for(p.full()), p(p.full()).value(), RowKind::kEq});
  return LinearSystem::with_size(p.n(), std::move(rows));
}

std::int64_t subset_sum(std::span<const std::int64_t> z, std::uint32_t mask) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (has(mask, i)) s = checked::add(s, z[i]);
  return s;
}

bool member(const SupermodularFn& p, std::span<const std::int64_t> z) {
  if (z.size() != p.n()) fail(ErrorCode::kInvalidArgument, "vector length differs from n");
  const auto sums = all_subset_sums(z);
  if (sums[p.full()] != p(p.full()).value()) return false;
  for (std::uint32_t m = 1; m < p.full(); ++m)
    if (ExtInt(sums[m]) < p(m)) return false;
  return true;
}

bool is_tight(const SupermodularFn& p, std::span<const std::int64_t> z, std::uint32_t mask) {
  return p(mask).finite() && subset_sum(z, mask) == p(mask).value();
}

std::vector<std::size_t> decreasing_order(std::span<const std::int64_t> w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

ExtInt lovasz_extension(const SupermodularFn& p, std::span<const std::int64_t> w) {
  if (w.size() != p.n()) fail(ErrorCode::kInvalidArgument, "weight length differs from n");
  const auto order = decreasing_order(w);
  const std::size_t n = p.n();
  ExtInt total = checked::mul(p(p.full()).value(), w[order[n - 1]]);
  std::uint32_t prefix = 0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    prefix |= 1u << order[j];
    std::int64_t gap = checked::sub(w[order[j]], w[order[j + 1]]);
    if (gap == 0) continue;
    if (p(prefix).is_minus_inf()) return ExtInt::minus_inf();
    total += ExtInt(checked::mul(gap, p(prefix).value()));
  }
  return total;
}

IntVec greedy_min(const SupermodularFn& p, std::span<const std::int64_t> w) {
  if (lovasz_extension(p, w).is_minus_inf()) fail(ErrorCode::kUnbounded, "p-hat(w) = -inf");
  const auto order = decreasing_order(w);
  const std::size_t n = p.n();
  std::vector<std::size_t> chain;
  std::uint32_t prefix = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && w[order[j]] == w[order[i]]) ++j;
    std::vector<std::size_t> block(order.begin() + static_cast<std::ptrdiff_t>(i),
                                   order.begin() + static_cast<std::ptrdiff_t>(j));
    std::sort(block.begin(), block.end());
    // Lexicographically first ordering of the block with finite prefixes.
    std::vector<std::uint32_t> dead;
    std::vector<std::size_t> picked;
    auto dfs = [&](auto&& self, std::uint32_t cur) -> bool {
      if (picked.size() == block.size()) return true;
      if (std::find(dead.begin(), dead.end(), cur) != dead.end()) return false;
      for (auto s : block) {
        if (has(cur, s)) continue;
        std::uint32_t next = cur | (1u << s);
        if (!p(next).finite()) continue;
        picked.push_back(s);
        if (self(self, next)) return true;
        picked.pop_back();
      }
      dead.push_back(cur);
      return false;
    };
    if (!dfs(dfs, prefix))
      fail(ErrorCode::kUnsupportedForm, "no chain of finite p-values refines the weight order");
    for (auto s : picked) {
      chain.push_back(s);
      prefix |= 1u << s;
    }
    i = j;
  }
  IntVec z(n, 0);
  std::uint32_t before = 0;
  for (auto s : chain) {
    std::uint32_t after = before | (1u << s);
    z[s] = checked::sub(p(after).value(), p(before).value());
    before = after;
  }
  return z;
}

std::vector<std::uint32_t> strict_top_sets(std::span<const std::int64_t> w) {
  std::vector<std::uint32_t> out;
  const auto order = decreasing_order(w);
  std::uint32_t prefix = 0;
  for (std::size_t j = 0; j + 1 < order.size(); ++j) {
    prefix |= 1u << order[j];
    if (w[order[j]] != w[order[j + 1]]) out.push_back(prefix);
  }
  return out;
}

std::uint32_t smallest_tight_set(const SupermodularFn& p, std::span<const std::int64_t> z, std::size_t s) {
  if (z.size() != p.n() || s >= p.n()) fail(ErrorCode::kInvalidArgument, "element or vector out of range");
  return all_smallest_tight_sets(p, z)[s];
}

Window base_window(const SupermodularFn& p, std::int64_t fallback) {
  Window win{IntVec(p.n()), IntVec(p.n())};
  const ExtInt total = p(p.full());
  for (std::size_t s = 0; s < p.n(); ++s) {
    ExtInt lo = p(1u << s);
    ExtInt rest = p(p.full() & ~(1u << s));
    win.lo[s] = lo.finite() ? lo.value() : -fallback;
    win.hi[s] = rest.finite() ? (total - rest).value() : fallback;
  }
  return win;
}

namespace {

// Phi decreases forever along chi_t - chi_s, a recession direction of B'(p).
bool decreasing_exchange_ray(const SupermodularFn& p, const SeparableConvex& Phi, std::size_t s, std::size_t t) {
  for (std::uint32_t m = 1; m < p.full(); ++m)
    if (p(m).finite() && has(m, s) && !has(m, t)) return false;
  if (Phi[s].domain().first.finite() || Phi[t].domain().second.finite()) return false;
  return Phi[t].right_asymptotic_slope() - Phi[s].left_asymptotic_slope() < ExtInt(0);
}

IntVec descend(const SupermodularFn& p, const SeparableConvex& Phi, IntVec z, std::uint64_t budget) {
  const std::size_t n = p.n();
  for (std::uint64_t it = 0;; ++it) {
    if (it == budget) fail(ErrorCode::kInconclusiveWindow, "exchange descent exceeded its iteration budget");
    const auto T = all_smallest_tight_sets(p, z);
    ExtInt best = 0;
    std::optional<std::pair<std::size_t, std::size_t>> move;
    for (std::size_t s = 0; s < n; ++s) {
      ExtInt down = -right_derivative(Phi[s], z[s] - 1);
      if (down.is_plus_inf()) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (t == s || !has(T[s], t)) continue;
        ExtInt delta = down + right_derivative(Phi[t], z[t]);
        if (delta < best) {
          best = delta;
          move = {{s, t}};
        }
      }
    }
    if (!move) return z;
    --z[move->first];
    ++z[move->second];
  }
}

}  // namespace

IntVec minimize_separable(const SupermodularFn& p, const SeparableConvex& Phi, DescentOptions opt) {
  if (Phi.size() != p.n()) fail(ErrorCode::kInvalidArgument, "Phi dimension differs from n");
  const std::size_t n = p.n();
  IntVec zero(n, 0);
  IntVec z = greedy_min(p, zero);
  if (!Phi(z).finite()) {
    std::vector<UnivariateConvex> dist;
    for (std::size_t s = 0; s < n; ++s) {
      auto [lo, hi] = Phi[s].domain();
      dist.push_back(UnivariateConvex::flat_bottom(lo, hi, -1, 1));
    }
    SeparableConvex Psi(Phi.names(), std::move(dist));
    z = descend(p, Psi, z, opt.max_iterations);
    if (Psi(z) != ExtInt(0)) fail(ErrorCode::kInfeasible, "no integer base lies in dom(Phi)");
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (s != t && decreasing_exchange_ray(p, Phi, s, t))
        fail(ErrorCode::kUnbounded, "Phi decreases without bound along e" + std::to_string(t + 1) + " - e" +
                                        std::to_string(s + 1));
  return descend(p, Phi, z, opt.max_iterations);
}

DualCertificate dual_certificate(const SupermodularFn& p, const SeparableConvex& Phi,
                                 std::span<const std::int64_t> z_star) {
  if (z_star.size() != p.n() || Phi.size() != p.n()) fail(ErrorCode::kInvalidArgument, "dimension differs from n");
  if (!member(p, z_star)) fail(ErrorCode::kNotPrimalFeasible, "z* is not an integer base");
  const auto T = all_smallest_tight_sets(p, z_star);
  DualCertificate cert;
  for (std::size_t s = 0; s < p.n(); ++s) {
    ExtInt m = ExtInt::plus_inf();
    for (std::size_t t = 0; t < p.n(); ++t)
      if (has(T[s], t)) m = min(m, right_derivative(Phi[t], z_star[t]));
    if (m.is_plus_inf()) {
      cert.substituted.push_back(s);
      m = right_derivative(Phi[s], z_star[s] - 1);
      if (!m.finite()) m = 0;
    }
    if (m.is_minus_inf()) fail(ErrorCode::kDomain, "phi' is -inf inside the tight set");
    cert.w.push_back(m.value());
  }
  return cert;
}

ExtInt square_sum_dual(const SupermodularFn& p, std::span<const std::int64_t> w) {
  ExtInt v = lovasz_extension(p, w);
  for (auto x : w) v -= ExtInt(square_conjugate(x));
  return v;
}

MinMaxReport verify_mconvex_optimality(const SupermodularFn& p, const SeparableConvex& Phi,
                                       std::span<const std::int64_t> z_star, std::span<const std::int64_t> w_star) {
  if (z_star.size() != p.n() || w_star.size() != p.n() || Phi.size() != p.n())
    fail(ErrorCode::kInvalidArgument, "dimension differs from n");
  if (!member(p, z_star)) fail(ErrorCode::kNotPrimalFeasible, "z* is not an integer base");
  for (auto x : strict_top_sets(w_star))
    if (!is_tight(p, z_star, x))
      throw CriteriaViolated("top-set", x, "z(X) = " + std::to_string(subset_sum(z_star, x)) + ", p(X) = " +
                                                p(x).to_string());
  if (auto s = first_unfitting(Phi, z_star, w_star)) {
    auto [lo, hi] = subdifferential_interval(Phi[*s], z_star[*s]);
    throw CriteriaViolated("fitting", static_cast<long long>(*s),
                           "w = " + std::to_string(w_star[*s]) + " outside [" + lo.to_string() + ", " +
                               hi.to_string() + "]");
  }
  MinMaxReport rep;
  rep.primal_value = Phi(z_star);
  rep.primal_witness.assign(z_star.begin(), z_star.end());
  rep.dual_cost = IntVec(w_star.begin(), w_star.end());
  rep.extra_values["lovasz"] = lovasz_extension(p, w_star);
  rep.dual_value = rep.extra_values["lovasz"] - separable_conjugate(Phi, w_star);
  if (Phi.is_square_sum()) rep.extra_values["square_sum_dual"] = square_sum_dual(p, w_star);
  rep.equality = rep.primal_value == rep.dual_value;
  rep.verified = rep.equality;
  return rep;
}

MinMaxReport m2_minimize_and_split(const SupermodularFn& p1, const SupermodularFn& p2, const SeparableConvex& Phi,
                                   const Window& w_window) {
  const std::size_t n = p1.n();
  if (p2.n() != n || Phi.size() != n || w_window.dim() != n)
    fail(ErrorCode::kInvalidArgument, "dimension differs between p1, p2, Phi and window");
  w_window.validate();

  Window box = base_window(p1);
  Window b2 = base_window(p2);
  for (std::size_t s = 0; s < n; ++s) {
    box.lo[s] = std::max(box.lo[s], b2.lo[s]);
    box.hi[s] = std::min(box.hi[s], b2.hi[s]);
    if (box.lo[s] > box.hi[s]) fail(ErrorCode::kEmptyIntersection, "B1 and B2 have no common integer point");
  }
  MinMaxReport rep;
  bool any = false;
  for_each_point(box, [&](const IntVec& z) {
    if (!member(p1, z) || !member(p2, z)) return true;
    any = true;
    ExtInt v = Phi(z);
    if (v < rep.primal_value) {
      rep.primal_value = v;
      rep.primal_witness = z;
    }
    return true;
  });
  if (!any) fail(ErrorCode::kEmptyIntersection, "B1 and B2 have no common integer point");

  const std::uint64_t count = w_window.count();
  std::vector<IntVec> pts(count);
  std::vector<ExtInt> hat1(count), hat2(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    pts[i] = w_window.point(i);
    hat1[i] = lovasz_extension(p1, pts[i]);
    hat2[i] = lovasz_extension(p2, pts[i]);
  }
  std::vector<std::vector<ExtInt>> conj(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::int64_t l = 2 * w_window.lo[s]; l <= 2 * w_window.hi[s]; ++l) conj[s].push_back(conjugate_eval(Phi[s], l));

  auto value = [&](std::uint64_t i, std::uint64_t j) {
    ExtInt c = 0;
    for (std::size_t s = 0; s < n; ++s) {
      c += conj[s][static_cast<std::size_t>(pts[i][s] + pts[j][s] - 2 * w_window.lo[s])];
      if (c.is_plus_inf()) return ExtInt::minus_inf();
    }
    return hat1[i] + hat2[j] - c;
  };
  auto row_best = [&](std::uint64_t i) {
    std::pair<ExtInt, std::uint64_t> best{ExtInt::minus_inf(), 0};
    for (std::uint64_t j = 0; j < count; ++j) {
      ExtInt v = value(i, j);
      if (best.first < v || j == 0) best = {v, j};
    }
    return best;
  };
  auto top = parallel_argmax<ExtInt>(count, [&](std::uint64_t i) -> std::optional<ExtInt> { return row_best(i).first; });
  const std::uint64_t i = top->second, j = row_best(i).second;
  rep.dual_value = top->first;
  rep.dual_cost = pts[i];
  rep.dual_cost2 = pts[j];
  if (Phi.is_square_sum()) {
    ExtInt sq = hat1[i] + hat2[j];
    for (std::size_t s = 0; s < n; ++s) sq -= ExtInt(square_conjugate(pts[i][s] + pts[j][s]));
    rep.extra_values["square_sum_dual"] = sq;
  }
  rep.bounds_used["w_window"] = window_text(w_window);
  rep.bounds_used["primal_box"] = "bounding box of B1 and B2";
  rep.equality = rep.primal_value == rep.dual_value;
  rep.verified = rep.equality;
  if (!rep.equality) rep.notes.push_back("dual value is the maximum within the w window");
  return rep;
}

}  // namespace dctk
