#include "dctk/fixtures.hpp"

#include <algorithm>
#include <bit>

namespace dctk::fixtures {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(ErrorCode::kInvalidArgument, "empty range");
  auto width = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(gen_() % width);
}

SupermodularFn p2() { return SupermodularFn(2, {0, 0, 0, 2}); }
SupermodularFn p2b() { return SupermodularFn(2, {0, 1, 0, 2}); }

LinearSystem p2sys() {
  return LinearSystem::with_size(2, {{{1, 0}, 0, RowKind::kGeq}, {{0, 1}, 0, RowKind::kGeq}, {{1, 1}, 2, RowKind::kEq}});
}

FlowInstance d2() {
  Digraph d{{"s", "t"}, {{0, 1}, {0, 1}}};
  return FlowInstance::nonneg_square_sum(std::move(d), {-2, 2});
}

LinearSystem s3() {
  return LinearSystem::with_size(6, {
                                        {{1, -1, 0, -1, 1, 0}, 0, RowKind::kEq},
                                        {{1, 0, -1, -1, 0, 1}, 0, RowKind::kEq},
                                        {{1, 0, 0, 0, 1, 1}, 1, RowKind::kEq},
                                        {{1, 0, 0, -1, 0, 0}, 0, RowKind::kGeq},
                                        {{0, 0, 0, 1, 0, 0}, 0, RowKind::kGeq},
                                        {{0, 0, 0, 0, 1, 0}, 0, RowKind::kGeq},
                                        {{0, 0, 0, 0, 0, 1}, 0, RowKind::kGeq},
                                    });
}

SupermodularFn random_supermodular(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  const std::uint32_t count = std::uint32_t{1} << n;
  for (int attempt = 0;; ++attempt) {
    std::vector<std::int64_t> t(count, 0);
    const int pieces = attempt < 400 ? static_cast<int>(rng.uniform(1, 4)) : 0;
    for (int i = 0; i < pieces; ++i) {
      auto a = static_cast<std::uint32_t>(rng.uniform(1, count - 1));
      if (std::popcount(a) < 2) a = count - 1;
      std::int64_t c = rng.uniform(1, 3);
      std::int64_t k = rng.uniform(1, std::popcount(a) - 1);
      for (std::uint32_t x = 0; x < count; ++x) t[x] += c * std::max<std::int64_t>(0, std::popcount(x & a) - k);
    }
    for (std::size_t s = 0; s < n; ++s) {
      std::int64_t m = rng.uniform(-2, 2);
      for (std::uint32_t x = 0; x < count; ++x)
        if ((x >> s) & 1u) t[x] += m;
    }
    if (std::any_of(t.begin(), t.end(), [&](std::int64_t v) { return v < lo || v > hi; })) continue;
    return SupermodularFn(n, std::vector<ExtInt>(t.begin(), t.end()));
  }
}

SupermodularFn random_ring_supermodular(Rng& rng, std::size_t n) {
  SupermodularFn base = random_supermodular(rng, n);
  // t in X forces s in X for each drawn pair s < t.
  std::vector<std::pair<std::size_t, std::size_t>> forced;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t)
      if (rng.coin(1, 3)) forced.emplace_back(s, t);
  std::vector<ExtInt> table = base.table();
  for (std::uint32_t x = 0; x <= base.full(); ++x)
    for (auto [s, t] : forced)
      if (((x >> t) & 1u) && !((x >> s) & 1u)) table[x] = ExtInt::minus_inf();
  return SupermodularFn(n, std::move(table));
}

namespace {

bool values_in_range(const UnivariateConvex& phi) {
  auto [lo, hi] = phi.domain();
  if (!lo.finite() || !hi.finite() || lo < ExtInt(-8) || ExtInt(8) < hi) return false;
  for (std::int64_t k = lo.value(); k <= hi.value(); ++k) {
    ExtInt v = phi(k);
    if (v < ExtInt(-50) || ExtInt(50) < v) return false;
  }
  return true;
}

UnivariateConvex random_inner(Rng& rng) {
  switch (rng.uniform(0, 5)) {
    case 0: return UnivariateConvex::quadratic(rng.uniform(1, 2));
    case 1: {
      std::int64_t cm = rng.uniform(-4, 3);
      return UnivariateConvex::vshape(rng.uniform(-4, 4), cm, rng.uniform(cm, 4));
    }
    case 2: {
      std::int64_t a = rng.uniform(-4, 3);
      return UnivariateConvex::flat_bottom(a, rng.uniform(a, 4), rng.uniform(-4, 0), rng.uniform(0, 4));
    }
    case 3: return UnivariateConvex::linear_plus(rng.uniform(-3, 3), UnivariateConvex::quadratic(1));
    case 4: return UnivariateConvex::shifted(rng.uniform(-3, 3), UnivariateConvex::quadratic(1));
    default: {
      std::int64_t cm = rng.uniform(-2, 2);
      return UnivariateConvex::sum_of(
          {UnivariateConvex::vshape(rng.uniform(-3, 3), cm, rng.uniform(cm, 2)), UnivariateConvex::quadratic(1)});
    }
  }
}

}  // namespace

UnivariateConvex random_univariate(Rng& rng) {
  while (true) {
    std::int64_t A = rng.uniform(-8, 8);
    std::int64_t B = rng.uniform(A, std::min<std::int64_t>(8, A + 8));
    std::optional<UnivariateConvex> phi;
    switch (rng.uniform(0, 3)) {
      case 0: {
        std::vector<std::int64_t> slopes;
        for (std::int64_t k = A; k < B; ++k) slopes.push_back(rng.uniform(-6, 6));
        std::sort(slopes.begin(), slopes.end());
        std::vector<ExtInt> vals{rng.uniform(-20, 20)};
        for (auto s : slopes) vals.push_back(vals.back() + ExtInt(s));
        phi = UnivariateConvex::table(A, std::move(vals));
        break;
      }
      case 1: {
        std::int64_t k0 = rng.uniform(A, B), cm = rng.uniform(-5, 4);
        phi = UnivariateConvex::vshape(k0, cm, rng.uniform(cm, 5), A, B);
        break;
      }
      case 2: {
        std::int64_t a = rng.uniform(A, B);
        phi = UnivariateConvex::flat_bottom(a, rng.uniform(a, B), rng.uniform(-5, 0), rng.uniform(0, 5), A, B);
        break;
      }
      default: {
        UnivariateConvex inner = random_inner(rng);
        try {
          phi = UnivariateConvex::restricted(A, B, inner);
        } catch (const Error&) {
          continue;
        }
      }
    }
    if (values_in_range(*phi)) return *phi;
  }
}

SeparableConvex random_cost(Rng& rng, std::size_t n, CostFamily family) {
  std::vector<UnivariateConvex> parts;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < n; ++s) {
    names.push_back("e" + std::to_string(s + 1));
    switch (family) {
      case CostFamily::kSquareSum: parts.push_back(UnivariateConvex::quadratic(1)); break;
      case CostFamily::kWeightedSquare: parts.push_back(UnivariateConvex::quadratic(rng.uniform(1, 3))); break;
      case CostFamily::kShiftedSquare: parts.push_back(UnivariateConvex::shifted_square(rng.uniform(-3, 3), 1)); break;
      case CostFamily::kL1: parts.push_back(UnivariateConvex::weighted_l1(rng.uniform(-3, 3), 1, 1)); break;
    }
  }
  return SeparableConvex(std::move(names), std::move(parts));
}

SeparableConvex centered_square_cost(Rng& rng, std::span<const std::int64_t> center, std::int64_t spread) {
  std::vector<UnivariateConvex> parts;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < center.size(); ++s) {
    names.push_back("e" + std::to_string(s + 1));
    parts.push_back(UnivariateConvex::shifted_square(center[s] + rng.uniform(-spread, spread), 1));
  }
  return SeparableConvex(std::move(names), std::move(parts));
}

FlowInstance random_flow(Rng& rng, std::size_t max_nodes, std::size_t max_arcs, std::int64_t cap) {
  Digraph d;
  auto nn = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(max_nodes)));
  for (std::size_t v = 0; v < nn; ++v) d.nodes.push_back("v" + std::to_string(v + 1));
  auto na = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_arcs)));
  for (std::size_t a = 0; a < na; ++a) {
    auto u = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(nn) - 1));
    auto v = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(nn) - 2));
    if (v >= u) ++v;
    d.arcs.emplace_back(u, v);
  }
  IntVec x(na);
  std::vector<ExtInt> upper;
  for (std::size_t a = 0; a < na; ++a) {
    std::int64_t g = rng.uniform(1, cap);
    upper.push_back(g);
    x[a] = rng.uniform(0, g);
  }
  IntVec m = net_inflow(d, x);
  FlowInstance inst{std::move(d), std::move(m), std::vector<ExtInt>(na, ExtInt(0)), std::move(upper),
                    SeparableConvex::square_sum(na)};
  inst.validate();
  return inst;
}

}  // namespace dctk::fixtures
