#include "dctk/inverse.hpp"

#include "dctk/parallel.hpp"

namespace dctk {

TangentCone tangent_cone(const LinearSystem& sys, std::span<const std::int64_t> z0) {
  if (z0.size() != sys.dim()) fail(ErrorCode::kInvalidArgument, "z0 length differs from |S|");
  if (!sys.contains(z0)) fail(ErrorCode::kNotPrimalFeasible, "z0 is not an integer point of R");
  TangentCone cone;
  cone.base_point.assign(z0.begin(), z0.end());
  std::vector<Row> rows;
  for (std::size_t i = 0; i < sys.num_rows(); ++i) {
    const Row& r = sys.row(i);
    if (r.kind == RowKind::kEq || sys.slack(i, z0) == 0) {
      rows.push_back({r.coeffs, 0, r.kind});
      cone.parent_rows.push_back(i);
    }
  }
  if (rows.empty()) rows.push_back({IntVec(sys.dim(), 0), 0, RowKind::kGeq});
  cone.cone_system = LinearSystem(sys.elements(), std::move(rows));
  return cone;
}

bool is_minimizer(const LinearSystem& sys, std::span<const std::int64_t> z0, std::span<const std::int64_t> w) {
  return is_minimizer(LpOracle(sys), z0, w);
}

bool is_minimizer(const LpOracle& oracle, std::span<const std::int64_t> z0, std::span<const std::int64_t> w) {
  LpResult r = oracle.minimize(w);
  if (r.status != LpStatus::kOptimal) return false;
  std::int64_t wz = 0;
  for (std::size_t s = 0; s < z0.size(); ++s) wz = checked::add(wz, checked::mul(w[s], z0[s]));
  return r.value == Rational(wz);
}

bool is_integer_minimizer(const LinearSystem& sys, std::span<const std::int64_t> z0, std::span<const std::int64_t> w,
                          const Window& win) {
  std::int64_t wz0 = 0;
  for (std::size_t s = 0; s < z0.size(); ++s) wz0 = checked::add(wz0, checked::mul(w[s], z0[s]));
  bool ok = true;
  for_each_point(win, [&](const IntVec& z) {
    if (!sys.contains(z)) return true;
    std::int64_t wz = 0;
    for (std::size_t s = 0; s < z.size(); ++s) wz = checked::add(wz, checked::mul(w[s], z[s]));
    if (wz < wz0) ok = false;
    return ok;
  });
  return ok;
}

InverseResult inverse_minimize(const LinearSystem& sys, std::span<const std::int64_t> z0,
                               const SeparableConvex& deviation, const Window& w_window) {
  if (z0.size() != sys.dim() || deviation.size() != sys.dim() || w_window.dim() != sys.dim())
    fail(ErrorCode::kInvalidArgument, "dimension differs from |S|");
  if (!sys.contains(z0)) fail(ErrorCode::kNotPrimalFeasible, "z0 is not an integer point of R");
  const LpOracle oracle(sys);
  // Minimizing is maximizing the negated deviation; parallel_argmax keeps
  // the smallest index on ties.
  auto best = parallel_argmax<ExtInt>(w_window.count(), [&](std::uint64_t i) -> std::optional<ExtInt> {
    IntVec w = w_window.point(i);
    ExtInt v = deviation(w);
    if (v.is_plus_inf() || !is_minimizer(oracle, z0, w)) return std::nullopt;
    return -v;
  });
  if (!best) fail(ErrorCode::kNoFeasibleWeight, "no weight in the window makes z0 a minimizer");
  return {w_window.point(best->second), -best->first};
}

Window conjugate_domain_window(const SeparableConvex& deviation, std::int64_t fallback) {
  Window win{IntVec(deviation.size()), IntVec(deviation.size())};
  for (std::size_t s = 0; s < deviation.size(); ++s) {
    auto [dlo, dhi] = deviation[s].domain();
    ExtInt lo = dlo.finite() ? ExtInt::minus_inf() : deviation[s].left_asymptotic_slope();
    ExtInt hi = dhi.finite() ? ExtInt::plus_inf() : deviation[s].right_asymptotic_slope();
    win.lo[s] = lo.finite() ? lo.value() : -fallback;
    win.hi[s] = hi.finite() ? hi.value() : fallback;
    if (win.lo[s] > win.hi[s]) std::swap(win.lo[s], win.hi[s]);
  }
  return win;
}

MinMaxReport inverse_dual_search(const TangentCone& cone, const SeparableConvex& deviation, const Window& z_window,
                                 std::optional<std::span<const std::int64_t>> w_star) {
  const LinearSystem& sys = cone.cone_system;
  if (deviation.size() != sys.dim() || z_window.dim() != sys.dim())
    fail(ErrorCode::kInvalidArgument, "dimension differs from |S|");
  std::vector<std::vector<ExtInt>> conj(sys.dim());
  for (std::size_t s = 0; s < sys.dim(); ++s)
    for (std::int64_t l = z_window.lo[s]; l <= z_window.hi[s]; ++l) conj[s].push_back(conjugate_eval(deviation[s], l));

  MinMaxReport rep;
  rep.bounds_used["z_window"] = window_text(z_window);
  bool any = false;
  IntVec best_z;
  for_each_point(z_window, [&](const IntVec& z) {
    if (!sys.contains(z)) return true;
    ExtInt c = 0;
    for (std::size_t s = 0; s < z.size() && !c.is_plus_inf(); ++s)
      c += conj[s][static_cast<std::size_t>(z[s] - z_window.lo[s])];
    ExtInt v = -c;
    if (!any || rep.dual_value < v) {
      any = true;
      rep.dual_value = v;
      best_z = z;
    }
    return true;
  });
  if (!any) {
    rep.notes.push_back("no cone point in the window");
    return rep;
  }
  rep.dual_cost = best_z;
  if (w_star) {
    const auto& w = *w_star;
    rep.primal_value = deviation(w);
    rep.primal_witness.assign(w.begin(), w.end());
    std::int64_t wz = 0;
    for (std::size_t s = 0; s < w.size(); ++s) wz = checked::add(wz, checked::mul(w[s], best_z[s]));
    rep.extra_values["orthogonality"] = wz;
    bool fits = !first_unfitting(deviation, w, best_z).has_value();
    rep.extra_values["fitting"] = fits ? 1 : 0;
    rep.equality = rep.primal_value == rep.dual_value;
    rep.verified = rep.equality && wz == 0 && fits;
  }
  return rep;
}

std::pair<LinearSystem, IntVec> dilate_targets(const LinearSystem& sys, std::span<const IntVec> targets) {
  if (targets.empty()) fail(ErrorCode::kInvalidArgument, "need at least one target");
  IntVec z0(sys.dim(), 0);
  for (const auto& z : targets) {
    if (z.size() != sys.dim()) fail(ErrorCode::kInvalidArgument, "target length differs from |S|");
    if (!sys.contains(z)) fail(ErrorCode::kNotPrimalFeasible, "target is not an integer point of R");
    for (std::size_t s = 0; s < z.size(); ++s) z0[s] = checked::add(z0[s], z[s]);
  }
  return {dilation(sys, static_cast<std::int64_t>(targets.size())), z0};
}

namespace {

SeparableConvex per_element(std::size_t n, auto&& make) {
  std::vector<UnivariateConvex> parts;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < n; ++s) {
    parts.push_back(make(s));
    names.push_back("e" + std::to_string(s + 1));
  }
  return SeparableConvex(std::move(names), std::move(parts));
}

void same_size(std::size_t n, std::initializer_list<std::size_t> sizes) {
  for (auto k : sizes)
    if (k != n) fail(ErrorCode::kInvalidArgument, "deviation parameters differ in length");
}

}  // namespace

SeparableConvex l1_deviation(std::span<const std::int64_t> w0) {
  return per_element(w0.size(), [&](std::size_t s) { return UnivariateConvex::weighted_l1(w0[s], 1, 1); });
}

SeparableConvex weighted_l1_deviation(std::span<const std::int64_t> w0, std::span<const std::int64_t> c1,
                                      std::span<const std::int64_t> c2) {
  same_size(w0.size(), {c1.size(), c2.size()});
  return per_element(w0.size(), [&](std::size_t s) {
    if (c1[s] < 0 || c2[s] < 0) fail(ErrorCode::kInvalidArgument, "deviation weights must be >= 0");
    return UnivariateConvex::weighted_l1(w0[s], c1[s], c2[s]);
  });
}

SeparableConvex box_deviation(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi,
                              std::span<const std::int64_t> c1, std::span<const std::int64_t> c2) {
  same_size(lo.size(), {hi.size(), c1.size(), c2.size()});
  return per_element(lo.size(), [&](std::size_t s) {
    return UnivariateConvex::flat_bottom(lo[s], hi[s], -c1[s], c2[s]);
  });
}

SeparableConvex weighted_square_deviation(std::span<const std::int64_t> w0, std::span<const std::int64_t> c) {
  same_size(w0.size(), {c.size()});
  return per_element(w0.size(), [&](std::size_t s) { return UnivariateConvex::shifted_square(w0[s], c[s]); });
}

}  // namespace dctk
