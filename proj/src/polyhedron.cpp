#include "dctk/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "dctk/parallel.hpp"
#include "linalg.hpp"

namespace dctk {

using detail::RMat;
using detail::RVec;

// ---------------------------------------------------------------- systems

LinearSystem::LinearSystem(std::vector<std::string> elements, std::vector<Row> rows)
    : elements_(std::move(elements)), rows_(std::move(rows)) {
  if (elements_.empty()) fail(ErrorCode::kInvalidArgument, "linear system needs |S| >= 1");
  if (rows_.empty()) fail(ErrorCode::kInvalidArgument, "linear system needs at least one row");
  for (const auto& r : rows_)
    if (r.coeffs.size() != elements_.size())
      fail(ErrorCode::kInvalidArgument, "row length differs from |S|");
}

LinearSystem LinearSystem::with_size(std::size_t n, std::vector<Row> rows) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  return LinearSystem(std::move(names), std::move(rows));
}

std::int64_t LinearSystem::activity(std::size_t i, std::span<const std::int64_t> z) const {
  const auto& c = rows_[i].coeffs;
  if (z.size() != c.size()) fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  std::int64_t s = 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0) s = checked::add(s, checked::mul(c[j], z[j]));
  return s;
}

bool LinearSystem::contains(std::span<const std::int64_t> z) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::int64_t a = activity(i, z);
    if (rows_[i].kind == RowKind::kEq ? a != rows_[i].rhs : a < rows_[i].rhs) return false;
  }
  return true;
}

IntVec LinearSystem::transpose_apply(std::span<const std::int64_t> y) const {
  if (y.size() != rows_.size()) fail(ErrorCode::kInvalidArgument, "dual vector length differs from #rows");
  IntVec w(dim(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j)
      w[j] = checked::add(w[j], checked::mul(y[i], rows_[i].coeffs[j]));
  }
  return w;
}

std::int64_t LinearSystem::rhs_dot(std::span<const std::int64_t> y) const {
  if (y.size() != rows_.size()) fail(ErrorCode::kInvalidArgument, "dual vector length differs from #rows");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) s = checked::add(s, checked::mul(y[i], rows_[i].rhs));
  return s;
}

// ---------------------------------------------------------------- windows

void Window::validate() const {
  if (lo.size() != hi.size()) fail(ErrorCode::kInvalidArgument, "window bounds differ in length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) fail(ErrorCode::kInvalidArgument, "window has lo > hi");
}

std::uint64_t Window::count() const {
  validate();
  unsigned __int128 c = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    c *= static_cast<unsigned __int128>(hi[i] - lo[i]) + 1;
    if (c > (static_cast<unsigned __int128>(1) << 62)) fail(ErrorCode::kOverflow, "window too large");
  }
  return static_cast<std::uint64_t>(c);
}

IntVec Window::point(std::uint64_t index) const {
  IntVec z(lo.size());
  for (std::size_t i = lo.size(); i-- > 0;) {
    auto width = static_cast<std::uint64_t>(hi[i] - lo[i]) + 1;
    z[i] = lo[i] + static_cast<std::int64_t>(index % width);
    index /= width;
  }
  return z;
}

bool Window::contains(std::span<const std::int64_t> z) const {
  if (z.size() != lo.size()) return false;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] < lo[i] || z[i] > hi[i]) return false;
  return true;
}

std::string window_text(const Window& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.dim(); ++i)
    s += (i ? "," : "") + std::to_string(w.lo[i]) + ".." + std::to_string(w.hi[i]);
  return s + "]";
}

bool sign_feasible(const LinearSystem& sys, std::span<const std::int64_t> y) {
  if (y.size() != sys.num_rows()) return false;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (sys.row(i).kind == RowKind::kGeq && y[i] < 0) return false;
  return true;
}

std::int64_t support_size(std::span<const std::int64_t> y) {
  return std::count_if(y.begin(), y.end(), [](std::int64_t v) { return v != 0; });
}

// ---------------------------------------------------------------- LP oracle

ExtInt LpResult::ceil_value() const {
  switch (status) {
    case LpStatus::kUnbounded: return ExtInt::minus_inf();
    case LpStatus::kInfeasible: return ExtInt::plus_inf();
    default: return value.ceil();
  }
}

namespace {

RVec to_rvec(std::span<const std::int64_t> v) { return RVec(v.begin(), v.end()); }

Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

// Greedy maximal independent subset, in order.
std::vector<std::size_t> independent_subset(const RMat& rows, std::size_t n) {
  std::vector<std::size_t> chosen;
  RMat acc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    acc.push_back(rows[i]);
    if (detail::rank_of(acc, n) == acc.size())
      chosen.push_back(i);
    else
      acc.pop_back();
  }
  return chosen;
}

}  // namespace

LpOracle::LpOracle(const LinearSystem& sys, std::uint64_t max_bases) : n_(sys.dim()) {
  const std::size_t n = n_;
  RMat all;
  for (const auto& r : sys.rows()) all.push_back(to_rvec(r.coeffs));
  for (const auto& l : detail::nullspace(all, n)) lineality_.push_back(detail::primitive(l));

  // Equations: EQ rows plus x . l = 0 for each lineality direction l.
  RMat eq_a;
  RVec eq_b;
  std::vector<std::size_t> geq;
  for (std::size_t i = 0; i < sys.num_rows(); ++i) {
    if (sys.row(i).kind == RowKind::kEq) {
      eq_a.push_back(to_rvec(sys.row(i).coeffs));
      eq_b.push_back(sys.row(i).rhs);
    } else {
      geq.push_back(i);
    }
  }
  for (const auto& l : lineality_) {
    eq_a.push_back(to_rvec(l));
    eq_b.push_back(0);
  }
  const auto basis_eq = independent_subset(eq_a, n);
  const std::size_t r = basis_eq.size();
  const std::size_t need = n - r;
  if (detail::binomial(geq.size(), need) > max_bases)
    fail(ErrorCode::kDegenerateSystem, "too many candidate bases for exhaustive enumeration");

  auto satisfies_all = [&](const RVec& x) {
    for (std::size_t k = 0; k < eq_a.size(); ++k)
      if (dot(eq_a[k], x) != eq_b[k]) return false;
    for (auto i : geq)
      if (dot(to_rvec(sys.row(i).coeffs), x) < Rational(sys.row(i).rhs)) return false;
    return true;
  };

  RMat geq_a;
  for (auto i : geq) geq_a.push_back(to_rvec(sys.row(i).coeffs));

  std::set<RVec> verts;
  detail::for_each_combination(geq.size(), need, [&](const std::vector<std::size_t>& c) {
    RMat a;
    RVec b;
    for (auto k : basis_eq) {
      a.push_back(eq_a[k]);
      b.push_back(eq_b[k]);
    }
    for (auto k : c) {
      a.push_back(geq_a[k]);
      b.push_back(sys.row(geq[k]).rhs);
    }
    if (auto x = detail::solve_square(std::move(a), b); x && satisfies_all(*x)) verts.insert(std::move(*x));
    return true;
  });
  for (const auto& v : verts) {
    std::int64_t den = 1;
    for (const auto& x : v) den = detail::lcm64(den, x.den());
    IntVec num;
    for (const auto& x : v) num.push_back(checked::mul(x.num(), den / x.den()));
    vertices_.push_back({std::move(num), den});
  }

  // Extreme rays of the (pointed) recession cone.
  if (need >= 1 && !vertices_.empty()) {
    std::set<IntVec> rays;
    detail::for_each_combination(geq.size(), need - 1, [&](const std::vector<std::size_t>& c) {
      RMat a;
      for (auto k : basis_eq) a.push_back(eq_a[k]);
      for (auto k : c) a.push_back(geq_a[k]);
      RMat ns = detail::nullspace(a, n);
      if (ns.size() != 1) return true;
      for (int sgn : {1, -1}) {
        RVec d = ns[0];
        if (sgn < 0)
          for (auto& x : d) x = -x;
        bool ok = true;
        for (const auto& g : geq_a)
          if (dot(g, d).sign() < 0) {
            ok = false;
            break;
          }
        if (ok) rays.insert(detail::primitive(d));
      }
      return true;
    });
    rays_.assign(rays.begin(), rays.end());
  }
}

std::vector<std::vector<Rational>> LpOracle::vertices() const {
  std::vector<std::vector<Rational>> out;
  for (const auto& v : vertices_) {
    std::vector<Rational> x;
    for (auto c : v.num) x.emplace_back(c, v.den);
    out.push_back(std::move(x));
  }
  return out;
}

bool LpOracle::integral_vertices() const {
  return std::all_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.den == 1; });
}

LpResult LpOracle::minimize(std::span<const std::int64_t> w) const {
  if (w.size() != n_) fail(ErrorCode::kInvalidArgument, "cost length differs from |S|");
  LpResult res;
  if (vertices_.empty()) return res;
  auto idot = [&](const IntVec& d) {
    __int128 s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += static_cast<__int128>(w[i]) * d[i];
    return s;
  };
  for (const auto& l : lineality_)
    if (idot(l) != 0) {
      res.status = LpStatus::kUnbounded;
      return res;
    }
  for (const auto& d : rays_)
    if (idot(d) < 0) {
      res.status = LpStatus::kUnbounded;
      return res;
    }
  std::size_t best = 0;
  __int128 bn = idot(vertices_[0].num), bd = vertices_[0].den;
  for (std::size_t k = 1; k < vertices_.size(); ++k) {
    __int128 vn = idot(vertices_[k].num), vd = vertices_[k].den;
    if (vn * bd < bn * vd) {
      best = k;
      bn = vn;
      bd = vd;
    }
  }
  res.status = LpStatus::kOptimal;
  const std::int64_t den = vertices_[best].den;
  Rational v = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    res.argmin.emplace_back(vertices_[best].num[i], den);
    v += Rational(w[i]) * res.argmin.back();
  }
  res.value = v;
  return res;
}

LpResult lp_min(const LinearSystem& sys, std::span<const std::int64_t> w) { return LpOracle(sys).minimize(w); }

// ---------------------------------------------------------------- brute force

std::vector<IntVec> enumerate_integer_points(const LinearSystem& sys, const Window& win) {
  if (win.dim() != sys.dim()) fail(ErrorCode::kInvalidArgument, "window dimension differs from |S|");
  std::vector<IntVec> out;
  for_each_point(win, [&](const IntVec& z) {
    if (sys.contains(z)) out.push_back(z);
    return true;
  });
  return out;
}

bool check_compatibility(const LinearSystem& sys, std::span<const std::int64_t> z,
                         std::span<const std::int64_t> y, const SeparableConvex& Phi) {
  if (z.size() != sys.dim()) fail(ErrorCode::kInvalidArgument, "z length differs from |S|");
  IntVec w = sys.transpose_apply(y);
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (!Phi[s].in_domain(z[s])) return false;
    auto [lower, upper] = subdifferential_interval(Phi[s], z[s]);
    if (ExtInt(w[s]) < lower || upper < ExtInt(w[s])) return false;
  }
  return true;
}

MinMaxReport verify_certificate(const LinearSystem& sys, std::span<const std::int64_t> z,
                                std::span<const std::int64_t> y, const SeparableConvex& Phi) {
  if (z.size() != sys.dim() || Phi.size() != sys.dim())
    fail(ErrorCode::kInvalidArgument, "z or Phi length differs from |S|");
  if (!sys.contains(z)) fail(ErrorCode::kNotPrimalFeasible, "z is not an integer point of R");
  if (!sign_feasible(sys, y)) fail(ErrorCode::kNotSignFeasible, "y is negative on an inequality row");
  for (std::size_t i = 0; i < sys.num_rows(); ++i)
    if (y[i] != 0 && sys.slack(i, z) != 0)
      throw CriteriaViolated("slackness", static_cast<long long>(i),
                             "y = " + std::to_string(y[i]) + ", slack = " + std::to_string(sys.slack(i, z)));
  IntVec w = sys.transpose_apply(y);
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (!Phi[s].in_domain(z[s])) throw CriteriaViolated("domain", static_cast<long long>(s), "Phi(z) = +inf");
    auto [lower, upper] = subdifferential_interval(Phi[s], z[s]);
    if (ExtInt(w[s]) < lower || upper < ExtInt(w[s]))
      throw CriteriaViolated("compatibility", static_cast<long long>(s),
                             "yQ = " + std::to_string(w[s]) + " outside [" + lower.to_string() + ", " +
                                 upper.to_string() + "]");
  }
  MinMaxReport rep;
  rep.primal_value = Phi(z);
  rep.dual_value = ExtInt(sys.rhs_dot(y)) - separable_conjugate(Phi, w);
  rep.primal_witness.assign(z.begin(), z.end());
  rep.dual_rows = DualVector(y.begin(), y.end());
  rep.support_size = support_size(y);
  rep.small_support_found = rep.support_size <= 2 * static_cast<std::int64_t>(sys.dim());
  rep.equality = rep.primal_value == rep.dual_value;
  rep.verified = rep.equality;
  return rep;
}

MinMaxReport minimize_bruteforce(const LinearSystem& sys, const SeparableConvex& Phi, const Window& win) {
  if (win.dim() != sys.dim() || Phi.size() != sys.dim())
    fail(ErrorCode::kInvalidArgument, "window or Phi dimension differs from |S|");
  MinMaxReport rep;
  for_each_point(win, [&](const IntVec& z) {
    if (!sys.contains(z)) return true;
    ExtInt v = Phi(z);
    if (v < rep.primal_value) {
      rep.primal_value = v;
      rep.primal_witness = z;
    }
    return true;
  });
  rep.bounds_used["window"] = window_text(win);
  return rep;
}

namespace {

// Phi* tabulated on [lo, hi] per coordinate.
struct ConjugateTables {
  std::vector<std::int64_t> lo;
  std::vector<std::vector<ExtInt>> values;

  ConjugateTables(const SeparableConvex& Phi, std::span<const std::int64_t> lo_, std::span<const std::int64_t> hi_) {
    for (std::size_t s = 0; s < Phi.size(); ++s) {
      lo.push_back(lo_[s]);
      std::vector<ExtInt> v;
      for (std::int64_t l = lo_[s]; l <= hi_[s]; ++l) v.push_back(conjugate_eval(Phi[s], l));
      values.push_back(std::move(v));
    }
  }

  ExtInt at(std::size_t s, std::int64_t l) const { return values[s][static_cast<std::size_t>(l - lo[s])]; }

  ExtInt sum(std::span<const std::int64_t> w) const {
    ExtInt t = 0;
    for (std::size_t s = 0; s < w.size(); ++s) {
      ExtInt c = at(s, w[s]);
      if (c.is_plus_inf()) return c;
      t += c;
    }
    return t;
  }
};

}  // namespace

MinMaxReport dual_search_bruteforce(const LinearSystem& sys, const SeparableConvex& Phi, std::int64_t y_bound,
                                    std::span<const IntVec> pruning_points) {
  if (y_bound < 0) fail(ErrorCode::kInvalidArgument, "y_bound must be >= 0");
  if (Phi.size() != sys.dim()) fail(ErrorCode::kInvalidArgument, "Phi dimension differs from |S|");
  const std::size_t n = sys.dim(), m = sys.num_rows();

  IntVec reach(n, 0);
  for (const auto& r : sys.rows())
    for (std::size_t s = 0; s < n; ++s) reach[s] = checked::add(reach[s], checked::mul(y_bound, std::abs(r.coeffs[s])));
  IntVec neg_reach(n);
  for (std::size_t s = 0; s < n; ++s) neg_reach[s] = -reach[s];
  const ConjugateTables conj(Phi, neg_reach, reach);

  // Weak-duality pruning: yp - Phi*(yQ) <= Phi(z) - sum_i y_i slack_i(z)
  // for every integer point z of R, and unassigned rows only lower it.
  std::vector<IntVec> points(pruning_points.begin(), pruning_points.end());
  if (points.empty()) {
    try {
      LpOracle oracle(sys, 2'000'000);
      for (const auto& v : oracle.vertices()) {
        if (!std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.is_integer(); })) continue;
        IntVec z;
        for (const auto& r : v) z.push_back(r.num());
        points.push_back(std::move(z));
      }
    } catch (const Error&) {
      // no pruning
    }
  }
  std::vector<std::int64_t> point_value;
  std::vector<IntVec> point_slack;
  for (const auto& z : points) {
    if (!sys.contains(z)) fail(ErrorCode::kInvalidArgument, "pruning point outside R");
    ExtInt v = Phi(z);
    if (!v.finite()) continue;
    point_value.push_back(v.value());
    IntVec sl(m);
    for (std::size_t i = 0; i < m; ++i) sl[i] = sys.slack(i, z);
    point_slack.push_back(std::move(sl));
  }
  const std::size_t np = point_value.size();

  ExtInt best = ExtInt::minus_inf();
  bool have_best = false, small_support = false;
  DualVector best_y(m, 0);
  DualVector y(m, 0);
  IntVec w(n, 0);
  std::vector<std::int64_t> penalty(np, 0);
  const std::int64_t support_cap = 2 * static_cast<std::int64_t>(n);

  std::function<void(std::size_t, std::int64_t)> dfs = [&](std::size_t i, std::int64_t yp) {
    if (have_best && best.finite()) {
      for (std::size_t k = 0; k < np; ++k)
        if (checked::sub(point_value[k], penalty[k]) < best.value()) return;
    }
    if (i == m) {
      ExtInt c = conj.sum(w);
      ExtInt val = c.is_plus_inf() ? ExtInt::minus_inf() : ExtInt(yp) - c;
      bool small = support_size(y) <= support_cap;
      if (!have_best || best < val) {
        have_best = true;
        best = val;
        best_y = y;
        small_support = small;
      } else if (val == best && small) {
        small_support = true;
      }
      return;
    }
    const Row& row = sys.row(i);
    const std::int64_t lo = row.kind == RowKind::kEq ? -y_bound : 0;
    for (std::int64_t v = lo; v <= y_bound; ++v) {
      y[i] = v;
      for (std::size_t s = 0; s < n; ++s) w[s] += v * row.coeffs[s];
      for (std::size_t k = 0; k < np; ++k) penalty[k] += v * point_slack[k][i];
      dfs(i + 1, checked::add(yp, checked::mul(v, row.rhs)));
      for (std::size_t s = 0; s < n; ++s) w[s] -= v * row.coeffs[s];
      for (std::size_t k = 0; k < np; ++k) penalty[k] -= v * point_slack[k][i];
    }
    y[i] = 0;
  };
  dfs(0, 0);

  MinMaxReport rep;
  rep.dual_value = best;
  rep.dual_rows = best_y;
  rep.support_size = support_size(best_y);
  rep.small_support_found = small_support;
  rep.bounds_used["y_bound"] = std::to_string(y_bound);
  rep.notes.push_back("dual value is the maximum within |y(i)| <= y_bound");
  return rep;
}

MinMaxReport mu_form_dual_search(const LinearSystem& sys, const SeparableConvex& Phi, const Window& w_window) {
  return mu_form_dual_search(LpOracle(sys), Phi, w_window);
}

MinMaxReport mu_form_dual_search(const LpOracle& oracle, const SeparableConvex& Phi, const Window& w_window) {
  if (w_window.dim() != Phi.size()) fail(ErrorCode::kInvalidArgument, "window dimension differs from |S|");
  MinMaxReport rep;
  rep.bounds_used["w_window"] = window_text(w_window);
  if (!oracle.feasible()) {
    rep.dual_value = ExtInt::plus_inf();
    rep.notes.push_back("R is empty");
    return rep;
  }
  const ConjugateTables conj(Phi, w_window.lo, w_window.hi);
  bool fractional = false;
  auto best = parallel_argmax<ExtInt>(w_window.count(), [&](std::uint64_t idx) -> std::optional<ExtInt> {
    IntVec w = w_window.point(idx);
    LpResult r = oracle.minimize(w);
    if (r.status != LpStatus::kOptimal) return std::nullopt;
    ExtInt c = conj.sum(w);
    if (c.is_plus_inf()) return ExtInt::minus_inf();
    return r.ceil_value() - c;
  });
  if (!best) {
    rep.notes.push_back("mu_R(w) = -inf for every w in the window");
    return rep;
  }
  IntVec w = w_window.point(best->second);
  LpResult r = oracle.minimize(w);
  fractional = !r.value.is_integer();
  rep.dual_value = best->first;
  rep.dual_cost = w;
  rep.extra_values["mu"] = r.ceil_value();
  rep.extra_values["conjugate"] = separable_conjugate(Phi, w);
  if (fractional) rep.notes.push_back("fractional mu_R(w) rounded up");
  return rep;
}

FeasibilityResult feasibility_condition(const LinearSystem& sys, std::span<const std::int64_t> z_star,
                                        std::span<const ExtInt> ell, std::span<const ExtInt> u) {
  const std::size_t n = sys.dim();
  if (z_star.size() != n || ell.size() != n || u.size() != n)
    fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  if (n > 20) fail(ErrorCode::kInvalidArgument, "feasibility scan limited to |S| <= 20");
  if (!sys.contains(z_star)) fail(ErrorCode::kNotPrimalFeasible, "z* is not an integer point of R");
  for (std::size_t s = 0; s < n; ++s)
    if (u[s] < ell[s]) fail(ErrorCode::kInvalidArgument, "bounding vectors need ell <= u");

  // Digit s of the base-3 code: 0 untouched, 1 in S-, 2 in S+.
  std::vector<int> digit(n, 0);
  IntVec zp(z_star.begin(), z_star.end());
  FeasibilityResult res;
  while (true) {
    std::uint32_t minus = 0, plus = 0;
    for (std::size_t s = 0; s < n; ++s) {
      zp[s] = z_star[s] + (digit[s] == 2) - (digit[s] == 1);
      if (digit[s] == 1) minus |= 1u << s;
      if (digit[s] == 2) plus |= 1u << s;
    }
    if (sys.contains(zp)) {
      ExtInt lhs = 0, rhs = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (digit[s] == 1) lhs += ell[s];
        if (digit[s] == 2) rhs += u[s];
      }
      if (rhs < lhs) {
        res.holds = false;
        res.violating_pair = {{minus, plus}};
        res.lhs = lhs;
        res.rhs = rhs;
        return res;
      }
    }
    std::size_t s = 0;
    while (s < n && digit[s] == 2) digit[s++] = 0;
    if (s == n) break;
    ++digit[s];
  }
  return res;
}

std::optional<IntVec> find_weight_in_box(const LinearSystem& sys, std::span<const std::int64_t> z_star,
                                         std::span<const ExtInt> ell, std::span<const ExtInt> u,
                                         const Window& w_window) {
  return find_weight_in_box(LpOracle(sys), z_star, ell, u, w_window);
}

std::optional<IntVec> find_weight_in_box(const LpOracle& oracle, std::span<const std::int64_t> z_star,
                                         std::span<const ExtInt> ell, std::span<const ExtInt> u,
                                         const Window& w_window) {
  const std::size_t n = z_star.size();
  if (ell.size() != n || u.size() != n || w_window.dim() != n)
    fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  Window clipped = w_window;
  for (std::size_t s = 0; s < n; ++s) {
    if (ell[s].finite()) clipped.lo[s] = std::max(clipped.lo[s], ell[s].value());
    if (u[s].finite()) clipped.hi[s] = std::min(clipped.hi[s], u[s].value());
    if (ell[s].is_plus_inf() || u[s].is_minus_inf() || clipped.lo[s] > clipped.hi[s]) return std::nullopt;
  }
  std::optional<IntVec> found;
  for_each_point(clipped, [&](const IntVec& w) {
    LpResult r = oracle.minimize(w);
    if (r.status != LpStatus::kOptimal) return true;
    std::int64_t wz = 0;
    for (std::size_t s = 0; s < n; ++s) wz = checked::add(wz, checked::mul(w[s], z_star[s]));
    if (r.value == Rational(wz)) {
      found = w;
      return false;
    }
    return true;
  });
  return found;
}

LinearSystem dilation(const LinearSystem& sys, std::int64_t k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "dilation factor must be >= 1");
  std::vector<Row> rows = sys.rows();
  for (auto& r : rows) r.rhs = checked::mul(k, r.rhs);
  return LinearSystem(sys.elements(), std::move(rows));
}

BoxProbeResult probe_box_integer(const LinearSystem& sys, const Window& win) {
  const std::size_t n = sys.dim();
  if (win.dim() != n) fail(ErrorCode::kInvalidArgument, "window dimension differs from |S|");
  if (n > 20) fail(ErrorCode::kInvalidArgument, "box probe limited to |S| <= 20");
  win.validate();

  RMat eq_a;
  RVec eq_b;
  std::vector<std::size_t> geq;
  for (std::size_t i = 0; i < sys.num_rows(); ++i) {
    if (sys.row(i).kind == RowKind::kEq) {
      eq_a.push_back(to_rvec(sys.row(i).coeffs));
      eq_b.push_back(sys.row(i).rhs);
    } else {
      geq.push_back(i);
    }
  }
  const auto basis_eq = independent_subset(eq_a, n);

  auto in_R = [&](const RVec& x) {
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
      Rational a = dot(to_rvec(sys.row(i).coeffs), x);
      Rational p(sys.row(i).rhs);
      if (sys.row(i).kind == RowKind::kEq ? a != p : a < p) return false;
    }
    return true;
  };

  BoxProbeResult res;
  // A vertex of R within an integral box is cut out by independent EQ rows,
  // box facets x_s = v_s for s in `fixed`, and enough GEQ rows of R.
  for (std::uint32_t fixed = 0; fixed < (1u << n); ++fixed) {
    RMat base;
    for (auto k : basis_eq) base.push_back(eq_a[k]);
    std::vector<std::size_t> fixed_idx;
    for (std::size_t s = 0; s < n; ++s)
      if (fixed & (1u << s)) {
        RVec e(n, Rational(0));
        e[s] = 1;
        base.push_back(std::move(e));
        fixed_idx.push_back(s);
      }
    if (detail::rank_of(base, n) < base.size()) continue;
    const std::size_t need = n - base.size();
    if (need > geq.size()) continue;

    Window values{IntVec(fixed_idx.size()), IntVec(fixed_idx.size())};
    for (std::size_t j = 0; j < fixed_idx.size(); ++j) {
      values.lo[j] = win.lo[fixed_idx[j]];
      values.hi[j] = win.hi[fixed_idx[j]];
    }
    bool stop = false;
    detail::for_each_combination(geq.size(), need, [&](const std::vector<std::size_t>& c) {
      RMat a = base;
      for (auto k : c) a.push_back(to_rvec(sys.row(geq[k]).coeffs));
      auto inv = detail::inverse(a);
      if (!inv) return true;
      RVec rhs;
      for (auto k : basis_eq) rhs.push_back(eq_b[k]);
      const std::size_t fixed_at = rhs.size();
      rhs.resize(fixed_at + fixed_idx.size());
      for (auto k : c) rhs.push_back(sys.row(geq[k]).rhs);
      for_each_point(values, [&](const IntVec& v) {
        for (std::size_t j = 0; j < v.size(); ++j) rhs[fixed_at + j] = v[j];
        RVec x(n, Rational(0));
        for (std::size_t r = 0; r < n; ++r) x[r] = dot((*inv)[r], rhs);
        if (std::all_of(x.begin(), x.end(), [](const Rational& q) { return q.is_integer(); })) return true;
        IntVec lo(n), hi(n);
        for (std::size_t s = 0; s < n; ++s) {
          lo[s] = x[s].floor();
          hi[s] = x[s].ceil();
          if (lo[s] < win.lo[s] || hi[s] > win.hi[s]) return true;
        }
        if (!in_R(x)) return true;
        res.box_integer = false;
        res.fractional_vertex = x;
        res.box_lo = lo;
        res.box_hi = hi;
        stop = true;
        return false;
      });
      return !stop;
    });
    if (stop) return res;
  }
  return res;
}

}  // namespace dctk
