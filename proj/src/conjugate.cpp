#include "dctk/conjugate.hpp"

#include <algorithm>
#include <functional>

namespace dctk {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::shared_ptr<const UnivariateConvex> share(UnivariateConvex f) {
  return std::make_shared<const UnivariateConvex>(std::move(f));
}

std::int64_t clamp_to(std::int64_t k, const ExtInt& lo, const ExtInt& hi) {
  if (lo.finite() && k < lo.value()) k = lo.value();
  if (hi.finite() && k > hi.value()) k = hi.value();
  return k;
}

// c * X where the product is taken as 0 whenever c == 0, even for infinite X.
ExtInt times(std::int64_t c, const ExtInt& x) { return c == 0 ? ExtInt(0) : c * x; }

// Effective domain [L, U] of phi*: unbounded on a side where dom(phi) is
// bounded, and capped by the asymptotic slope where dom(phi) is not.
std::pair<ExtInt, ExtInt> conjugate_domain(const UnivariateConvex& phi) {
  auto [lo, hi] = phi.domain();
  ExtInt L = lo.finite() ? ExtInt::minus_inf() : phi.left_asymptotic_slope();
  ExtInt U = hi.finite() ? ExtInt::plus_inf() : phi.right_asymptotic_slope();
  return {L, U};
}

// min over ell1 of g(ell1) for a discrete convex g whose finite region is
// contained in [feas_lo, feas_hi]; the scan is limited to
// [center - width, center + width] after clamping center into that region.
ExtInt convex_window_min(ExtInt feas_lo, ExtInt feas_hi, std::int64_t center, std::int64_t width,
                         const std::function<ExtInt(std::int64_t)>& g) {
  if (feas_hi < feas_lo) return ExtInt::plus_inf();
  center = clamp_to(center, feas_lo, feas_hi);
  std::int64_t a = checked::sub(center, width);
  std::int64_t b = checked::add(center, width);
  if (feas_lo.finite()) a = std::max(a, feas_lo.value());
  if (feas_hi.finite()) b = std::min(b, feas_hi.value());
  if (a > b) fail(ErrorCode::kInconclusiveWindow, "split window misses the finite region");
  ExtInt best = ExtInt::plus_inf();
  std::int64_t arg = a;
  for (std::int64_t l = a; l <= b; ++l) {
    ExtInt v = g(l);
    if (v < best) {
      best = v;
      arg = l;
    }
  }
  if (best.is_plus_inf()) fail(ErrorCode::kInconclusiveWindow, "no finite value inside split window");
  if (arg == a && (!feas_lo.finite() || a > feas_lo.value()) && g(a - 1) < best)
    fail(ErrorCode::kInconclusiveWindow, "split minimum lies left of the window");
  if (arg == b && (!feas_hi.finite() || b < feas_hi.value()) && g(b + 1) < best)
    fail(ErrorCode::kInconclusiveWindow, "split minimum lies right of the window");
  return best;
}

std::pair<ExtInt, ExtInt> sum_domain(std::span<const std::shared_ptr<const UnivariateConvex>> parts) {
  ExtInt L = 0, U = 0;
  for (const auto& p : parts) {
    auto [l, u] = conjugate_domain(*p);
    L = L + l;
    U = U + u;
  }
  return {L, U};
}

ExtInt inf_convolution(std::span<const std::shared_ptr<const UnivariateConvex>> parts, std::int64_t ell,
                       std::int64_t width) {
  if (parts.size() == 1) return conjugate_closed(*parts.front(), ell, width);
  auto rest = parts.subspan(1);
  auto [fl, fu] = conjugate_domain(*parts.front());
  auto [rl, ru] = sum_domain(rest);
  // ell1 in dom(f1) and ell - ell1 in [rl, ru].
  ExtInt lo = max(fl, ExtInt(ell) - ru);
  ExtInt hi = min(fu, ExtInt(ell) - rl);
  return convex_window_min(lo, hi, ell, width, [&](std::int64_t l1) {
    ExtInt a = conjugate_closed(*parts.front(), l1, width);
    if (a.is_plus_inf()) return a;
    return a + inf_convolution(rest, checked::sub(ell, l1), width);
  });
}

}  // namespace

UnivariateConvex::UnivariateConvex(Form f) : form_(std::move(f)) { init_domain(); }

void UnivariateConvex::init_domain() {
  std::visit(
      Overloaded{
          [&](const form::Table& t) {
            const auto& v = t.values;
            std::size_t first = v.size(), last = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
              if (v[i].is_minus_inf()) fail(ErrorCode::kInvalidArgument, "table value -inf");
              if (v[i].finite()) {
                first = std::min(first, i);
                last = i;
              }
            }
            if (first == v.size()) fail(ErrorCode::kInvalidArgument, "table has no finite value");
            for (std::size_t i = first; i <= last; ++i)
              if (!v[i].finite()) fail(ErrorCode::kInvalidArgument, "table domain is not an interval");
            for (std::size_t i = first + 1; i < last; ++i)
              if (v[i - 1] + v[i + 1] < 2 * v[i])
                fail(ErrorCode::kInvalidArgument,
                     "table violates discrete convexity at k = " +
                         std::to_string(t.k0 + static_cast<std::int64_t>(i)));
            dom_lo_ = checked::add(t.k0, static_cast<std::int64_t>(first));
            dom_hi_ = checked::add(t.k0, static_cast<std::int64_t>(last));
            anchor_ = dom_lo_.value();
            slope_lo_ = ExtInt::minus_inf();
            slope_hi_ = ExtInt::plus_inf();
          },
          [&](const form::Quadratic& q) {
            if (q.a < 1) fail(ErrorCode::kInvalidArgument, "quadratic needs a >= 1");
            dom_lo_ = ExtInt::minus_inf();
            dom_hi_ = ExtInt::plus_inf();
            anchor_ = 0;
            slope_lo_ = ExtInt::minus_inf();
            slope_hi_ = ExtInt::plus_inf();
          },
          [&](const form::VShape& f) {
            if (f.c_minus > f.c_plus) fail(ErrorCode::kInvalidArgument, "vshape needs c_minus <= c_plus");
            if (!(f.A <= ExtInt(f.k0) && ExtInt(f.k0) <= f.B))
              fail(ErrorCode::kInvalidArgument, "vshape needs A <= k0 <= B");
            dom_lo_ = f.A;
            dom_hi_ = f.B;
            anchor_ = f.k0;
            slope_lo_ = f.A.finite() ? ExtInt::minus_inf() : ExtInt(f.c_minus);
            slope_hi_ = f.B.finite() ? ExtInt::plus_inf() : ExtInt(f.c_plus);
          },
          [&](const form::FlatBottom& f) {
            if (f.c_minus > 0 || f.c_plus < 0)
              fail(ErrorCode::kInvalidArgument, "flat_bottom needs c_minus <= 0 <= c_plus");
            if (f.a.is_plus_inf() || f.b.is_minus_inf() || f.b < f.a)
              fail(ErrorCode::kInvalidArgument, "flat_bottom needs a <= b");
            if (f.a < f.A || f.B < f.b) fail(ErrorCode::kInvalidArgument, "flat_bottom needs A <= a, b <= B");
            dom_lo_ = f.A;
            dom_hi_ = f.B;
            anchor_ = f.a.finite() ? f.a.value() : (f.b.finite() ? f.b.value() : 0);
            slope_lo_ = f.A.finite() ? ExtInt::minus_inf() : ExtInt(f.a.finite() ? f.c_minus : 0);
            slope_hi_ = f.B.finite() ? ExtInt::plus_inf() : ExtInt(f.b.finite() ? f.c_plus : 0);
          },
          [&](const form::LinearPlus& f) {
            std::tie(dom_lo_, dom_hi_) = f.inner->domain();
            anchor_ = f.inner->anchor();
            slope_lo_ = f.inner->left_asymptotic_slope() + ExtInt(f.c);
            slope_hi_ = f.inner->right_asymptotic_slope() + ExtInt(f.c);
          },
          [&](const form::Shifted& f) {
            auto [lo, hi] = f.inner->domain();
            dom_lo_ = lo + ExtInt(f.k0);
            dom_hi_ = hi + ExtInt(f.k0);
            anchor_ = checked::add(f.inner->anchor(), f.k0);
            slope_lo_ = f.inner->left_asymptotic_slope();
            slope_hi_ = f.inner->right_asymptotic_slope();
          },
          [&](const form::Restricted& f) {
            if (f.B < f.A) fail(ErrorCode::kInvalidArgument, "restricted needs A <= B");
            auto [lo, hi] = f.inner->domain();
            dom_lo_ = max(lo, f.A);
            dom_hi_ = min(hi, f.B);
            if (dom_hi_ < dom_lo_) fail(ErrorCode::kInvalidArgument, "restricted domain is empty");
            anchor_ = clamp_to(f.inner->anchor(), dom_lo_, dom_hi_);
            slope_lo_ = f.A.finite() ? ExtInt::minus_inf() : f.inner->left_asymptotic_slope();
            slope_hi_ = f.B.finite() ? ExtInt::plus_inf() : f.inner->right_asymptotic_slope();
          },
          [&](const form::SumOf& f) {
            if (f.parts.empty()) fail(ErrorCode::kInvalidArgument, "sum_of needs at least one part");
            dom_lo_ = ExtInt::minus_inf();
            dom_hi_ = ExtInt::plus_inf();
            slope_lo_ = 0;
            slope_hi_ = 0;
            for (const auto& p : f.parts) {
              auto [lo, hi] = p->domain();
              dom_lo_ = max(dom_lo_, lo);
              dom_hi_ = min(dom_hi_, hi);
            }
            if (dom_hi_ < dom_lo_) fail(ErrorCode::kInvalidArgument, "sum_of domain is empty");
            for (const auto& p : f.parts) {
              slope_lo_ = slope_lo_ + p->left_asymptotic_slope();
              slope_hi_ = slope_hi_ + p->right_asymptotic_slope();
            }
            if (dom_lo_.finite()) slope_lo_ = ExtInt::minus_inf();
            if (dom_hi_.finite()) slope_hi_ = ExtInt::plus_inf();
            anchor_ = clamp_to(f.parts.front()->anchor(), dom_lo_, dom_hi_);
          },
      },
      form_);
}

UnivariateConvex UnivariateConvex::table(std::int64_t k0, std::vector<ExtInt> values) {
  return UnivariateConvex(form::Table{k0, std::move(values)});
}
UnivariateConvex UnivariateConvex::quadratic(std::int64_t a) { return UnivariateConvex(form::Quadratic{a}); }
UnivariateConvex UnivariateConvex::vshape(std::int64_t k0, std::int64_t c_minus, std::int64_t c_plus, ExtInt A,
                                          ExtInt B) {
  return UnivariateConvex(form::VShape{k0, c_minus, c_plus, A, B});
}
UnivariateConvex UnivariateConvex::flat_bottom(ExtInt a, ExtInt b, std::int64_t c_minus, std::int64_t c_plus,
                                               ExtInt A, ExtInt B) {
  return UnivariateConvex(form::FlatBottom{a, b, c_minus, c_plus, A, B});
}
UnivariateConvex UnivariateConvex::linear_plus(std::int64_t c, UnivariateConvex inner) {
  return UnivariateConvex(form::LinearPlus{c, share(std::move(inner))});
}
UnivariateConvex UnivariateConvex::shifted(std::int64_t k0, UnivariateConvex inner) {
  return UnivariateConvex(form::Shifted{k0, share(std::move(inner))});
}
UnivariateConvex UnivariateConvex::restricted(ExtInt A, ExtInt B, UnivariateConvex inner) {
  return UnivariateConvex(form::Restricted{A, B, share(std::move(inner))});
}
UnivariateConvex UnivariateConvex::sum_of(std::vector<UnivariateConvex> parts) {
  form::SumOf s;
  for (auto& p : parts) s.parts.push_back(share(std::move(p)));
  return UnivariateConvex(std::move(s));
}

ExtInt UnivariateConvex::operator()(std::int64_t k) const {
  return std::visit(
      Overloaded{
          [&](const form::Table& t) -> ExtInt {
            if (k < t.k0) return ExtInt::plus_inf();
            std::int64_t i = checked::sub(k, t.k0);
            if (i >= static_cast<std::int64_t>(t.values.size())) return ExtInt::plus_inf();
            return t.values[static_cast<std::size_t>(i)];
          },
          [&](const form::Quadratic& q) -> ExtInt { return checked::mul(q.a, checked::mul(k, k)); },
          [&](const form::VShape& f) -> ExtInt {
            if (!in_domain(k)) return ExtInt::plus_inf();
            std::int64_t d = checked::sub(k, f.k0);
            return checked::mul(d <= 0 ? f.c_minus : f.c_plus, d);
          },
          [&](const form::FlatBottom& f) -> ExtInt {
            if (!in_domain(k)) return ExtInt::plus_inf();
            if (ExtInt(k) < f.a) return checked::mul(f.c_minus, checked::sub(k, f.a.value()));
            if (f.b < ExtInt(k)) return checked::mul(f.c_plus, checked::sub(k, f.b.value()));
            return 0;
          },
          [&](const form::LinearPlus& f) -> ExtInt { return (*f.inner)(k) + ExtInt(checked::mul(f.c, k)); },
          [&](const form::Shifted& f) -> ExtInt { return (*f.inner)(checked::sub(k, f.k0)); },
          [&](const form::Restricted& f) -> ExtInt {
            if (!in_domain(k)) return ExtInt::plus_inf();
            return (*f.inner)(k);
          },
          [&](const form::SumOf& f) -> ExtInt {
            if (!in_domain(k)) return ExtInt::plus_inf();
            ExtInt s = 0;
            for (const auto& p : f.parts) s += (*p)(k);
            return s;
          },
      },
      form_);
}

ExtInt right_derivative(const UnivariateConvex& phi, std::int64_t k) {
  return phi(checked::add(k, 1)) - phi(k);
}

std::optional<std::int64_t> conjugate_argmax(const UnivariateConvex& phi, std::int64_t ell) {
  const auto [lo, hi] = phi.domain();
  const ExtInt l(ell);
  if (!lo.finite() && l < phi.left_asymptotic_slope()) return std::nullopt;
  if (!hi.finite() && phi.right_asymptotic_slope() < l) return std::nullopt;

  auto d = [&](std::int64_t k) { return right_derivative(phi, k); };

  // Right bracket: phi'(kr) >= ell.
  std::int64_t kr;
  if (hi.finite()) {
    kr = hi.value();
  } else {
    kr = phi.anchor();
    for (std::int64_t step = 1; d(kr) < l; step = checked::mul(step, 2)) kr = checked::add(kr, step);
  }
  if (d(kr - 1) <= l) return kr;

  // Walk left until phi'(kl) < ell, or a fitting point turns up on the way.
  std::int64_t kl;
  for (std::int64_t step = 1;; step = checked::mul(step, 2)) {
    std::int64_t cand = checked::sub(kr, step);
    if (lo.finite() && cand < lo.value()) cand = lo.value();
    if (d(cand) < l) {
      kl = cand;
      break;
    }
    if (d(cand - 1) <= l) return cand;
    kr = cand;
  }
  // phi'(kl) < ell <= phi'(kr); smallest k with phi'(k) >= ell fits.
  while (kr - kl > 1) {
    std::int64_t mid = kl + (kr - kl) / 2;
    if (d(mid) < l)
      kl = mid;
    else
      kr = mid;
  }
  return kr;
}

ExtInt conjugate_eval(const UnivariateConvex& phi, std::int64_t ell) {
  auto k = conjugate_argmax(phi, ell);
  if (!k) return ExtInt::plus_inf();
  return ExtInt(checked::mul(*k, ell)) - phi(*k);
}

ExtInt conjugate_closed(const UnivariateConvex& phi, std::int64_t ell, std::int64_t split_window) {
  return std::visit(
      Overloaded{
          [&](const form::Table&) -> ExtInt {
            fail(ErrorCode::kUnsupportedForm, "no closed-form conjugate for table");
          },
          [&](const form::Quadratic& q) -> ExtInt {
            std::int64_t k = checked::floor_div(checked::add(ell, q.a), checked::mul(2, q.a));
            return checked::mul(k, checked::sub(ell, checked::mul(q.a, k)));
          },
          [&](const form::VShape& f) -> ExtInt {
            if (ell < f.c_minus) {
              if (!f.A.finite()) return ExtInt::plus_inf();
              std::int64_t A = f.A.value();
              return checked::sub(checked::mul(A, ell), checked::mul(f.c_minus, checked::sub(A, f.k0)));
            }
            if (ell > f.c_plus) {
              if (!f.B.finite()) return ExtInt::plus_inf();
              std::int64_t B = f.B.value();
              return checked::sub(checked::mul(B, ell), checked::mul(f.c_plus, checked::sub(B, f.k0)));
            }
            return checked::mul(f.k0, ell);
          },
          [&](const form::FlatBottom& f) -> ExtInt {
            if (ell < f.c_minus) {
              if (!f.A.finite()) return ExtInt::plus_inf();
              std::int64_t A = f.A.value();
              return checked::sub(checked::mul(A, ell), checked::mul(f.c_minus, checked::sub(A, f.a.value())));
            }
            if (ell > f.c_plus) {
              if (!f.B.finite()) return ExtInt::plus_inf();
              std::int64_t B = f.B.value();
              return checked::sub(checked::mul(B, ell), checked::mul(f.c_plus, checked::sub(B, f.b.value())));
            }
            if (ell < 0) return ell * f.a;
            if (ell > 0) return ell * f.b;
            return 0;
          },
          [&](const form::LinearPlus& f) -> ExtInt {
            return conjugate_closed(*f.inner, checked::sub(ell, f.c), split_window);
          },
          [&](const form::Shifted& f) -> ExtInt {
            ExtInt v = conjugate_closed(*f.inner, ell, split_window);
            return v + ExtInt(checked::mul(f.k0, ell));
          },
          [&](const form::Restricted& f) -> ExtInt {
            // min over ell1 + ell2 = ell of inner*(ell1) + max(A ell2, B ell2).
            auto support = [&](std::int64_t l2) -> ExtInt {
              if (l2 == 0) return 0;
              return l2 > 0 ? times(l2, f.B) : times(l2, f.A);
            };
            auto [il, iu] = conjugate_domain(*f.inner);
            ExtInt sl = f.A.finite() ? ExtInt::minus_inf() : ExtInt(0);
            ExtInt su = f.B.finite() ? ExtInt::plus_inf() : ExtInt(0);
            ExtInt lo = max(il, ExtInt(ell) - su);
            ExtInt hi = min(iu, ExtInt(ell) - sl);
            return convex_window_min(lo, hi, ell, split_window, [&](std::int64_t l1) {
              ExtInt a = conjugate_closed(*f.inner, l1, split_window);
              if (a.is_plus_inf()) return a;
              return a + support(checked::sub(ell, l1));
            });
          },
          [&](const form::SumOf& f) -> ExtInt {
            return inf_convolution(std::span(f.parts), ell, split_window);
          },
      },
      phi.form());
}

std::pair<bool, FittingWitness> is_fitting(const UnivariateConvex& phi, std::int64_t k_star, std::int64_t ell_star) {
  auto [lower, upper] = subdifferential_interval(phi, k_star);
  FittingWitness w{k_star, ell_star, lower, upper};
  return {lower <= ExtInt(ell_star) && ExtInt(ell_star) <= upper, w};
}

std::pair<ExtInt, ExtInt> subdifferential_interval(const UnivariateConvex& phi, std::int64_t k_star) {
  if (!phi.in_domain(k_star))
    fail(ErrorCode::kDomain, "k = " + std::to_string(k_star) + " outside dom(phi)");
  return {right_derivative(phi, checked::sub(k_star, 1)), right_derivative(phi, k_star)};
}

UnivariateConvex materialize(const UnivariateConvex& phi, std::int64_t lo, std::int64_t hi) {
  auto [dl, dh] = phi.domain();
  if (dl.finite()) lo = std::max(lo, dl.value());
  if (dh.finite()) hi = std::min(hi, dh.value());
  if (lo > hi) fail(ErrorCode::kInvalidArgument, "materialize window misses dom(phi)");
  std::vector<ExtInt> values;
  for (std::int64_t k = lo; k <= hi; ++k) values.push_back(phi(k));
  return UnivariateConvex::table(lo, std::move(values));
}

UnivariateConvex materialize_conjugate(const UnivariateConvex& phi, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail(ErrorCode::kInvalidArgument, "empty conjugate window");
  std::vector<ExtInt> values;
  for (std::int64_t l = lo; l <= hi; ++l) values.push_back(conjugate_eval(phi, l));
  return UnivariateConvex::table(lo, std::move(values));
}

SeparableConvex::SeparableConvex(std::vector<std::string> names, std::vector<UnivariateConvex> parts)
    : names_(std::move(names)), parts_(std::move(parts)) {
  if (names_.size() != parts_.size()) fail(ErrorCode::kInvalidArgument, "names/parts size mismatch");
}

SeparableConvex SeparableConvex::uniform(std::size_t n, const UnivariateConvex& phi) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  return SeparableConvex(std::move(names), std::vector<UnivariateConvex>(n, phi));
}

SeparableConvex SeparableConvex::linear(std::span<const std::int64_t> c) {
  std::vector<std::string> names;
  std::vector<UnivariateConvex> parts;
  for (std::size_t i = 0; i < c.size(); ++i) {
    names.push_back("e" + std::to_string(i + 1));
    parts.push_back(UnivariateConvex::linear(c[i]));
  }
  return SeparableConvex(std::move(names), std::move(parts));
}

ExtInt SeparableConvex::operator()(std::span<const std::int64_t> z) const {
  if (z.size() != parts_.size()) fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  ExtInt s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) s += parts_[i](z[i]);
  return s;
}

bool SeparableConvex::is_square_sum() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const UnivariateConvex& p) {
    const auto* q = std::get_if<form::Quadratic>(&p.form());
    return q != nullptr && q->a == 1;
  });
}

std::vector<ExtInt> right_derivative(const SeparableConvex& Phi, std::span<const std::int64_t> z) {
  if (z.size() != Phi.size()) fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  std::vector<ExtInt> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back(right_derivative(Phi[i], z[i]));
  return out;
}

std::vector<ExtInt> left_derivative(const SeparableConvex& Phi, std::span<const std::int64_t> z) {
  if (z.size() != Phi.size()) fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  std::vector<ExtInt> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back(right_derivative(Phi[i], checked::sub(z[i], 1)));
  return out;
}

ExtInt separable_conjugate(const SeparableConvex& Phi, std::span<const std::int64_t> w) {
  if (w.size() != Phi.size()) fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  ExtInt s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    ExtInt c = conjugate_eval(Phi[i], w[i]);
    if (c.is_plus_inf()) return c;
    s += c;
  }
  return s;
}

std::optional<std::size_t> first_unfitting(const SeparableConvex& Phi, std::span<const std::int64_t> z,
                                           std::span<const std::int64_t> w) {
  if (z.size() != Phi.size() || w.size() != Phi.size())
    fail(ErrorCode::kInvalidArgument, "vector length differs from |S|");
  for (std::size_t i = 0; i < z.size(); ++i) {
    auto [lower, upper] = subdifferential_interval(Phi[i], z[i]);
    if (ExtInt(w[i]) < lower || upper < ExtInt(w[i])) return i;
  }
  return std::nullopt;
}

std::int64_t square_conjugate(std::int64_t ell) {
  return checked::mul(checked::floor_div(ell, 2), checked::ceil_div(ell, 2));
}

}  // namespace dctk
