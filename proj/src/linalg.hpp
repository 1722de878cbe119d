// Small exact linear algebra over Rational, shared by the LP oracle and the
// box probe. Private to the library.
#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "dctk/ext_int.hpp"
#include "dctk/rational.hpp"

namespace dctk::detail {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RMat& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c].is_zero()) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    Rational inv = Rational(1) / a[r][c];
    for (auto& v : a[r]) v = v * inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank_of(RMat a, std::size_t ncols) { return rref(a, ncols).size(); }

/// Basis of {x : a x = 0}.
inline RMat nullspace(RMat a, std::size_t n) {
  auto piv = rref(a, n);
  std::vector<bool> is_pivot(n, false);
  for (auto c : piv) is_pivot[c] = true;
  RMat basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RVec v(n, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Unique solution of the square system a x = b, or nullopt if singular.
inline std::optional<RVec> solve_square(RMat a, const RVec& b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto piv = rref(a, n);
  if (piv.size() < n) return std::nullopt;
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

/// Inverse of a square matrix, or nullopt if singular.
inline std::optional<RMat> inverse(RMat a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n, Rational(0));
    a[i][n + i] = 1;
  }
  auto piv = rref(a, n);
  if (piv.size() < n) return std::nullopt;
  RMat inv(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  return checked::mul(a / std::gcd(a, b), b);
}

/// Scales a rational direction to the primitive integer vector with the same sign.
inline std::vector<std::int64_t> primitive(const RVec& v) {
  std::int64_t l = 1;
  for (const auto& x : v) l = lcm64(l, x.den());
  std::vector<std::int64_t> out;
  std::int64_t g = 0;
  for (const auto& x : v) {
    std::int64_t s = checked::mul(x.num(), l / x.den());
    out.push_back(s);
    g = std::gcd(g, s < 0 ? -s : s);
  }
  if (g > 1)
    for (auto& s : out) s /= g;
  return out;
}

/// Calls f(indices) for every k-subset of [0, m) in lexicographic order
/// until f returns false. Returns false if stopped early.
template <class F>
bool for_each_combination(std::size_t m, std::size_t k, F&& f) {
  if (k > m) return true;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!f(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// C(m, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (m - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace dctk::detail
