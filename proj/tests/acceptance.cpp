// Acceptance run: one PASS/FAIL line per criterion. Every comparison is exact
// integer equality against an independent brute-force oracle.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dctk/fixtures.hpp"
#include "dctk/inverse.hpp"
#include "dctk/mconvex.hpp"
#include "dctk/netflow.hpp"
#include "oracles.hpp"

using namespace dctk;
using fixtures::Rng;

namespace {

struct Tally {
  long checks = 0, failures = 0;
  std::string first;
  std::string note;

  void expect(bool ok, const std::function<std::string()>& detail) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = detail();
  }
  // Runs f and records any thrown error as a failure.
  void guard(const std::string& what, const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      expect(false, [&] { return what + ": " + e.what(); });
    }
  }
};

std::string show(std::span<const std::int64_t> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

IntVec random_vec(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  IntVec v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
}

std::vector<IntVec> base_points(const SupermodularFn& p) {
  std::vector<IntVec> out;
  auto [lo, hi] = oracle::base_box(p);
  oracle::boxes(lo, hi, [&](const IntVec& z) {
    if (oracle::in_base(p, z)) out.push_back(z);
  });
  return out;
}

// Strict w-top sets straight from the definition.
std::vector<std::uint32_t> top_sets(std::span<const std::int64_t> w) {
  std::set<std::int64_t> values(w.begin(), w.end());
  std::vector<std::uint32_t> out;
  for (auto it = std::next(values.begin()); it != values.end(); ++it) {
    std::uint32_t m = 0;
    for (std::size_t s = 0; s < w.size(); ++s)
      if (w[s] >= *it) m |= 1u << s;
    out.push_back(m);
  }
  return out;
}

std::int64_t floor_half(std::int64_t w) { return w >= 0 ? w / 2 : -((1 - w) / 2); }

std::int64_t mask_sum(std::span<const std::int64_t> z, std::uint32_t m) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if ((m >> i) & 1u) s += z[i];
  return s;
}

// ---------------------------------------------------------------------------
// Shared corpora

std::vector<UnivariateConvex> univariate_corpus() {
  Rng rng(1001);
  std::vector<UnivariateConvex> out;
  for (int i = 0; i < 240; ++i) out.push_back(fixtures::random_univariate(rng));
  return out;
}

struct MInstance {
  SupermodularFn p;
  SeparableConvex Phi;
  fixtures::CostFamily family;
};

std::vector<MInstance> mconvex_corpus() {
  Rng rng(1003);
  std::vector<MInstance> out;
  for (int i = 0; i < 120; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    auto fam = static_cast<fixtures::CostFamily>((i / 4) % 4);
    SupermodularFn p = fixtures::random_supermodular(rng, n, -5, 5);
    out.push_back({p, fixtures::random_cost(rng, n, fam), fam});
  }
  return out;
}

struct SysFixture {
  std::string name;
  LinearSystem sys;
  Window win;
  std::vector<IntVec> points;
};

// Base systems with 2 <= |S| <= max_n and small capacitated flow systems.
std::vector<SysFixture> system_corpus(std::uint64_t seed, int bases, int flows, std::size_t max_n = 3) {
  Rng rng(seed);
  std::vector<SysFixture> out;
  for (int i = 0; i < bases; ++i) {
    SupermodularFn p = fixtures::random_supermodular(rng, 2 + static_cast<std::size_t>(i) % (max_n - 1), -4, 4);
    SysFixture f{"base#" + std::to_string(i), to_system(p), base_window(p), base_points(p)};
    out.push_back(std::move(f));
  }
  for (int i = 0; i < flows; ++i) {
    FlowInstance inst = fixtures::random_flow(rng, 3, 3, 2);
    LinearSystem sys = flow_system(inst);
    IntVec hi;
    for (const auto& g : inst.upper) hi.push_back(g.value());
    Window win{IntVec(hi.size(), 0), hi};
    SysFixture f{"flow#" + std::to_string(i), sys, win, enumerate_integer_points(sys, win)};
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criteria

Tally criterion1() {
  Tally t;
  auto corpus = univariate_corpus();
  long closed = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& phi = corpus[i];
    auto [lo, hi] = phi.domain();
    t.expect(lo.finite() && hi.finite() && ExtInt(-8) <= lo && hi <= ExtInt(8),
             [&] { return "instance " + std::to_string(i) + " has domain outside [-8,8]"; });
    t.guard("instance " + std::to_string(i), [&] {
      for (std::int64_t l = -12; l <= 12; ++l) {
        ExtInt expected = oracle::conjugate(phi, l);
        ExtInt got = conjugate_eval(phi, l);
        t.expect(got == expected, [&] {
          return "instance " + std::to_string(i) + " l=" + std::to_string(l) + ": " + got.to_string() + " vs " +
                 expected.to_string();
        });
        try {
          ExtInt c = conjugate_closed(phi, l);
          ++closed;
          t.expect(c == expected, [&] { return "closed form differs at instance " + std::to_string(i); });
        } catch (const Error& e) {
          t.expect(e.code() == ErrorCode::kUnsupportedForm, [&] { return std::string(e.what()); });
        }
      }
      // Biconjugation over every slope that occurs inside the domain.
      std::int64_t L = 1;
      for (std::int64_t k = lo.value(); k < hi.value(); ++k) L = std::max(L, std::abs((phi(k + 1) - phi(k)).value()) + 1);
      for (std::int64_t k = lo.value(); k <= hi.value(); ++k) {
        ExtInt best = ExtInt::minus_inf();
        for (std::int64_t l = -L; l <= L; ++l) best = max(best, ExtInt(k * l) - conjugate_eval(phi, l));
        t.expect(best == phi(k), [&] { return "biconjugate differs at instance " + std::to_string(i); });
      }
    });
  }
  t.note = std::to_string(corpus.size()) + " instances, " + std::to_string(closed) + " closed-form evaluations";
  return t;
}

Tally criterion2() {
  Tally t;
  auto corpus = univariate_corpus();
  long pairs = 0, fitting = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& phi = corpus[i];
    auto [lo, hi] = phi.domain();
    for (std::int64_t l = -12; l <= 12; ++l) {
      ExtInt conj = oracle::conjugate(phi, l);
      for (std::int64_t k = lo.value(); k <= hi.value(); ++k) {
        bool expected = phi(k) + conj == ExtInt(k * l);
        bool got = is_fitting(phi, k, l).first;
        ++pairs;
        fitting += expected;
        t.expect(got == expected, [&] {
          return "instance " + std::to_string(i) + " (k,l)=(" + std::to_string(k) + "," + std::to_string(l) + ")";
        });
      }
    }
  }
  t.note = std::to_string(pairs) + " pairs, " + std::to_string(fitting) + " fitting";
  return t;
}

Tally criterion3() {
  Tally t;
  auto corpus = mconvex_corpus();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& [p, Phi, fam] = corpus[i];
    t.guard("instance " + std::to_string(i), [&] {
      IntVec z = minimize_separable(p, Phi);
      auto brute = oracle::base_min(p, [&](const IntVec& x) { return Phi(x); });
      t.expect(oracle::in_base(p, z) && Phi(z) == brute.value, [&] {
        return "instance " + std::to_string(i) + ": " + Phi(z).to_string() + " vs " + brute.value.to_string();
      });
      DualCertificate cert = dual_certificate(p, Phi, z);
      MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, cert.w);
      ExtInt dual = lovasz_extension(p, cert.w) - oracle::separable_conjugate(Phi, cert.w);
      t.expect(rep.equality && rep.verified && dual == brute.value && rep.dual_value == dual,
               [&] { return "instance " + std::to_string(i) + ": min-max gap with w=" + show(cert.w); });
      if (fam == fixtures::CostFamily::kSquareSum)
        t.expect(square_sum_dual(p, cert.w) == brute.value,
                 [&] { return "instance " + std::to_string(i) + ": square-sum expression differs"; });
    });
  }
  t.note = std::to_string(corpus.size()) + " instances, n in 2..5";
  return t;
}

Tally criterion4() {
  Tally t;
  auto corpus = mconvex_corpus();
  Rng rng(1004);
  long weights = 0, points = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const SupermodularFn& p = corpus[i].p;
    auto pts = base_points(p);
    points += static_cast<long>(pts.size());
    for (int k = 0; k < 20; ++k, ++weights) {
      IntVec w = random_vec(rng, p.n(), -5, 5);
      t.guard("instance " + std::to_string(i), [&] {
        IntVec g = greedy_min(p, w);
        std::int64_t best = INT64_MAX;
        for (const auto& z : pts) best = std::min(best, oracle::dot(w, z));
        ExtInt lov = lovasz_extension(p, w);
        t.expect(oracle::in_base(p, g) && oracle::dot(w, g) == best && lov == ExtInt(best), [&] {
          return "instance " + std::to_string(i) + " w=" + show(w) + ": greedy " + std::to_string(oracle::dot(w, g)) +
                 ", lovasz " + lov.to_string() + ", brute " + std::to_string(best);
        });
        for (auto m : top_sets(w))
          t.expect(ExtInt(mask_sum(g, m)) == p(m),
                   [&] { return "top set " + std::to_string(m) + " not tight at instance " + std::to_string(i); });
      });
    }
  }
  t.note = std::to_string(corpus.size()) + " instances with " + std::to_string(points) + " integer bases, " +
           std::to_string(weights) + " weights";
  return t;
}

// Pairs with a subgradient at the common-base optimum inside the w-window.
Tally criterion5() {
  Tally t;
  Rng rng(1005);
  const std::int64_t W = 3;
  int pairs = 0, square = 0, tries = 0;
  while (pairs < 36 && tries < 20000) {
    ++tries;
    const std::size_t n = 2 + static_cast<std::size_t>(pairs % 3);
    SupermodularFn p1 = fixtures::random_supermodular(rng, n, -2, 2);
    SupermodularFn p2 = fixtures::random_supermodular(rng, n, -2, 2);
    std::vector<IntVec> common;
    for (const auto& z : base_points(p1))
      if (oracle::in_base(p2, z)) common.push_back(z);
    if (common.empty()) continue;
    const bool sq = pairs % 2 == 0;
    SeparableConvex Phi = sq ? SeparableConvex::square_sum(n) : fixtures::centered_square_cost(rng, pick(rng, common));
    oracle::Min best;
    for (const auto& z : common) {
      ExtInt v = Phi(z);
      if (v < best.value) best = {v, z};
    }
    bool fits = true;
    for (std::size_t s = 0; s < n; ++s) {
      auto [a, b] = subdifferential_interval(Phi[s], best.argmin[s]);
      if (b < ExtInt(-W) || ExtInt(W) < a) fits = false;
    }
    if (!fits) continue;
    ++pairs;
    square += sq;
    t.guard("pair " + std::to_string(pairs), [&] {
      MinMaxReport rep = m2_minimize_and_split(p1, p2, Phi, Window::uniform(n, -W, W));
      t.expect(rep.primal_value == best.value && rep.dual_value == best.value && rep.equality, [&] {
        return "pair " + std::to_string(pairs) + ": primal " + rep.primal_value.to_string() + ", dual " +
               rep.dual_value.to_string() + ", brute " + best.value.to_string();
      });
      if (rep.dual_cost && rep.dual_cost2) {
        IntVec sum(n);
        for (std::size_t s = 0; s < n; ++s) sum[s] = (*rep.dual_cost)[s] + (*rep.dual_cost2)[s];
        ExtInt split = lovasz_extension(p1, *rep.dual_cost) + lovasz_extension(p2, *rep.dual_cost2) -
                       oracle::separable_conjugate(Phi, sum);
        t.expect(split == best.value, [&] { return "pair " + std::to_string(pairs) + ": split does not evaluate"; });
        if (sq) {
          ExtInt expr = lovasz_extension(p1, *rep.dual_cost) + lovasz_extension(p2, *rep.dual_cost2);
          for (auto w : sum) expr -= ExtInt(floor_half(w) * (w - floor_half(w)));
          t.expect(expr == best.value,
                   [&] { return "pair " + std::to_string(pairs) + ": square-sum expression differs"; });
        }
      } else {
        t.expect(false, [&] { return "pair " + std::to_string(pairs) + ": no split reported"; });
      }
    });
  }
  t.expect(pairs >= 30, [&] { return "only " + std::to_string(pairs) + " pairs generated"; });
  t.note = std::to_string(pairs) + " pairs (" + std::to_string(square) + " square-sum), n in 2..4, w-window +-3";
  return t;
}

Tally criterion6() {
  Tally t;
  Rng rng(1006);
  int embedded = 0;
  const int count = 60;
  for (int i = 0; i < count; ++i) {
    FlowInstance inst = fixtures::random_flow(rng, 4, 6, 3);
    t.guard("flow " + std::to_string(i), [&] {
      FlowResult r = min_convex_cost_flow(inst);
      auto brute = oracle::flow_min(inst, 3);
      t.expect(r.cost == brute.value && oracle::inflow(inst.graph, r.flow) == inst.m, [&] {
        return "flow " + std::to_string(i) + ": " + r.cost.to_string() + " vs " + brute.value.to_string();
      });
      MinMaxReport raw = certify_flow(inst, r.flow, r.pi_raw);
      MinMaxReport shifted = certify_flow(inst, r.flow, r.pi_shifted);
      t.expect(raw.equality && shifted.equality && raw.dual_value == brute.value,
               [&] { return "flow " + std::to_string(i) + ": potential misses equality"; });
      // Embedding through the polyhedron module on the small instances.
      LinearSystem emb = embedding_system(inst);
      if (emb.num_rows() <= 7) {
        Window win{IntVec(inst.graph.num_arcs(), 0), IntVec(inst.graph.num_arcs(), 3)};
        MinMaxReport primal = minimize_bruteforce(emb, inst.cost, win);
        auto pts = enumerate_integer_points(emb, win);
        MinMaxReport dual = dual_search_bruteforce(emb, inst.cost, kDefaultYBound, pts);
        bool ok = primal.primal_value == brute.value && dual.dual_value == brute.value;
        if (ok) ok = verify_certificate(emb, primal.primal_witness, *dual.dual_rows, inst.cost).equality;
        t.expect(ok, [&] { return "flow " + std::to_string(i) + ": embedding optimum differs"; });
        ++embedded;
      }
    });
  }
  t.expect(embedded >= 5, [&] { return "only " + std::to_string(embedded) + " embeddings"; });
  t.note = std::to_string(count) + " flows, " + std::to_string(embedded) + " embeddings";
  return t;
}

Tally criterion7() {
  Tally t;
  Rng rng(1007);
  auto corpus = system_corpus(1017, 42, 20, 4);
  int small = 0;
  for (const auto& f : corpus) {
    if (f.points.empty()) continue;
    SeparableConvex Phi = fixtures::centered_square_cost(rng, pick(rng, f.points));
    t.guard(f.name, [&] {
      auto brute = oracle::system_min(f.sys, Phi, f.win.lo, f.win.hi);
      MinMaxReport primal = minimize_bruteforce(f.sys, Phi, f.win);
      MinMaxReport dual = dual_search_bruteforce(f.sys, Phi, kDefaultYBound, f.points);
      const std::size_t n = f.sys.dim();
      MinMaxReport mu = mu_form_dual_search(f.sys, Phi, Window::uniform(n, -kDefaultWBound, kDefaultWBound));
      t.expect(primal.primal_value == brute.value && dual.dual_value == brute.value && mu.dual_value == brute.value,
               [&] {
                 return f.name + ": brute " + brute.value.to_string() + ", primal " + primal.primal_value.to_string() +
                        ", dual " + dual.dual_value.to_string() + ", mu " + mu.dual_value.to_string();
               });
      MinMaxReport cert = verify_certificate(f.sys, primal.primal_witness, *dual.dual_rows, Phi);
      t.expect(cert.equality && cert.verified, [&] { return f.name + ": certificate rejected"; });
      t.expect(dual.small_support_found, [&] { return f.name + ": no maximizer with support <= 2|S|"; });
      small += dual.small_support_found;
    });
  }
  t.note = std::to_string(corpus.size()) + " systems (42 base with |S| <= 4, 20 flow), y-bound " + std::to_string(kDefaultYBound) +
           ", w-window +-" + std::to_string(kDefaultWBound);
  return t;
}

Tally criterion8() {
  Tally t;
  Rng rng(1008);
  auto corpus = system_corpus(1018, 20, 10);
  int triples = 0, holds = 0;
  for (int i = 0; i < 150; ++i) {
    const auto& f = pick(rng, corpus);
    if (f.points.empty()) continue;
    const IntVec& z = pick(rng, f.points);
    const std::size_t n = f.sys.dim();
    std::vector<ExtInt> l(n), u(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::int64_t a = rng.uniform(-4, 3);
      l[s] = rng.coin(1, 6) ? ExtInt::minus_inf() : ExtInt(a);
      u[s] = rng.coin(1, 6) ? ExtInt::plus_inf() : ExtInt(rng.uniform(a, 4));
    }
    t.guard(f.name, [&] {
      bool cond = feasibility_condition(f.sys, z, l, u).holds;
      bool found = find_weight_in_box(f.sys, z, l, u, Window::uniform(n, -6, 6)).has_value();
      t.expect(cond == found, [&] {
        return f.name + " z=" + show(z) + ": condition " + (cond ? "holds" : "fails") + ", weight " +
               (found ? "found" : "missing");
      });
      ++triples;
      holds += cond;
    });
  }
  t.expect(triples >= 100, [&] { return "only " + std::to_string(triples) + " triples"; });
  t.note = std::to_string(triples) + " triples, " + std::to_string(holds) + " feasible";
  return t;
}

SeparableConvex random_deviation(Rng& rng, std::size_t n) {
  IntVec w0 = random_vec(rng, n, -3, 3);
  if (rng.coin(1, 2)) return l1_deviation(w0);
  return weighted_l1_deviation(w0, random_vec(rng, n, 1, 2), random_vec(rng, n, 1, 2));
}

// One inverse instance: primal against the brute-force weight scan, dual
// against the primal, plus the orthogonality and fitting certificate.
void check_inverse(Tally& t, const std::string& name, const LinearSystem& sys, const std::vector<IntVec>& points,
                   const std::vector<IntVec>& targets, const SeparableConvex& dev) {
  const std::size_t n = sys.dim();
  const Window ww = Window::uniform(n, -kDefaultWBound, kDefaultWBound);
  ExtInt brute = ExtInt::plus_inf();
  for_each_point(ww, [&](const IntVec& w) {
    std::int64_t best = INT64_MAX;
    for (const auto& z : points) best = std::min(best, oracle::dot(w, z));
    bool all = true;
    for (const auto& z : targets) all = all && oracle::dot(w, z) == best;
    if (all) brute = min(brute, dev(w));
    return true;
  });
  auto [dil, z0] = dilate_targets(sys, targets);
  InverseResult r = inverse_minimize(dil, z0, dev, ww);
  MinMaxReport rep = inverse_dual_search(tangent_cone(dil, z0), dev, conjugate_domain_window(dev),
                                         std::span<const std::int64_t>(r.w));
  t.expect(r.value == brute && rep.dual_value == brute && rep.equality, [&] {
    return name + ": primal " + r.value.to_string() + ", dual " + rep.dual_value.to_string() + ", brute " +
           brute.to_string();
  });
  if (!rep.dual_cost) return t.expect(false, [&] { return name + ": no dual witness"; });
  const IntVec& zs = *rep.dual_cost;
  bool fits = true;
  for (std::size_t s = 0; s < n; ++s) fits = fits && is_fitting(dev[s], r.w[s], zs[s]).first;
  t.expect(oracle::dot(r.w, zs) == 0 && fits && rep.verified,
           [&] { return name + ": certificate w*=" + show(r.w) + " z*=" + show(zs) + " does not verify"; });
}

Tally criterion9() {
  Tally t;
  Rng rng(1009);
  auto corpus = system_corpus(1019, 24, 12);
  int single = 0, multi = 0;
  for (int i = 0; single < 60 && i < 1000; ++i) {
    const auto& f = corpus[static_cast<std::size_t>(i) % corpus.size()];
    if (f.points.empty()) continue;
    std::vector<IntVec> targets{pick(rng, f.points)};
    SeparableConvex dev = random_deviation(rng, f.sys.dim());
    t.guard(f.name, [&] { check_inverse(t, f.name + " single", f.sys, f.points, targets, dev); });
    ++single;
  }
  for (int i = 0; multi < 24 && i < 1000; ++i) {
    const auto& f = corpus[static_cast<std::size_t>(i) % corpus.size()];
    if (f.points.empty()) continue;
    std::vector<IntVec> targets;
    const int k = 2 + static_cast<int>(rng.uniform(0, 1));
    for (int j = 0; j < k; ++j) targets.push_back(pick(rng, f.points));
    SeparableConvex dev = random_deviation(rng, f.sys.dim());
    t.guard(f.name, [&] { check_inverse(t, f.name + " multi", f.sys, f.points, targets, dev); });
    ++multi;
  }
  // Worked example: w0 = (3,1), z0 = (2,0) on the two-element base system.
  t.guard("worked example", [&] {
    LinearSystem sys = fixtures::p2sys();
    IntVec z0{2, 0}, w0{3, 1};
    SeparableConvex dev = l1_deviation(w0);
    InverseResult r = inverse_minimize(sys, z0, dev, Window::uniform(2, -1, 5));
    MinMaxReport rep = inverse_dual_search(tangent_cone(sys, z0), dev, conjugate_domain_window(dev),
                                           std::span<const std::int64_t>(r.w));
    t.expect(r.value == ExtInt(2) && rep.dual_value == ExtInt(2) && rep.verified,
             [&] { return "worked example: " + r.value.to_string() + " vs " + rep.dual_value.to_string(); });
  });
  t.expect(single >= 50 && multi >= 20, [&] { return std::string("corpus too small"); });
  t.note = std::to_string(single) + " single-target, " + std::to_string(multi) + " multi-target, worked example";
  return t;
}

Tally criterion10() {
  Tally t;
  Rng rng(1010);
  int probes = 0;
  for (int i = 0; i < 24; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
    SupermodularFn p = fixtures::random_supermodular(rng, n, -2, 2);
    LinearSystem sys = to_system(p);
    Window win = base_window(p);
    for (std::int64_t k = 1; k <= 3; ++k) {
      Window kw = win;
      for (std::size_t s = 0; s < n; ++s) {
        kw.lo[s] *= k;
        kw.hi[s] *= k;
      }
      t.guard("probe", [&] {
        BoxProbeResult r = probe_box_integer(dilation(sys, k), kw);
        t.expect(r.box_integer, [&] { return "base system " + std::to_string(i) + " k=" + std::to_string(k); });
      });
      ++probes;
    }
  }
  t.note = std::to_string(probes) + " probes on base systems and dilations k <= 3";
  return t;
}

struct Criterion {
  int id;
  const char* title;
  double limit;
  Tally (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "conjugate oracle suite", 10, criterion1},
      {2, "fitting iff conjugate equality", 10, criterion2},
      {3, "M-convex strong duality", 60, criterion3},
      {4, "greedy and Lovasz agreement", 30, criterion4},
      {5, "M2 duality", 60, criterion5},
      {6, "flow suite", 60, criterion6},
      {7, "box-TDI min-max", 120, criterion7},
      {8, "feasibility equivalence", 60, criterion8},
      {9, "inverse suite", 60, criterion9},
      {10, "box-integrality probe", 60, criterion10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.run();
    } catch (const std::exception& e) {
      t.failures = 1;
      t.first = std::string("uncaught: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = t.failures == 0 && secs < c.limit;
    failed += !pass;
    std::printf("%s criterion %d: %s | %s | %ld checks, %ld failures | %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL",
                c.id, c.title, t.note.c_str(), t.checks, t.failures, secs, c.limit);
    if (!pass && t.failures) std::printf("     first failure: %s\n", t.first.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
