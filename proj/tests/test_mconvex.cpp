#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "dctk/fixtures.hpp"
#include "dctk/mconvex.hpp"
#include "oracles.hpp"

using namespace dctk;
using U = UnivariateConvex;

namespace {

const ExtInt kNegInf = ExtInt::minus_inf();

SeparableConvex sep(std::vector<U> parts) {
  std::vector<std::string> names;
  for (std::size_t s = 0; s < parts.size(); ++s) names.push_back("e" + std::to_string(s + 1));
  return SeparableConvex(names, parts);
}

SeparableConvex linear(IntVec c) { return SeparableConvex::linear(c); }

fixtures::CostFamily family(int i) { return static_cast<fixtures::CostFamily>(i % 4); }

}  // namespace

TEST_CASE("supermodular validation") {
  CHECK_THROWS_AS(SupermodularFn(2, {0, 1, 1, 1}), Error);       // submodular
  CHECK_THROWS_AS(SupermodularFn(2, {1, 0, 0, 2}), Error);       // p(empty) != 0
  CHECK_THROWS_AS(SupermodularFn(2, {0, 0, 0, kNegInf}), Error); // p(S) infinite
  CHECK_NOTHROW(SupermodularFn(2, {0, kNegInf, 0, 2}));
  std::vector<ExtInt> bad{0, 1, 1, 1};
  auto v = supermodular_violation(2, bad);
  REQUIRE(v);
}

TEST_CASE("complement") {
  auto c = complement(fixtures::p2());
  CHECK(c == std::vector<ExtInt>{0, 2, 2, 2});
  SupermodularFn zero(2, {0, 0, 0, 0});
  CHECK(complement(zero) == std::vector<ExtInt>{0, 0, 0, 0});
  fixtures::Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    SupermodularFn p = fixtures::random_supermodular(rng, 3);
    auto c1 = complement(p);
    // p(X) = p(S) - pbar(S - X).
    for (std::uint32_t x = 0; x <= p.full(); ++x) CHECK(p(x) == p(p.full()) - c1[p.full() ^ x]);
  }
}

TEST_CASE("induced system") {
  CHECK(to_system(fixtures::p2()) == fixtures::p2sys());
  SupermodularFn q(2, {0, kNegInf, 0, 2});
  CHECK(to_system(q).num_rows() == 2);
  SupermodularFn one(1, {0, 4});
  LinearSystem s1 = to_system(one);
  REQUIRE(s1.num_rows() == 1);
  CHECK(s1.row(0).kind == RowKind::kEq);
}

TEST_CASE("membership") {
  IntVec a{1, 1}, b{2, 1}, c{-1, 3};
  CHECK(member(fixtures::p2(), a));
  CHECK_FALSE(member(fixtures::p2(), b));
  CHECK_FALSE(member(fixtures::p2(), c));
}

TEST_CASE("Lovasz extension and greedy") {
  const auto p = fixtures::p2();
  IntVec w31{3, 1}, w11{1, 1}, w00{0, 0}, w13{1, 3};
  CHECK(lovasz_extension(p, w31) == ExtInt(2));
  CHECK(lovasz_extension(p, w11) == ExtInt(2));
  CHECK(lovasz_extension(p, w00) == ExtInt(0));
  CHECK(greedy_min(p, w31) == IntVec{0, 2});
  CHECK(greedy_min(p, w13) == IntVec{2, 0});
  CHECK(greedy_min(p, w11) == IntVec{0, 2});
  // -inf prefix met by a positive gap.
  SupermodularFn q(2, {0, kNegInf, 0, 2});
  IntVec w10{1, 0};
  CHECK(lovasz_extension(q, w10) == kNegInf);
  CHECK_THROWS_AS(greedy_min(q, w10), Error);
}

TEST_CASE("greedy equals Lovasz equals brute force") {
  fixtures::Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    SupermodularFn p = fixtures::random_supermodular(rng, 2 + static_cast<std::size_t>(i % 3));
    for (int k = 0; k < 10; ++k) {
      IntVec w(p.n());
      for (auto& x : w) x = rng.uniform(-4, 4);
      IntVec z = greedy_min(p, w);
      CHECK(oracle::in_base(p, z));
      auto brute = oracle::base_min(p, [&](const IntVec& x) { return ExtInt(oracle::dot(w, x)); });
      CHECK(lovasz_extension(p, w) == ExtInt(oracle::dot(w, z)));
      CHECK(brute.value == ExtInt(oracle::dot(w, z)));
      for (auto top : strict_top_sets(w)) CHECK(is_tight(p, z, top));
    }
  }
}

TEST_CASE("minimization") {
  const auto p = fixtures::p2();
  CHECK(minimize_separable(p, SeparableConvex::square_sum(2)) == IntVec{1, 1});
  CHECK(minimize_separable(p, linear({3, 1})) == IntVec{0, 2});
  auto Phi = sep({U::shifted_square(2, 1), U::quadratic(1)});
  IntVec z = minimize_separable(p, Phi);
  CHECK(z == IntVec{2, 0});
  CHECK(Phi(z) == ExtInt(0));
}

TEST_CASE("smallest tight sets") {
  const auto p = fixtures::p2();
  IntVec z11{1, 1}, z02{0, 2}, z20{2, 0};
  CHECK(smallest_tight_set(p, z11, 0) == 3u);
  CHECK(smallest_tight_set(p, z02, 0) == 1u);
  CHECK(smallest_tight_set(p, z20, 1) == 2u);
}

TEST_CASE("dual certificate") {
  const auto p = fixtures::p2();
  IntVec z11{1, 1}, z02{0, 2}, z20{2, 0};
  CHECK(dual_certificate(p, SeparableConvex::square_sum(2), z11).w == IntVec{3, 3});
  CHECK(dual_certificate(p, linear({3, 1}), z02).w == IntVec{3, 1});
  CHECK(dual_certificate(p, sep({U::shifted_square(2, 1), U::quadratic(1)}), z20).w == IntVec{1, 1});
}

TEST_CASE("optimality verification") {
  const auto p = fixtures::p2();
  const auto sq = SeparableConvex::square_sum(2);
  IntVec z11{1, 1}, z02{0, 2}, w33{3, 3}, w32{3, 2};
  MinMaxReport rep = verify_mconvex_optimality(p, sq, z11, w33);
  CHECK(rep.equality);
  CHECK(rep.primal_value == ExtInt(2));
  CHECK(rep.extra_values.at("lovasz") == ExtInt(6));
  try {
    verify_mconvex_optimality(p, sq, z02, w33);
    FAIL("accepted");
  } catch (const CriteriaViolated& e) {
    CHECK(e.criterion() == "fitting");
    CHECK(e.index() == 0);
  }
  try {
    verify_mconvex_optimality(p, sq, z11, w32);
    FAIL("accepted");
  } catch (const CriteriaViolated& e) {
    CHECK(e.criterion() == "top-set");
    CHECK(e.index() == 1);
  }
}

TEST_CASE("M2 split") {
  const auto sq = SeparableConvex::square_sum(2);
  MinMaxReport a = m2_minimize_and_split(fixtures::p2(), fixtures::p2b(), sq, Window::uniform(2, -3, 3));
  CHECK(a.primal_value == ExtInt(2));
  CHECK(a.primal_witness == IntVec{1, 1});
  CHECK(a.dual_value == ExtInt(2));
  CHECK(a.equality);
  REQUIRE(a.dual_cost);
  REQUIRE(a.dual_cost2);
  // The reported split is some maximizer; check it evaluates to the dual value.
  IntVec sum{(*a.dual_cost)[0] + (*a.dual_cost2)[0], (*a.dual_cost)[1] + (*a.dual_cost2)[1]};
  CHECK(lovasz_extension(fixtures::p2(), *a.dual_cost) + lovasz_extension(fixtures::p2b(), *a.dual_cost2) -
            separable_conjugate(sq, sum) ==
        ExtInt(2));
  CHECK(m2_minimize_and_split(fixtures::p2(), fixtures::p2(), sq, Window::uniform(2, -3, 3)).primal_value ==
        ExtInt(2));
  MinMaxReport c = m2_minimize_and_split(fixtures::p2(), fixtures::p2b(), linear({0, 1}), Window::uniform(2, -3, 3));
  CHECK(c.primal_value == ExtInt(0));
  CHECK(c.primal_witness == IntVec{2, 0});
  CHECK(c.equality);
  SupermodularFn far(2, {0, 3, 0, 3});
  CHECK_THROWS_AS(m2_minimize_and_split(fixtures::p2(), far, sq, Window::uniform(2, -3, 3)), Error);
}

TEST_CASE("descent is globally optimal with a valid certificate") {
  fixtures::Rng rng(4);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 3);
    SupermodularFn p = fixtures::random_supermodular(rng, n);
    SeparableConvex Phi = fixtures::random_cost(rng, n, family(i));
    IntVec z = minimize_separable(p, Phi);
    auto brute = oracle::base_min(p, [&](const IntVec& x) { return Phi(x); });
    CHECK(Phi(z) == brute.value);
    DualCertificate cert = dual_certificate(p, Phi, z);
    MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, cert.w);
    CHECK(rep.equality);
    CHECK(rep.dual_value == lovasz_extension(p, cert.w) - oracle::separable_conjugate(Phi, cert.w));
    if (Phi.is_square_sum()) CHECK(square_sum_dual(p, cert.w) == rep.primal_value);
  }
}

TEST_CASE("ring families") {
  fixtures::Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    SupermodularFn p = fixtures::random_ring_supermodular(rng, 3);
    SeparableConvex Phi = fixtures::random_cost(rng, 3, fixtures::CostFamily::kShiftedSquare);
    IntVec z = minimize_separable(p, Phi);
    auto brute = oracle::base_min(p, [&](const IntVec& x) { return Phi(x); });
    CHECK(Phi(z) == brute.value);
    MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, dual_certificate(p, Phi, z).w);
    CHECK(rep.equality);
  }
}

TEST_CASE("exchange feasibility matches tight sets") {
  fixtures::Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    SupermodularFn p = fixtures::random_supermodular(rng, 3);
    auto [lo, hi] = oracle::base_box(p);
    oracle::boxes(lo, hi, [&](const IntVec& z) {
      if (!oracle::in_base(p, z)) return;
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t t = 0; t < 3; ++t) {
          if (s == t) continue;
          IntVec y = z;
          --y[s];
          ++y[t];
          bool blocked = false;
          for (std::uint32_t x = 1; x < p.full(); ++x)
            if (((x >> s) & 1u) && !((x >> t) & 1u) && is_tight(p, z, x)) blocked = true;
          CHECK(oracle::in_base(p, y) == !blocked);
          CHECK(!blocked == (((smallest_tight_set(p, z, s) >> t) & 1u) != 0));
        }
    });
  }
}

TEST_CASE("unbounded and infeasible descent") {
  // x1 >= 0, x1 + x2 = 0: the ray (1, -1) decreases x2 forever.
  SupermodularFn q(2, {0, 0, kNegInf, 0});
  IntVec c{0, 1};
  try {
    minimize_separable(q, SeparableConvex::linear(c));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnbounded);
  }
  IntVec d{1, 0};
  CHECK(minimize_separable(q, SeparableConvex::linear(d)) == IntVec{0, 0});
  // A line has no greedy base to start from.
  SupermodularFn line(2, {0, kNegInf, kNegInf, 0});
  try {
    minimize_separable(line, SeparableConvex::linear(d));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedForm);
  }
  auto Phi = sep({U::restricted(5, 6, U::quadratic(1)), U::restricted(0, 0, U::quadratic(1))});
  try {
    minimize_separable(fixtures::p2(), Phi);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}
