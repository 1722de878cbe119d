#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dctk/cli.hpp"
#include "dctk/fixtures.hpp"
#include "dctk/json_io.hpp"

using namespace dctk;
using J = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  J doc() const { return J::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kP2 = R"({"n":2,"p":{"0":0,"1":0,"2":0,"3":2}})";
const std::string kP2b = R"({"n":2,"p":{"0":0,"1":1,"2":1,"3":2}})";
const std::string kSq = R"({"form":"quadratic","a":1})";
const std::string kD2 =
    R"({"nodes":["s","t"],"arcs":[["s","t"],["s","t"]],"m":{"s":-2,"t":2},"lower":[0,0],"upper":[null,null]})";
const std::string kArc = R"({"nodes":["s","t"],"arcs":[["s","t"]],"m":{"s":1,"t":-1}})";
const std::string kP2sys =
    R"({"rows":[{"coeffs":[1,0],"rhs":0},{"coeffs":[0,1],"rhs":0},{"coeffs":[1,1],"rhs":2,"kind":"eq"}]})";

}  // namespace

TEST_CASE("conjugate command") {
  Run r = run({"conjugate", "--phi", kSq, "--ell", "3"});
  CHECK(r.code == 0);
  CHECK(r.doc() == J{{"value", 2}});
  CHECK(run({"conjugate", "--phi", kSq, "--ell", "3", "--closed"}).doc() == J{{"closed", 2}, {"value", 2}});
  Run inf = run({"conjugate", "--phi", R"({"form":"vshape","k0":3,"c_minus":-1,"c_plus":1})", "--ell", "2"});
  CHECK(inf.code == 0);
  CHECK(inf.doc().at("value") == "+inf");
}

TEST_CASE("minimize commands") {
  Run m = run({"minimize", "mconvex", "--instance", kP2, "--phi", kSq});
  CHECK(m.code == 0);
  J d = m.doc();
  CHECK(d.at("value") == 2);
  CHECK(d.at("witness") == J{1, 1});
  CHECK(d.at("dual") == J{3, 3});
  CHECK(d.at("status") == "OK");

  Run m2 = run({"minimize", "m2", "--instance", R"({"p1":)" + kP2 + R"(,"p2":)" + kP2b + "}", "--phi", kSq});
  CHECK(m2.code == 0);
  CHECK(m2.doc().at("value") == 2);

  Run f = run({"minimize", "flow", "--instance", kD2});
  CHECK(f.code == 0);
  CHECK(f.doc().at("flow") == J{1, 1});
  CHECK(f.doc().at("value") == 2);

  Run bad = run({"minimize", "flow", "--instance", kArc});
  CHECK(bad.code == 2);
  CHECK(bad.doc().at("status") == "INFEASIBLE");
  CHECK(bad.doc().at("hoffman").at("violating_set") == J{"t"});

  Run b = run({"minimize", "boxtdi", "--system", kP2sys, "--phi", kSq});
  CHECK(b.code == 0);
  CHECK(b.doc().at("value") == 2);
}

TEST_CASE("certify commands") {
  CHECK(run({"certify", "mconvex", "--instance", kP2, "--phi", kSq, "--z", "[1,1]", "--w", "[3,3]"}).code == 0);
  Run v = run({"certify", "mconvex", "--instance", kP2, "--phi", kSq, "--z", "[2,0]", "--w", "[3,3]"});
  CHECK(v.code == 5);
  CHECK(v.doc().at("status") == "CRITERIA_VIOLATED");
  CHECK(run({"certify", "flow", "--instance", kD2, "--flow", "[1,1]", "--potential", "[0,2]"}).code == 0);
  CHECK(run({"certify", "flow", "--instance", kD2, "--flow", "[2,0]", "--potential", "[0,2]"}).code == 5);
  CHECK(run({"certify", "boxtdi", "--system", kP2sys, "--phi", kSq, "--z", "[1,1]", "--y", "[0,0,3]"}).code == 0);
  CHECK(run({"certify", "boxtdi", "--system", kP2sys, "--phi", kSq, "--z", "[2,0]", "--y", "[0,0,3]"}).code == 5);
}

TEST_CASE("inverse and probe commands") {
  Run r = run({"inverse", "--system", kP2sys, "--target", "[2,0]", "--deviation", R"({"builder":"l1","w0":[3,1]})"});
  CHECK(r.code == 0);
  CHECK(r.doc().at("value") == 2);
  CHECK(r.doc().at("report").at("dual_value") == 2);
  Run multi = run({"inverse", "--system", kP2sys, "--target", "[2,0]", "--target", "[1,1]", "--deviation",
                   R"({"builder":"l1","w0":[3,1]})"});
  CHECK(multi.code == 0);
  CHECK(multi.doc().at("targets") == 2);
  Run p = run({"probe", "boxtdi", "--system", kP2sys, "--window", "-3..3", "--dilation", "2"});
  CHECK(p.code == 0);
  CHECK(p.doc().at("box_integer") == true);
}

TEST_CASE("usage and input errors exit 4") {
  CHECK(run({}).code == 4);
  CHECK(run({"bogus"}).code == 4);
  CHECK(run({"conjugate", "--phi", kSq}).code == 4);
  Run e = run({"conjugate", "--phi", R"({"form":"table","k0":0,"values":[0,2,1]})", "--ell", "0"});
  CHECK(e.code == 4);
  CHECK_FALSE(e.err.empty());
  CHECK(run({"conjugate", "--phi", "{not json", "--ell", "0"}).code == 4);
  CHECK(run({"minimize", "mconvex", "--instance", "/nonexistent.json", "--phi", kSq}).code == 4);
}

TEST_CASE("unbounded exits 3") {
  std::string p = R"({"n":2,"p":{"0":0,"1":null,"2":0,"3":0}})";
  Run bounded = run({"minimize", "mconvex", "--instance", p, "--phi", R"({"form":"table","k0":-1,"values":[1,0,1]})"});
  CHECK(bounded.code == 0);
  CHECK(bounded.doc().at("value") == 0);
  Run ray = run({"minimize", "mconvex", "--instance", p, "--phi",
                 R"([{"form":"vshape","k0":0,"c_minus":0,"c_plus":0},)"
                 R"({"form":"linear_plus","c":-1,"inner":{"form":"vshape","k0":0,"c_minus":0,"c_plus":0}}])"});
  CHECK(ray.code == 3);
  CHECK(ray.doc().at("status") == "UNBOUNDED");
  Run u = run({"minimize", "flow", "--variant", "free", "--instance",
               R"({"nodes":["u","v"],"arcs":[["u","v"],["v","u"]],"m":{"u":0,"v":0},)"
               R"("cost":[{"form":"linear_plus","c":-1,"inner":{"form":"vshape","k0":0,"c_minus":0,"c_plus":0}},)"
               R"({"form":"vshape","k0":0,"c_minus":0,"c_plus":0}]})"});
  CHECK(u.code == 3);
  CHECK(u.doc().at("status") == "UNBOUNDED");
}

TEST_CASE("round trip of every JSON type") {
  fixtures::Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    UnivariateConvex phi = fixtures::random_univariate(rng);
    UnivariateConvex phi2 = json::univariate_from(json::parse(json::dump(json::univariate(phi))));
    CHECK(json::dump(json::univariate(phi2)) == json::dump(json::univariate(phi)));
    for (std::int64_t k = -10; k <= 10; ++k) CHECK(phi2(k) == phi(k));
    auto Phi = fixtures::random_cost(rng, 3, static_cast<fixtures::CostFamily>(i % 4));
    auto Phi2 = json::separable_from(json::parse(json::dump(json::separable(Phi))));
    CHECK(Phi2.names() == Phi.names());
    CHECK(json::dump(json::separable(Phi2)) == json::dump(json::separable(Phi)));
    auto p = fixtures::random_supermodular(rng, 3);
    CHECK(json::supermodular_from(json::parse(json::dump(json::supermodular(p)))) == p);
    auto inst = fixtures::random_flow(rng);
    auto inst2 = json::flow_instance_from(json::parse(json::dump(json::flow_instance(inst))));
    CHECK(inst2.graph == inst.graph);
    CHECK(inst2.m == inst.m);
    CHECK(inst2.lower == inst.lower);
    CHECK(inst2.upper == inst.upper);
    CHECK(json::dump(json::flow_instance(inst2)) == json::dump(json::flow_instance(inst)));
  }
  auto sys = fixtures::s3();
  CHECK(json::system_from(json::parse(json::dump(json::system(sys)))) == sys);
  Window w{{-1, 0}, {2, 3}};
  CHECK(json::window_from(json::parse(json::dump(json::window(w)))) == w);
  for (auto v : {ExtInt(-7), ExtInt::plus_inf(), ExtInt::minus_inf()})
    CHECK(json::ext_int_from(json::parse(json::dump(json::ext_int(v)))) == v);
  CHECK(json::rational(Rational(6, 4)) == "3/2");
}

TEST_CASE("output is deterministic across thread counts") {
  std::vector<std::vector<std::string>> cmds = {
      {"minimize", "boxtdi", "--system", kP2sys, "--phi", kSq},
      {"minimize", "mconvex", "--instance", kP2, "--phi", kSq},
      {"inverse", "--system", kP2sys, "--target", "[2,0]", "--deviation", R"({"builder":"l1","w0":[3,1]})"},
      {"selftest", "--seed", "5"}};
  for (const auto& c : cmds) {
    ::setenv("DCTK_THREADS", "1", 1);
    Run a = run(c);
    ::setenv("DCTK_THREADS", "4", 1);
    Run b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
  ::setenv("DCTK_THREADS", "zero", 1);
  CHECK(run({"conjugate", "--phi", kSq, "--ell", "1"}).code == 4);
  ::unsetenv("DCTK_THREADS");
}

TEST_CASE("json-out mirrors standard output") {
  auto path = std::filesystem::temp_directory_path() / "dctk_test_out.json";
  Run r = run({"conjugate", "--phi", kSq, "--ell", "5", "--json-out", path.string()});
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(J::parse(ss.str()) == r.doc());
  std::filesystem::remove(path);
}

TEST_CASE("selftest") {
  Run r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.doc().at("status") == "OK");
  CHECK(r.doc().at("failures").empty());
  CHECK(r.doc().at("seeds").size() == 32);

  Run a = run({"selftest", "--seed", "17"}), b = run({"selftest", "--seed", "17"});
  CHECK(a.out == b.out);
  CHECK(a.doc().at("seeds") == J{17});

  auto fx = cli::SelftestFixtures::bundled();
  fx.p2 = SupermodularFn(2, {ExtInt(0), ExtInt(0), ExtInt(0), ExtInt(4)});
  std::vector<std::uint64_t> seeds{1};
  J broken = cli::selftest(seeds, fx);
  CHECK(broken.at("status") == "CRITERIA_VIOLATED");
  REQUIRE_FALSE(broken.at("failures").empty());
  CHECK(broken.at("failures")[0].at("check").get<std::string>().find("p2") != std::string::npos);
}
