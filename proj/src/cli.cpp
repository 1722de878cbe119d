#include "dctk/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dctk/fixtures.hpp"
#include "dctk/inverse.hpp"
#include "dctk/parallel.hpp"

namespace dctk::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kEmptyIntersection: return kInfeasible;
    case ErrorCode::kUnbounded: return kUnbounded;
    case ErrorCode::kCriteriaViolated: return kCriteriaViolated;
    case ErrorCode::kInconclusiveWindow:
    case ErrorCode::kDegenerateSystem:
    case ErrorCode::kNoFeasibleWeight: return kInconclusive;
    default: return kInvalidInput;
  }
}

const char* status_text(int exit_code) {
  switch (exit_code) {
    case kOk: return "OK";
    case kInfeasible: return "INFEASIBLE";
    case kUnbounded: return "UNBOUNDED";
    case kCriteriaViolated: return "CRITERIA_VIOLATED";
    case kInconclusive: return "INCONCLUSIVE";
    default: return "INVALID_INPUT";
  }
}

namespace {

using json::In;
using json::Out;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

std::int64_t to_int(std::string_view s, const char* what) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad(std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
  return v;
}

// Inline JSON when the argument looks like JSON, otherwise a file path.
In load(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && std::string_view("{[-0123456789\"n").find(arg[first]) != std::string_view::npos)
    return json::parse(arg);
  std::ifstream f(arg);
  if (!f) bad("cannot read '" + arg + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return json::parse(ss.str());
}

// Array, or object keyed by name.
IntVec vector_from(const In& j, const std::vector<std::string>& names) {
  if (j.is_array()) {
    IntVec v = json::int_vector_from(j);
    if (v.size() != names.size()) bad("vector length differs from the ground set");
    return v;
  }
  if (!j.is_object()) bad("expected an array or an object keyed by name");
  IntVec v(names.size());
  for (std::size_t s = 0; s < names.size(); ++s) {
    if (!j.contains(names[s])) bad("missing entry '" + names[s] + "'");
    v[s] = json::ext_int_from(j.at(names[s])).value();
  }
  return v;
}

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t s = 0; s < n; ++s) names.push_back("e" + std::to_string(s + 1));
  return names;
}

// "LO..HI" (uniform), "+-K" / "±K" / "K" (symmetric), a JSON window, or a JSON
// array of per-element "LO..HI" strings.
Window parse_window(const std::string& text, std::size_t n) {
  auto range = [](std::string_view s, const char* what) -> std::pair<std::int64_t, std::int64_t> {
    auto dots = s.find("..");
    if (dots != std::string_view::npos) return {to_int(s.substr(0, dots), what), to_int(s.substr(dots + 2), what)};
    for (std::string_view pm : {"±", "+-"})
      if (s.substr(0, pm.size()) == pm) s.remove_prefix(pm.size());
    std::int64_t k = to_int(s, what);
    if (k < 0) bad(std::string(what) + " half-width must be >= 0");
    return {-k, k};
  };
  Window w;
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    In j = json::parse(text);
    if (j.is_object()) {
      w = json::window_from(j);
    } else {
      for (const auto& e : j) {
        auto [lo, hi] = range(e.get<std::string>(), "window");
        w.lo.push_back(lo);
        w.hi.push_back(hi);
      }
    }
    if (w.dim() != n) bad("window dimension differs from the ground set");
  } else {
    auto [lo, hi] = range(text, "window");
    w = Window::uniform(n, lo, hi);
  }
  w.validate();
  return w;
}

// Deviation from a separable object or a builder {"builder": "l1", "w0": [...], ...}.
SeparableConvex deviation_from(const In& j, const std::vector<std::string>& names) {
  if (!j.is_object() || !j.contains("builder")) return json::separable_from(j, names);
  const auto b = j.at("builder").get<std::string>();
  auto vec = [&](const char* key) { return vector_from(j.at(key), names); };
  SeparableConvex dev;
  if (b == "l1") dev = l1_deviation(vec("w0"));
  else if (b == "weighted_l1") dev = weighted_l1_deviation(vec("w0"), vec("c1"), vec("c2"));
  else if (b == "box") dev = box_deviation(vec("lo"), vec("hi"), vec("c1"), vec("c2"));
  else if (b == "weighted_square") dev = weighted_square_deviation(vec("w0"), vec("c"));
  else bad("unknown deviation builder '" + b + "'");
  return SeparableConvex(names, dev.parts());
}

Out named(const std::vector<std::string>& names, std::span<const std::int64_t> v) {
  Out o = Out::object();
  for (std::size_t i = 0; i < names.size(); ++i) o[names[i]] = v[i];
  return o;
}

Out status_doc(int code) { return {{"status", status_text(code)}}; }

struct Options {
  std::string instance, phi, system, deviation, window, w_window, variant = "nonneg", json_out;
  std::string z, y, w, flow, potential;
  std::vector<std::string> targets;
  std::int64_t ell = 0, y_bound = kDefaultYBound, dilation = 1;
  std::optional<std::uint64_t> seed;
  bool closed = false;
};

int emit(const Out& doc, int code, const Options& opt, std::ostream& out) {
  Out d = doc;
  if (!d.contains("status") && code != kOk) d["status"] = status_text(code);
  std::string text = json::dump(d);
  out << text;
  if (!opt.json_out.empty()) {
    std::ofstream f(opt.json_out);
    if (!f) bad("cannot write '" + opt.json_out + "'");
    f << text;
  }
  return code;
}

int cmd_conjugate(const Options& opt, std::ostream& out) {
  UnivariateConvex phi = json::univariate_from(load(opt.phi));
  Out doc = {{"value", json::ext_int(conjugate_eval(phi, opt.ell))}};
  if (opt.closed) {
    try {
      doc["closed"] = json::ext_int(conjugate_closed(phi, opt.ell));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsupportedForm) throw;
      doc["closed"] = "unsupported";
    }
  }
  return emit(doc, kOk, opt, out);
}

int cmd_minimize_mconvex(const Options& opt, std::ostream& out) {
  SupermodularFn p = json::supermodular_from(load(opt.instance));
  SeparableConvex Phi = json::separable_from(load(opt.phi), default_names(p.n()));
  IntVec z = minimize_separable(p, Phi);
  DualCertificate cert = dual_certificate(p, Phi, z);
  Out doc = status_doc(kOk);
  doc["witness"] = z;
  doc["dual"] = cert.w;
  if (!cert.substituted.empty()) doc["substituted"] = cert.substituted;
  MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, cert.w);
  doc["value"] = json::ext_int(rep.primal_value);
  doc["report"] = json::report(rep);
  int code = rep.equality ? kOk : kCriteriaViolated;
  doc["status"] = status_text(code);
  return emit(doc, code, opt, out);
}

int cmd_minimize_m2(const Options& opt, std::ostream& out) {
  In j = load(opt.instance);
  if (!j.is_object() || !j.contains("p1") || !j.contains("p2")) bad("M2 instance needs 'p1' and 'p2'");
  SupermodularFn p1 = json::supermodular_from(j.at("p1")), p2 = json::supermodular_from(j.at("p2"));
  if (p1.n() != p2.n()) bad("p1 and p2 differ in ground set size");
  SeparableConvex Phi = json::separable_from(load(opt.phi), default_names(p1.n()));
  Window ww = parse_window(opt.w_window.empty() ? "3" : opt.w_window, p1.n());
  MinMaxReport rep = m2_minimize_and_split(p1, p2, Phi, ww);
  int code = rep.equality ? kOk : kInconclusive;
  Out doc = status_doc(code);
  doc["value"] = json::ext_int(rep.primal_value);
  doc["witness"] = rep.primal_witness;
  doc["report"] = json::report(rep);
  return emit(doc, code, opt, out);
}

FlowInstance load_flow(const Options& opt) {
  if (opt.variant != "nonneg" && opt.variant != "free") bad("--variant must be nonneg or free");
  return json::flow_instance_from(load(opt.instance), opt.variant == "free" ? ExtInt::minus_inf() : ExtInt(0));
}

int cmd_minimize_flow(const Options& opt, std::ostream& out) {
  FlowInstance inst = load_flow(opt);
  const auto& nodes = inst.graph.nodes;
  HoffmanResult h = hoffman_feasible(inst);
  if (!h.feasible) {
    Out doc = status_doc(kInfeasible);
    std::vector<std::string> set;
    for (std::size_t v = 0; v < nodes.size(); ++v)
      if ((*h.violating_set >> v) & 1u) set.push_back(nodes[v]);
    doc["hoffman"] = {{"violating_set", set}, {"demand", json::ext_int(h.demand)},
                      {"capacity", json::ext_int(h.capacity)}};
    return emit(doc, kInfeasible, opt, out);
  }
  FlowResult r = min_convex_cost_flow(inst);
  MinMaxReport rep = certify_flow(inst, r.flow, r.pi_raw);
  int code = rep.equality ? kOk : kCriteriaViolated;
  Out doc = status_doc(code);
  doc["flow"] = r.flow;
  doc["value"] = json::ext_int(r.cost);
  doc["potential"] = named(nodes, r.pi_raw);
  doc["potential_shifted"] = named(nodes, r.pi_shifted);
  doc["variant"] = opt.variant;
  doc["report"] = json::report(rep);
  if (!r.notes.empty()) doc["notes"] = r.notes;
  return emit(doc, code, opt, out);
}

int cmd_minimize_boxtdi(const Options& opt, std::ostream& out) {
  LinearSystem sys = json::system_from(load(opt.system));
  SeparableConvex Phi = json::separable_from(load(opt.phi), sys.elements());
  Window win = parse_window(opt.window.empty() ? "-6..6" : opt.window, sys.dim());
  Window ww = parse_window(opt.w_window.empty() ? std::to_string(kDefaultWBound) : opt.w_window, sys.dim());
  if (opt.y_bound < 0) bad("--y-bound must be >= 0");
  LpOracle oracle(sys);
  if (!oracle.feasible()) return emit(status_doc(kInfeasible), kInfeasible, opt, out);
  MinMaxReport primal = minimize_bruteforce(sys, Phi, win);
  if (primal.primal_value.is_plus_inf()) {
    Out doc = status_doc(kInconclusive);
    doc["report"] = json::report(primal);
    return emit(doc, kInconclusive, opt, out);
  }
  std::vector<IntVec> points = enumerate_integer_points(sys, win);
  MinMaxReport dual = dual_search_bruteforce(sys, Phi, opt.y_bound, points);
  MinMaxReport mu = mu_form_dual_search(oracle, Phi, ww);
  Out doc;
  int code = kInconclusive;
  if (dual.dual_rows && primal.primal_value == dual.dual_value) {
    MinMaxReport rep = verify_certificate(sys, primal.primal_witness, *dual.dual_rows, Phi);
    rep.bounds_used.insert(primal.bounds_used.begin(), primal.bounds_used.end());
    rep.bounds_used.insert(dual.bounds_used.begin(), dual.bounds_used.end());
    rep.small_support_found = dual.small_support_found;
    rep.notes.insert(rep.notes.end(), dual.notes.begin(), dual.notes.end());
    if (rep.equality && mu.dual_value == rep.primal_value) code = kOk;
    doc["report"] = json::report(rep);
  } else {
    MinMaxReport rep = primal;
    rep.dual_value = dual.dual_value;
    rep.dual_rows = dual.dual_rows;
    rep.bounds_used.insert(dual.bounds_used.begin(), dual.bounds_used.end());
    doc["report"] = json::report(rep);
  }
  doc["status"] = status_text(code);
  doc["value"] = json::ext_int(primal.primal_value);
  doc["witness"] = primal.primal_witness;
  doc["mu_form"] = json::report(mu);
  return emit(doc, code, opt, out);
}

int violated(const CriteriaViolated& e, const Options& opt, std::ostream& out) {
  Out doc = status_doc(kCriteriaViolated);
  doc["criterion"] = e.criterion();
  doc["index"] = e.index();
  doc["detail"] = e.what();
  return emit(doc, kCriteriaViolated, opt, out);
}

int cmd_certify_mconvex(const Options& opt, std::ostream& out) {
  SupermodularFn p = json::supermodular_from(load(opt.instance));
  auto names = default_names(p.n());
  SeparableConvex Phi = json::separable_from(load(opt.phi), names);
  IntVec z = vector_from(load(opt.z), names), w = vector_from(load(opt.w), names);
  try {
    MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, w);
    int code = rep.equality && rep.verified ? kOk : kCriteriaViolated;
    Out doc = status_doc(code);
    doc["report"] = json::report(rep);
    return emit(doc, code, opt, out);
  } catch (const CriteriaViolated& e) {
    return violated(e, opt, out);
  }
}

int cmd_certify_flow(const Options& opt, std::ostream& out) {
  FlowInstance inst = load_flow(opt);
  std::vector<std::string> arcs;
  for (std::size_t a = 0; a < inst.graph.num_arcs(); ++a) arcs.push_back("a" + std::to_string(a + 1));
  IntVec x = vector_from(load(opt.flow), arcs);
  IntVec pi = vector_from(load(opt.potential), inst.graph.nodes);
  if (!is_feasible_flow(inst, x)) {
    Out doc = status_doc(kCriteriaViolated);
    doc["detail"] = "not a feasible flow";
    return emit(doc, kCriteriaViolated, opt, out);
  }
  MinMaxReport rep = certify_flow(inst, x, pi);
  int code = rep.equality ? kOk : kCriteriaViolated;
  Out doc = status_doc(code);
  doc["report"] = json::report(rep);
  return emit(doc, code, opt, out);
}

int cmd_certify_boxtdi(const Options& opt, std::ostream& out) {
  LinearSystem sys = json::system_from(load(opt.system));
  SeparableConvex Phi = json::separable_from(load(opt.phi), sys.elements());
  IntVec z = vector_from(load(opt.z), sys.elements());
  In yj = load(opt.y);
  IntVec y = json::int_vector_from(yj);
  if (y.size() != sys.num_rows()) bad("y needs one entry per row");
  try {
    MinMaxReport rep = verify_certificate(sys, z, y, Phi);
    int code = rep.equality ? kOk : kCriteriaViolated;
    Out doc = status_doc(code);
    doc["report"] = json::report(rep);
    return emit(doc, code, opt, out);
  } catch (const CriteriaViolated& e) {
    return violated(e, opt, out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotPrimalFeasible && e.code() != ErrorCode::kNotSignFeasible) throw;
    Out doc = status_doc(kCriteriaViolated);
    doc["criterion"] = e.code() == ErrorCode::kNotPrimalFeasible ? "primal-feasibility" : "sign-feasibility";
    doc["detail"] = e.what();
    return emit(doc, kCriteriaViolated, opt, out);
  }
}

int cmd_inverse(const Options& opt, std::ostream& out) {
  LinearSystem sys = json::system_from(load(opt.system));
  if (opt.targets.empty()) bad("need at least one --target");
  std::vector<IntVec> targets;
  for (const auto& t : opt.targets) targets.push_back(vector_from(load(t), sys.elements()));
  SeparableConvex dev = deviation_from(load(opt.deviation), sys.elements());
  Window ww = parse_window(opt.w_window.empty() ? std::to_string(kDefaultWBound) : opt.w_window, sys.dim());
  auto [dilated, z0] = dilate_targets(sys, targets);
  InverseResult inv = inverse_minimize(dilated, z0, dev, ww);
  TangentCone cone = tangent_cone(dilated, z0);
  Window zw = opt.window.empty() ? conjugate_domain_window(dev) : parse_window(opt.window, sys.dim());
  MinMaxReport rep = inverse_dual_search(cone, dev, zw, std::span<const std::int64_t>(inv.w));
  rep.bounds_used["w_window"] = window_text(ww);
  // Integer-only check over the targets' own box, widened by the window radius.
  Window iw = Window::uniform(sys.dim(), 0, 0);
  for (std::size_t s = 0; s < sys.dim(); ++s) {
    iw.lo[s] = z0[s] - 6;
    iw.hi[s] = z0[s] + 6;
  }
  bool integer_ok = is_integer_minimizer(dilated, z0, inv.w, iw);
  if (!integer_ok) rep.notes.push_back("LP and integer minimizer checks disagree");
  int code = rep.verified ? kOk : kInconclusive;
  Out doc = status_doc(code);
  doc["w"] = inv.w;
  doc["value"] = json::ext_int(inv.value);
  if (rep.dual_cost) doc["z"] = *rep.dual_cost;
  doc["targets"] = targets.size();
  doc["lp_minimizer"] = true;
  doc["integer_minimizer"] = integer_ok;
  doc["integer_window"] = window_text(iw);
  doc["report"] = json::report(rep);
  return emit(doc, code, opt, out);
}

int cmd_probe(const Options& opt, std::ostream& out) {
  LinearSystem sys = json::system_from(load(opt.system));
  if (opt.dilation < 1) bad("--dilation must be >= 1");
  if (opt.dilation > 1) sys = dilation(sys, opt.dilation);
  Window win = parse_window(opt.window.empty() ? "-6..6" : opt.window, sys.dim());
  BoxProbeResult r = probe_box_integer(sys, win);
  Out doc = status_doc(kOk);
  doc["box_integer"] = r.box_integer;
  doc["window"] = window_text(win);
  doc["dilation"] = opt.dilation;
  if (!r.box_integer) {
    doc["fractional_vertex"] = json::rational_vector(r.fractional_vertex);
    doc["box"] = json::window(Window{r.box_lo, r.box_hi});
  }
  return emit(doc, kOk, opt, out);
}

int cmd_selftest(const Options& opt, std::ostream& out) {
  std::vector<std::uint64_t> seeds;
  if (opt.seed) {
    seeds.push_back(*opt.seed);
  } else {
    for (std::uint64_t s = 1; s <= 32; ++s) seeds.push_back(s);
  }
  Out doc = selftest(seeds, SelftestFixtures::bundled());
  return emit(doc, doc["failures"].empty() ? kOk : kCriteriaViolated, opt, out);
}

void configure_threads() {
  const char* env = std::getenv("DCTK_THREADS");
  if (env == nullptr || *env == '\0') {
    set_thread_count(1);
    return;
  }
  std::int64_t n = to_int(env, "DCTK_THREADS");
  if (n < 1) bad("DCTK_THREADS must be a positive integer");
  set_thread_count(static_cast<unsigned>(std::min<std::int64_t>(n, 256)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete convex minimization over box-TDI sets", "dctk"};
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* c) { c->add_option("--json-out", opt.json_out, "Also write the JSON report here"); };

  auto* conj = app.add_subcommand("conjugate", "Evaluate the discrete conjugate");
  conj->add_option("--phi", opt.phi, "Univariate function (JSON or file)")->required();
  conj->add_option("--ell", opt.ell, "Slope")->required();
  conj->add_flag("--closed", opt.closed, "Also evaluate the closed form");
  common(conj);

  auto* minimize = app.add_subcommand("minimize", "Minimize and certify");
  minimize->require_subcommand(1);
  auto* min_m = minimize->add_subcommand("mconvex", "Separable convex over an M-convex set");
  min_m->add_option("--instance", opt.instance)->required();
  min_m->add_option("--phi", opt.phi)->required();
  auto* min_m2 = minimize->add_subcommand("m2", "Separable convex over the intersection of two M-convex sets");
  min_m2->add_option("--instance", opt.instance)->required();
  min_m2->add_option("--phi", opt.phi)->required();
  min_m2->add_option("--w-window", opt.w_window);
  auto* min_f = minimize->add_subcommand("flow", "Minimum convex-cost integer flow");
  min_f->add_option("--instance", opt.instance)->required();
  min_f->add_option("--variant", opt.variant);
  auto* min_b = minimize->add_subcommand("boxtdi", "Windowed min-max over a box-TDI system");
  min_b->add_option("--system", opt.system)->required();
  min_b->add_option("--phi", opt.phi)->required();
  min_b->add_option("--window", opt.window);
  min_b->add_option("--y-bound", opt.y_bound);
  min_b->add_option("--w-window", opt.w_window);
  for (auto* c : {min_m, min_m2, min_f, min_b}) common(c);

  auto* certify = app.add_subcommand("certify", "Check a given certificate");
  certify->require_subcommand(1);
  auto* cert_m = certify->add_subcommand("mconvex", "Check (z*, w*)");
  cert_m->add_option("--instance", opt.instance)->required();
  cert_m->add_option("--phi", opt.phi)->required();
  cert_m->add_option("--z", opt.z)->required();
  cert_m->add_option("--w", opt.w)->required();
  auto* cert_f = certify->add_subcommand("flow", "Check (x, pi)");
  cert_f->add_option("--instance", opt.instance)->required();
  cert_f->add_option("--flow", opt.flow)->required();
  cert_f->add_option("--potential", opt.potential)->required();
  cert_f->add_option("--variant", opt.variant);
  auto* cert_b = certify->add_subcommand("boxtdi", "Check (z, y)");
  cert_b->add_option("--system", opt.system)->required();
  cert_b->add_option("--phi", opt.phi)->required();
  cert_b->add_option("--z", opt.z)->required();
  cert_b->add_option("--y", opt.y)->required();
  for (auto* c : {cert_m, cert_f, cert_b}) common(c);

  auto* inv = app.add_subcommand("inverse", "Inverse optimization over a box-TDI system");
  inv->add_option("--system", opt.system)->required();
  inv->add_option("--target", opt.targets)->required()->allow_extra_args(false);
  inv->add_option("--deviation", opt.deviation)->required();
  inv->add_option("--w-window", opt.w_window);
  inv->add_option("--window", opt.window, "Window for the dual search");
  common(inv);

  auto* probe = app.add_subcommand("probe", "Exploratory checks");
  probe->require_subcommand(1);
  auto* probe_b = probe->add_subcommand("boxtdi", "Search for a fractional vertex in an integral box");
  probe_b->add_option("--system", opt.system)->required();
  probe_b->add_option("--window", opt.window);
  probe_b->add_option("--dilation", opt.dilation);
  common(probe_b);

  auto* self = app.add_subcommand("selftest", "Run the bundled fixture corpus");
  self->add_option("--seed", opt.seed);
  common(self);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  try {
    configure_threads();
    if (*conj) return cmd_conjugate(opt, out);
    if (*min_m) return cmd_minimize_mconvex(opt, out);
    if (*min_m2) return cmd_minimize_m2(opt, out);
    if (*min_f) return cmd_minimize_flow(opt, out);
    if (*min_b) return cmd_minimize_boxtdi(opt, out);
    if (*cert_m) return cmd_certify_mconvex(opt, out);
    if (*cert_f) return cmd_certify_flow(opt, out);
    if (*cert_b) return cmd_certify_boxtdi(opt, out);
    if (*inv) return cmd_inverse(opt, out);
    if (*probe_b) return cmd_probe(opt, out);
    if (*self) return cmd_selftest(opt, out);
  } catch (const Error& e) {
    int code = exit_code_for(e.code());
    if (code == kInvalidInput) {
      err << "dctk: " << e.what() << "\n";
      return code;
    }
    Out doc = status_doc(code);
    doc["error"] = to_string(e.code());
    doc["detail"] = e.what();
    return emit(doc, code, opt, out);
  } catch (const nlohmann::json::exception& e) {
    err << "dctk: malformed input: " << e.what() << "\n";
    return kInvalidInput;
  }
  err << "dctk: no command\n";
  return kInvalidInput;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return run(args, std::cout, std::cerr);
}

SelftestFixtures SelftestFixtures::bundled() {
  return {fixtures::p2(), fixtures::p2b(), fixtures::d2(), fixtures::p2sys()};
}

namespace {

struct Checker {
  Out failures = Out::array();
  std::int64_t checks = 0;

  template <class F>
  void check(const std::string& name, F&& f) {
    ++checks;
    try {
      std::string detail = f();
      if (!detail.empty()) failures.push_back({{"check", name}, {"detail", detail}});
    } catch (const std::exception& e) {
      failures.push_back({{"check", name}, {"detail", std::string("threw: ") + e.what()}});
    }
  }
};

std::string expect(bool ok, const std::string& what) { return ok ? "" : what; }

std::string show(std::span<const std::int64_t> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

void fixture_checks(Checker& c, const SelftestFixtures& fx) {
  const auto sq2 = SeparableConvex::square_sum(2);
  c.check("p2-mconvex", [&] {
    IntVec z = minimize_separable(fx.p2, sq2);
    DualCertificate cert = dual_certificate(fx.p2, sq2, z);
    MinMaxReport rep = verify_mconvex_optimality(fx.p2, sq2, z, cert.w);
    return expect(z == IntVec{1, 1} && cert.w == IntVec{3, 3} && rep.equality && rep.primal_value == ExtInt(2),
                  "expected witness (1,1), dual (3,3), value 2; got " + show(z) + ", " + show(cert.w));
  });
  c.check("p2-p2b-m2", [&] {
    MinMaxReport rep = m2_minimize_and_split(fx.p2, fx.p2b, sq2, Window::uniform(2, -3, 3));
    return expect(rep.equality && rep.primal_value == ExtInt(2) && rep.primal_witness == IntVec{1, 1},
                  "expected min 2 at (1,1) with equal dual, got " + rep.primal_value.to_string());
  });
  c.check("d2-flow", [&] {
    FlowResult r = min_convex_cost_flow(fx.d2);
    MinMaxReport rep = certify_flow(fx.d2, r.flow, r.pi_raw);
    return expect(r.flow == IntVec{1, 1} && r.cost == ExtInt(2) && rep.equality,
                  "expected flow (1,1) at cost 2, got " + show(r.flow) + " at " + r.cost.to_string());
  });
  c.check("p2sys-boxtdi", [&] {
    MinMaxReport primal = minimize_bruteforce(fx.p2sys, sq2, Window::uniform(2, -6, 6));
    MinMaxReport dual = dual_search_bruteforce(fx.p2sys, sq2, 4);
    MinMaxReport mu = mu_form_dual_search(fx.p2sys, sq2, Window::uniform(2, -6, 6));
    return expect(primal.primal_value == ExtInt(2) && dual.dual_value == ExtInt(2) && mu.dual_value == ExtInt(2),
                  "expected 2 = 2 = 2, got " + primal.primal_value.to_string() + ", " + dual.dual_value.to_string() +
                      ", " + mu.dual_value.to_string());
  });
  c.check("p2sys-inverse", [&] {
    IntVec z0{2, 0}, w0{3, 1};
    SeparableConvex dev = l1_deviation(w0);
    InverseResult inv = inverse_minimize(fx.p2sys, z0, dev, Window::uniform(2, -1, 5));
    MinMaxReport rep = inverse_dual_search(tangent_cone(fx.p2sys, z0), dev, conjugate_domain_window(dev),
                                           std::span<const std::int64_t>(inv.w));
    return expect(inv.value == ExtInt(2) && rep.verified, "expected value 2 on both sides, got " +
                                                              inv.value.to_string() + " vs " +
                                                              rep.dual_value.to_string());
  });
}

void seed_checks(Checker& c, std::uint64_t seed) {
  const std::string tag = "seed " + std::to_string(seed) + ": ";
  c.check(tag + "conjugate", [&] {
    fixtures::Rng rng(seed);
    UnivariateConvex phi = fixtures::random_univariate(rng);
    auto [lo, hi] = phi.domain();
    for (std::int64_t l = -12; l <= 12; ++l) {
      ExtInt best = ExtInt::minus_inf();
      for (std::int64_t k = lo.value(); k <= hi.value(); ++k) best = max(best, ExtInt(k * l) - phi(k));
      if (conjugate_eval(phi, l) != best) return "conjugate differs at ell = " + std::to_string(l);
    }
    return std::string();
  });
  c.check(tag + "mconvex", [&] {
    fixtures::Rng rng(seed);
    SupermodularFn p = fixtures::random_supermodular(rng, 3);
    SeparableConvex Phi = fixtures::random_cost(rng, 3, fixtures::CostFamily::kShiftedSquare);
    IntVec z = minimize_separable(p, Phi);
    MinMaxReport brute = minimize_bruteforce(to_system(p), Phi, base_window(p));
    MinMaxReport rep = verify_mconvex_optimality(p, Phi, z, dual_certificate(p, Phi, z).w);
    return expect(rep.equality && rep.primal_value == brute.primal_value,
                  "descent " + rep.primal_value.to_string() + ", brute force " + brute.primal_value.to_string() +
                      ", dual " + rep.dual_value.to_string());
  });
  c.check(tag + "flow", [&] {
    fixtures::Rng rng(seed);
    FlowInstance inst = fixtures::random_flow(rng, 3, 4, 3);
    FlowResult r = min_convex_cost_flow(inst);
    Window win = Window::uniform(inst.graph.num_arcs(), 0, 3);
    MinMaxReport brute = minimize_bruteforce(flow_system(inst), inst.cost, win);
    MinMaxReport rep = certify_flow(inst, r.flow, r.pi_raw);
    return expect(rep.equality && r.cost == brute.primal_value,
                  "flow " + r.cost.to_string() + ", brute force " + brute.primal_value.to_string() + ", dual " +
                      rep.dual_value.to_string());
  });
  c.check(tag + "boxtdi", [&] {
    fixtures::Rng rng(seed);
    SupermodularFn p = fixtures::random_supermodular(rng, 2);
    LinearSystem sys = to_system(p);
    Window win = base_window(p);
    SeparableConvex Phi = fixtures::centered_square_cost(rng, greedy_min(p, IntVec(2, 0)));
    MinMaxReport primal = minimize_bruteforce(sys, Phi, win);
    auto points = enumerate_integer_points(sys, win);
    MinMaxReport dual = dual_search_bruteforce(sys, Phi, kDefaultYBound, points);
    if (!dual.dual_rows || primal.primal_value != dual.dual_value)
      return "primal " + primal.primal_value.to_string() + ", dual " + dual.dual_value.to_string();
    MinMaxReport rep = verify_certificate(sys, primal.primal_witness, *dual.dual_rows, Phi);
    return expect(rep.equality, "certificate rejected");
  });
  c.check(tag + "inverse", [&] {
    fixtures::Rng rng(seed);
    SupermodularFn p = fixtures::random_supermodular(rng, 2);
    LinearSystem sys = to_system(p);
    auto points = enumerate_integer_points(sys, base_window(p));
    IntVec z0 = points[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(points.size()) - 1))];
    IntVec w0{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    SeparableConvex dev = l1_deviation(w0);
    InverseResult inv = inverse_minimize(sys, z0, dev, Window::uniform(2, -6, 6));
    MinMaxReport rep = inverse_dual_search(tangent_cone(sys, z0), dev, conjugate_domain_window(dev),
                                           std::span<const std::int64_t>(inv.w));
    return expect(rep.verified, "primal " + inv.value.to_string() + ", dual " + rep.dual_value.to_string());
  });
}

}  // namespace

json::Out selftest(const std::vector<std::uint64_t>& seeds, const SelftestFixtures& fx) {
  Checker c;
  fixture_checks(c, fx);
  for (auto seed : seeds) seed_checks(c, seed);
  Out doc = {{"status", c.failures.empty() ? "OK" : "CRITERIA_VIOLATED"},
             {"checks", c.checks},
             {"failures", c.failures},
             {"seeds", seeds}};
  return doc;
}

}  // namespace dctk::cli
