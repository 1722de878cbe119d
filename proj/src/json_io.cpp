#include "dctk/json_io.hpp"

#include <algorithm>

namespace dctk::json {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

const In& field(const In& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::int64_t integer(const In& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

ExtInt bound(const In& j, const char* key, ExtInt if_missing) {
  if (!j.contains(key)) return if_missing;
  return ext_int_from(j.at(key), if_missing);
}

}  // namespace

In parse(const std::string& text) {
  try {
    return In::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Out& j) { return j.dump(2) + "\n"; }

Out ext_int(const ExtInt& v) {
  if (v.is_plus_inf()) return "+inf";
  if (v.is_minus_inf()) return "-inf";
  return v.value();
}

ExtInt ext_int_from(const In& j, std::optional<ExtInt> null_as) {
  if (j.is_null()) {
    if (!null_as) bad("unexpected null");
    return *null_as;
  }
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return ExtInt::plus_inf();
    if (s == "-inf") return ExtInt::minus_inf();
    bad("bad extended integer '" + s + "'");
  }
  return integer(j, "value");
}

Out rational(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.to_string();
}

Out rational_vector(const std::vector<Rational>& v) {
  Out a = Out::array();
  for (const auto& r : v) a.push_back(rational(r));
  return a;
}

IntVec int_vector_from(const In& j) {
  if (!j.is_array()) bad("expected an integer array");
  IntVec v;
  for (const auto& x : j) v.push_back(integer(x, "vector entry"));
  return v;
}

Out univariate(const UnivariateConvex& phi) {
  return std::visit(
      Overloaded{
          [](const form::Table& f) -> Out {
            Out vals = Out::array();
            for (const auto& v : f.values) vals.push_back(v.finite() ? Out(v.value()) : Out(nullptr));
            return {{"form", "table"}, {"k0", f.k0}, {"values", vals}};
          },
          [](const form::Quadratic& f) -> Out { return {{"form", "quadratic"}, {"a", f.a}}; },
          [](const form::VShape& f) -> Out {
            return {{"form", "vshape"}, {"k0", f.k0},   {"c_minus", f.c_minus}, {"c_plus", f.c_plus},
                    {"A", f.A.finite() ? Out(f.A.value()) : Out(nullptr)},
                    {"B", f.B.finite() ? Out(f.B.value()) : Out(nullptr)}};
          },
          [](const form::FlatBottom& f) -> Out {
            auto opt = [](const ExtInt& v) { return v.finite() ? Out(v.value()) : Out(nullptr); };
            return {{"form", "flat_bottom"}, {"a", opt(f.a)}, {"b", opt(f.b)}, {"c_minus", f.c_minus},
                    {"c_plus", f.c_plus},    {"A", opt(f.A)}, {"B", opt(f.B)}};
          },
          [](const form::LinearPlus& f) -> Out {
            return {{"form", "linear_plus"}, {"c", f.c}, {"inner", univariate(*f.inner)}};
          },
          [](const form::Shifted& f) -> Out {
            return {{"form", "shifted"}, {"k0", f.k0}, {"inner", univariate(*f.inner)}};
          },
          [](const form::Restricted& f) -> Out {
            auto opt = [](const ExtInt& v) { return v.finite() ? Out(v.value()) : Out(nullptr); };
            return {{"form", "restricted"}, {"A", opt(f.A)}, {"B", opt(f.B)}, {"inner", univariate(*f.inner)}};
          },
          [](const form::SumOf& f) -> Out {
            Out parts = Out::array();
            for (const auto& p : f.parts) parts.push_back(univariate(*p));
            return {{"form", "sum_of"}, {"parts", parts}};
          },
      },
      phi.form());
}

UnivariateConvex univariate_from(const In& j) {
  const auto kind = field(j, "form");
  if (!kind.is_string()) bad("'form' must be a string");
  const auto f = kind.get<std::string>();
  const ExtInt ninf = ExtInt::minus_inf(), pinf = ExtInt::plus_inf();
  if (f == "table") {
    std::vector<ExtInt> vals;
    const auto& v = field(j, "values");
    if (!v.is_array()) bad("'values' must be an array");
    for (const auto& x : v) vals.push_back(ext_int_from(x, pinf));
    return UnivariateConvex::table(integer(field(j, "k0"), "k0"), std::move(vals));
  }
  if (f == "quadratic") return UnivariateConvex::quadratic(integer(field(j, "a"), "a"));
  if (f == "vshape")
    return UnivariateConvex::vshape(integer(field(j, "k0"), "k0"), integer(field(j, "c_minus"), "c_minus"),
                                    integer(field(j, "c_plus"), "c_plus"), bound(j, "A", ninf), bound(j, "B", pinf));
  if (f == "flat_bottom")
    return UnivariateConvex::flat_bottom(bound(j, "a", ninf), bound(j, "b", pinf),
                                         integer(field(j, "c_minus"), "c_minus"), integer(field(j, "c_plus"), "c_plus"),
                                         bound(j, "A", ninf), bound(j, "B", pinf));
  if (f == "linear_plus")
    return UnivariateConvex::linear_plus(integer(field(j, "c"), "c"), univariate_from(field(j, "inner")));
  if (f == "shifted") return UnivariateConvex::shifted(integer(field(j, "k0"), "k0"), univariate_from(field(j, "inner")));
  if (f == "restricted")
    return UnivariateConvex::restricted(bound(j, "A", ninf), bound(j, "B", pinf), univariate_from(field(j, "inner")));
  if (f == "sum_of") {
    std::vector<UnivariateConvex> parts;
    const auto& p = field(j, "parts");
    if (!p.is_array()) bad("'parts' must be an array");
    for (const auto& x : p) parts.push_back(univariate_from(x));
    return UnivariateConvex::sum_of(std::move(parts));
  }
  if (f == "linear") return UnivariateConvex::linear(integer(field(j, "c"), "c"));
  if (f == "zero") return UnivariateConvex::zero();
  bad("unknown form '" + f + "'");
}

Out separable(const SeparableConvex& Phi) {
  Out o = Out::object();
  for (std::size_t s = 0; s < Phi.size(); ++s) o[Phi.names()[s]] = univariate(Phi[s]);
  return o;
}

SeparableConvex separable_from(const In& j, const std::vector<std::string>& names) {
  std::vector<std::string> order;
  std::vector<UnivariateConvex> parts;
  if (j.is_object() && j.contains("form")) {
    if (names.empty()) bad("a single form needs the element list");
    return SeparableConvex(names, std::vector<UnivariateConvex>(names.size(), univariate_from(j)));
  }
  if (j.is_array()) {
    for (const auto& x : j) parts.push_back(univariate_from(x));
    if (!names.empty() && names.size() != parts.size()) bad("separable function has the wrong number of parts");
    for (std::size_t s = 0; s < parts.size(); ++s)
      order.push_back(names.empty() ? "e" + std::to_string(s + 1) : names[s]);
    return SeparableConvex(std::move(order), std::move(parts));
  }
  if (!j.is_object()) bad("separable function must be an object or array");
  if (names.empty()) {
    for (const auto& [k, v] : j.items()) {
      order.push_back(k);
      parts.push_back(univariate_from(v));
    }
  } else {
    if (j.size() != names.size()) bad("separable function has the wrong number of parts");
    for (const auto& n : names) {
      if (!j.contains(n)) bad("separable function misses element '" + n + "'");
      order.push_back(n);
      parts.push_back(univariate_from(j.at(n)));
    }
  }
  return SeparableConvex(std::move(order), std::move(parts));
}

Out system(const LinearSystem& sys) {
  Out rows = Out::array();
  for (const auto& r : sys.rows())
    rows.push_back({{"coeffs", r.coeffs}, {"rhs", r.rhs}, {"kind", r.kind == RowKind::kEq ? "eq" : "geq"}});
  return {{"elements", sys.elements()}, {"rows", rows}};
}

LinearSystem system_from(const In& j) {
  std::vector<Row> rows;
  const auto& rs = field(j, "rows");
  if (!rs.is_array()) bad("'rows' must be an array");
  for (const auto& r : rs) {
    Row row;
    row.coeffs = int_vector_from(field(r, "coeffs"));
    row.rhs = integer(field(r, "rhs"), "rhs");
    auto kind = r.contains("kind") ? r.at("kind").get<std::string>() : std::string("geq");
    if (kind == "geq")
      row.kind = RowKind::kGeq;
    else if (kind == "eq")
      row.kind = RowKind::kEq;
    else
      bad("row kind must be 'geq' or 'eq'");
    rows.push_back(std::move(row));
  }
  if (j.contains("elements")) return LinearSystem(j.at("elements").get<std::vector<std::string>>(), std::move(rows));
  if (rows.empty()) bad("linear system needs at least one row");
  const std::size_t n = rows.front().coeffs.size();
  return LinearSystem::with_size(n, std::move(rows));
}

Out window(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}}; }

Window window_from(const In& j) {
  Window w{int_vector_from(field(j, "lo")), int_vector_from(field(j, "hi"))};
  w.validate();
  return w;
}

Out supermodular(const SupermodularFn& p) {
  Out t = Out::object();
  for (std::uint32_t m = 0; m <= p.full(); ++m) t[std::to_string(m)] = p(m).finite() ? Out(p(m).value()) : Out(nullptr);
  return {{"n", p.n()}, {"p", t}};
}

SupermodularFn supermodular_from(const In& j) {
  const auto n = integer(field(j, "n"), "n");
  if (n < 1 || n > static_cast<std::int64_t>(kMaxGroundSet)) bad("n must lie in [1, 20]");
  const auto& t = field(j, "p");
  std::vector<ExtInt> table(std::size_t{1} << n);
  if (t.is_array()) {
    if (t.size() != table.size()) bad("p needs 2^n entries");
    for (std::size_t m = 0; m < table.size(); ++m) table[m] = ext_int_from(t[m], ExtInt::minus_inf());
  } else {
    if (!t.is_object() || t.size() != table.size()) bad("p needs 2^n entries keyed by bitmask");
    for (std::size_t m = 0; m < table.size(); ++m) {
      auto key = std::to_string(m);
      if (!t.contains(key)) bad("p misses bitmask " + key);
      table[m] = ext_int_from(t.at(key), ExtInt::minus_inf());
    }
  }
  return SupermodularFn(static_cast<std::size_t>(n), std::move(table));
}

Out flow_instance(const FlowInstance& inst) {
  Out arcs = Out::array(), m = Out::object(), lower = Out::array(), upper = Out::array();
  for (auto [u, v] : inst.graph.arcs) arcs.push_back({inst.graph.nodes[u], inst.graph.nodes[v]});
  for (std::size_t v = 0; v < inst.graph.num_nodes(); ++v) m[inst.graph.nodes[v]] = inst.m[v];
  for (const auto& f : inst.lower) lower.push_back(f.finite() ? Out(f.value()) : Out(nullptr));
  for (const auto& g : inst.upper) upper.push_back(g.finite() ? Out(g.value()) : Out(nullptr));
  Out cost = Out::array();
  for (std::size_t a = 0; a < inst.cost.size(); ++a) cost.push_back(univariate(inst.cost[a]));
  return {{"nodes", inst.graph.nodes}, {"arcs", arcs}, {"m", m}, {"lower", lower}, {"upper", upper}, {"cost", cost}};
}

FlowInstance flow_instance_from(const In& j, ExtInt default_lower) {
  FlowInstance inst;
  inst.graph.nodes = field(j, "nodes").get<std::vector<std::string>>();
  for (const auto& a : field(j, "arcs")) {
    if (!a.is_array() || a.size() != 2) bad("arc must be a [tail, head] pair");
    inst.graph.arcs.emplace_back(inst.graph.node_index(a[0].get<std::string>()),
                                 inst.graph.node_index(a[1].get<std::string>()));
  }
  const std::size_t na = inst.graph.num_arcs();
  const auto& m = field(j, "m");
  inst.m.assign(inst.graph.num_nodes(), 0);
  if (m.is_array()) {
    inst.m = int_vector_from(m);
  } else {
    for (const auto& [k, v] : m.items()) inst.m[inst.graph.node_index(k)] = integer(v, "m");
  }
  auto bounds = [&](const char* key, ExtInt missing, ExtInt null_as) {
    std::vector<ExtInt> out(na, missing);
    if (!j.contains(key)) return out;
    const auto& b = j.at(key);
    if (!b.is_array() || b.size() != na) bad(std::string("'") + key + "' needs one entry per arc");
    for (std::size_t a = 0; a < na; ++a) out[a] = ext_int_from(b[a], null_as);
    return out;
  };
  inst.lower = bounds("lower", default_lower, ExtInt::minus_inf());
  inst.upper = bounds("upper", ExtInt::plus_inf(), ExtInt::plus_inf());
  std::vector<std::string> arc_names;
  for (std::size_t a = 0; a < na; ++a) arc_names.push_back("a" + std::to_string(a + 1));
  inst.cost = j.contains("cost") ? separable_from(j.at("cost"), arc_names)
                                 : SeparableConvex(arc_names, std::vector<UnivariateConvex>(
                                                                  na, UnivariateConvex::quadratic(1)));
  inst.validate();
  return inst;
}

Out report(const MinMaxReport& rep) {
  Out o = {{"primal_value", ext_int(rep.primal_value)},
           {"dual_value", ext_int(rep.dual_value)},
           {"equality", rep.equality},
           {"verified", rep.verified},
           {"support_size", rep.support_size},
           {"small_support_found", rep.small_support_found}};
  if (!rep.primal_witness.empty()) o["primal_witness"] = rep.primal_witness;
  if (rep.dual_rows) o["dual_rows"] = *rep.dual_rows;
  if (rep.dual_cost) o["dual_cost"] = *rep.dual_cost;
  if (rep.dual_cost2) o["dual_cost2"] = *rep.dual_cost2;
  if (!rep.bounds_used.empty()) o["bounds_used"] = rep.bounds_used;
  if (!rep.extra_values.empty()) {
    Out e = Out::object();
    for (const auto& [k, v] : rep.extra_values) e[k] = ext_int(v);
    o["values"] = e;
  }
  if (!rep.notes.empty()) o["notes"] = rep.notes;
  return o;
}

}  // namespace dctk::json
