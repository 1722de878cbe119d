#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dctk/conjugate.hpp"
#include "dctk/ext_int.hpp"
#include "dctk/mconvex.hpp"
#include "dctk/netflow.hpp"
#include "dctk/polyhedron.hpp"
#include "dctk/rational.hpp"

namespace dctk::json {

// Output documents use sorted keys; input is parsed keeping key order so
// that element order survives in objects keyed by element name.
using Out = nlohmann::json;
using In = nlohmann::ordered_json;

/// Parses text, throwing kInvalidArgument on syntax errors.
In parse(const std::string& text);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Out& j);

Out ext_int(const ExtInt& v);
/// Integers, "+inf"/"-inf" strings, or null mapped to `null_as`.
ExtInt ext_int_from(const In& j, std::optional<ExtInt> null_as = std::nullopt);
Out rational(const Rational& r);
Out rational_vector(const std::vector<Rational>& v);
IntVec int_vector_from(const In& j);

Out univariate(const UnivariateConvex& phi);
UnivariateConvex univariate_from(const In& j);

/// Object keyed by element name.
Out separable(const SeparableConvex& Phi);
/// Accepts an object keyed by element name (ordered by `names` when given,
/// else by input order), an array of forms, or a single form applied to
/// every element of `names`.
SeparableConvex separable_from(const In& j, const std::vector<std::string>& names = {});

Out system(const LinearSystem& sys);
LinearSystem system_from(const In& j);

Out window(const Window& w);
Window window_from(const In& j);

Out supermodular(const SupermodularFn& p);
SupermodularFn supermodular_from(const In& j);

Out flow_instance(const FlowInstance& inst);
/// Missing lower bounds default to `default_lower`, missing cost to the
/// square-sum.
FlowInstance flow_instance_from(const In& j, ExtInt default_lower = ExtInt(0));

Out report(const MinMaxReport& rep);

}  // namespace dctk::json
