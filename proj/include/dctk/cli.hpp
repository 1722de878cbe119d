#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dctk/json_io.hpp"
#include "dctk/mconvex.hpp"
#include "dctk/netflow.hpp"

namespace dctk::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 2,
  kUnbounded = 3,
  kInvalidInput = 4,
  kCriteriaViolated = 5,
  kInconclusive = 6,
};

int exit_code_for(ErrorCode code);
const char* status_text(int exit_code);

/// args excludes the program name. JSON goes to `out`, usage errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Named fixtures the self-test checks against their known optima.
struct SelftestFixtures {
  SupermodularFn p2, p2b;
  FlowInstance d2;
  LinearSystem p2sys;
  static SelftestFixtures bundled();
};

/// Runs the fixture corpus and the random checks for `seeds`.
json::Out selftest(const std::vector<std::uint64_t>& seeds, const SelftestFixtures& fx);

}  // namespace dctk::cli
