#pragma once

#include <cstdint>
#include <string>
#include <vector>

// The acceptance gate: sixteen numbered criteria, each a list of measured
// values against pinned targets. Shared by the acceptance binary and the
// CLI selftest.

namespace mfhj::acceptance {

enum class Relation {
  near,      // |measured - target| <= tolerance
  at_most,   // measured <= target
  at_least,  // measured >= target
  info       // printed, never gates
};

struct Check {
  std::string name;
  Relation relation = Relation::near;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass() const;
};

struct Config {
  // Smaller Monte Carlo counts and coarser Parisi grids; tolerances unchanged.
  bool reduced = false;
  std::uint64_t seed = 42;
  // Test hook: PDP samples are drawn at zeta + shift while targets keep zeta.
  double pdp_zeta_shift = 0.0;
};

inline constexpr int kCriterionCount = 16;

std::string criterion_title(int id);

// Throws ValidationError for ids outside 1..kCriterionCount.
CriterionResult run_criterion(int id, const Config& cfg);

Check near(std::string name, double measured, double target, double tolerance);
Check at_most(std::string name, double measured, double bound);
Check at_least(std::string name, double measured, double bound);
Check info(std::string name, double measured, double reference);

// "PASS C10 pdp identities (12.3 s)" followed by one indented line per check.
std::string format_result(const CriterionResult& r);

}  // namespace mfhj::acceptance
