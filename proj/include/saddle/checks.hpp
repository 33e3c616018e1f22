#ifndef SADDLE_CHECKS_HPP
#define SADDLE_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace saddle {

// One measured invariant: pass iff measured <= allowed.
struct CheckItem {
  std::string name;
  double measured = 0.0;
  double allowed = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;
  bool all_pass() const;
};

std::vector<std::string> check_suite_names();

// Runs one of the named invariant suites ("envelope-calculus",
// "quadratic-oracle", "lyapunov"). Throws ParameterError on unknown names.
CheckReport run_check_suite(const std::string& suite, std::uint64_t seed);

std::string format_check_report(const CheckReport& report);

}  // namespace saddle

#endif  // SADDLE_CHECKS_HPP
