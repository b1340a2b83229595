#ifndef REGRAD_REPORT_HPP
#define REGRAD_REPORT_HPP

#include <string>

#include "json.hpp"
#include "regrad/scenario.hpp"

namespace regrad {

inline constexpr const char* kToolkitVersion = "0.1.0";

// A finished pipeline run: one entry per requested task, the scenario
// echo, a headline and the exit code. The JSON document is the canonical
// form; rendering and verification work from it.
struct Report {
  nlohmann::json doc;

  int exit_code() const { return doc.value("exit_code", 1); }
  std::string headline() const { return doc.value("headline", ""); }
  const nlohmann::json& task(const std::string& name) const { return doc.at("tasks").at(name); }
};

// Execute the scenario's tasks in order. Task-level failures are recorded
// in the report, never thrown; on a negative representation verdict the
// combinator and associativity tasks are skipped with cause and the
// regraduation task switches to constraint mode over the sign-flip family.
Report run(const Scenario& scenario);

// format: "json" (stable keys, full-precision numbers) or "text"
// (human-readable, headline first).
std::string render(const Report& report, const std::string& format);

// Exit codes: 0 all green, 2 negative mathematical verdict, 1 operational
// error in any task.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOperationalError = 1;
inline constexpr int kExitNegativeVerdict = 2;

}  // namespace regrad

#endif  // REGRAD_REPORT_HPP
