#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "regrad/fixtures.hpp"
#include "regrad/report.hpp"
#include "regrad/verify.hpp"

namespace {

// A path on disk wins; otherwise fall back to a shipped fixture name.
regrad::Scenario resolve_scenario(const std::string& spec) {
  if (std::filesystem::exists(spec)) return regrad::load_scenario(spec);
  return regrad::parse_scenario(regrad::fixture_by_name(spec).scenario);
}

void apply_overrides(nlohmann::json& doc, const std::optional<std::uint64_t>& seed,
                     const std::vector<std::string>& tol_overrides) {
  if (seed) {
    if (!doc.contains("sampler"))
      throw regrad::SchemaError("sampler", "--seed has no sampler to override");
    doc["sampler"]["seed"] = *seed;
  }
  for (const auto& spec : tol_overrides) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw regrad::SchemaError("tolerances", "--tol expects name=value, got '" + spec + "'");
    double value = std::stod(spec.substr(eq + 1));
    doc["tolerances"][spec.substr(0, eq)] = value;
  }
}

int run_command(const std::string& scenario_spec, const std::string& format,
                const std::string& out_path, const std::optional<std::uint64_t>& seed,
                const std::vector<std::string>& tol_overrides) {
  regrad::Scenario scenario = resolve_scenario(scenario_spec);
  if (seed || !tol_overrides.empty()) {
    nlohmann::json doc = scenario.normalized;
    apply_overrides(doc, seed, tol_overrides);
    scenario = regrad::parse_scenario(doc);
  }
  regrad::Report report = regrad::run(scenario);
  std::string rendered = regrad::render(report, format);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    if (!out) throw regrad::Error("cannot write '" + out_path + "'");
    out << rendered;
  }
  return report.exit_code();
}

int fixtures_command(const std::string& write_dir) {
  for (const auto& f : regrad::shipped_fixtures()) {
    std::cout << f.name << "\n    " << f.description << "\n";
    if (!write_dir.empty()) {
      std::filesystem::create_directories(write_dir);
      auto path = std::filesystem::path(write_dir) / (f.name + ".json");
      std::ofstream out(path);
      if (!out) throw regrad::Error("cannot write '" + path.string() + "'");
      out << f.scenario.dump(2) << "\n";
      std::cout << "    written to " << path.string() << "\n";
    }
  }
  return 0;
}

int verify_command(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw regrad::Error("cannot open '" + report_path + "'");
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw regrad::ParseError(e.what());
  }
  auto checks = regrad::verify_report(report);
  for (const auto& c : checks) {
    std::cout << (c.ok ? "ok  " : "FAIL") << " [" << c.task << "] " << c.description;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  if (checks.empty()) std::cout << "report carries no checkable witnesses\n";
  std::cout << (regrad::all_ok(checks) ? "all witnesses verified\n" : "witness verification FAILED\n");
  return regrad::all_ok(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amplitude-assignment consistency and regraduation toolkit"};
  app.require_subcommand(1);

  std::string scenario_spec, out_path, format = "text", write_dir, report_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol_overrides;

  auto* run_cmd = app.add_subcommand("run", "run a scenario and print its report");
  run_cmd->add_option("scenario", scenario_spec, "scenario file or shipped fixture name")
      ->required();
  run_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--out", out_path, "write the report here instead of stdout");
  run_cmd->add_option("--seed", seed, "override the sampler seed");
  run_cmd->add_option("--tol", tol_overrides, "override a tolerance, name=value (repeatable)");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "list shipped scenarios");
  fixtures_cmd->add_option("--write", write_dir, "also write the fixture files to a directory");

  auto* verify_cmd =
      app.add_subcommand("verify-witness", "re-validate every witness in a report");
  verify_cmd->add_option("report", report_path, "report JSON produced by `run --format json`")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_command(scenario_spec, format, out_path, seed, tol_overrides);
    if (fixtures_cmd->parsed()) return fixtures_command(write_dir);
    if (verify_cmd->parsed()) return verify_command(report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
