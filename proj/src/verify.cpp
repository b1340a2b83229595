#include "regrad/verify.hpp"

#include <cmath>
#include <sstream>

#include "regrad/functional.hpp"
#include "regrad/regraduation.hpp"
#include "regrad/report.hpp"

namespace regrad {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

WitnessCheck check(const std::string& task, const std::string& description, bool ok,
                   const std::string& detail = "") {
  return {task, description, ok, detail};
}

void verify_representation_witness(const json& entry, const Theory& theory,
                                   const std::array<SlitId, 2>& slits,
                                   std::vector<WitnessCheck>& out) {
  if (!entry.contains("witness")) return;
  const json& w = entry["witness"];
  double tol = entry["tolerance"].get<double>();
  WaveState first = state_from_json(w["first_state"]);
  WaveState second = state_from_json(w["second_state"]);
  Configuration ca({slits[0]}), cb({slits[1]}), cab({slits[0], slits[1]});

  double da = std::abs(phi(theory, first, ca) - phi(theory, second, ca));
  double db = std::abs(phi(theory, first, cb) - phi(theory, second, cb));
  double dj = std::abs(phi(theory, first, cab) - phi(theory, second, cab));
  bool ok = da <= tol && db <= tol && dj > 10.0 * tol;
  out.push_back(check("representation", "witness re-evaluates from scratch", ok,
                      "per-slit deltas " + fmt(da) + ", " + fmt(db) + "; joint delta " + fmt(dj)));

  double recorded_joint_delta = std::abs(complex_from_json(w["phi_joint"][0]) -
                                         complex_from_json(w["phi_joint"][1]));
  out.push_back(check("representation", "recorded phi values match recomputation",
                      std::abs(recorded_joint_delta - dj) <= 1e-9 * std::max(1.0, dj)));
}

CombinatorRule rule_from_source(const std::string& source) {
  // "rule:NAME" or "rule:NAME (identified from fit)"
  std::string name = source.substr(5);
  auto space = name.find(' ');
  if (space != std::string::npos) name = name.substr(0, space);
  return combinator_by_name(name);
}

void verify_associativity(const json& entry, const json& tasks, std::vector<WitnessCheck>& out) {
  std::string source = entry["source"].get<std::string>();
  std::array<Complex, 3> t{complex_from_json(entry["worst_triple"][0]),
                           complex_from_json(entry["worst_triple"][1]),
                           complex_from_json(entry["worst_triple"][2])};
  double claimed = entry["max_residual"].get<double>();
  double tol = entry["tolerance"].get<double>();

  double recomputed = 0.0;
  if (source.rfind("rule:", 0) == 0) {
    auto rule = rule_from_source(source);
    Complex lhs = rule.apply(rule.apply(t[0], t[1]), t[2]);
    Complex rhs = rule.apply(t[0], rule.apply(t[1], t[2]));
    recomputed = std::abs(lhs - rhs);
  } else {
    CombinatorTable table;
    table.key_tolerance = tasks["combinator"]["key_tolerance"].get<double>();
    for (const auto& e : tasks["combinator"]["entries"])
      table.entries.push_back({complex_from_json(e["x"]), complex_from_json(e["y"]),
                               complex_from_json(e["z"])});
    Complex lhs = table_lookup(table, table_lookup(table, t[0], t[1]), t[2]);
    Complex rhs = table_lookup(table, t[0], table_lookup(table, t[1], t[2]));
    recomputed = std::abs(lhs - rhs);
  }

  bool matches = std::abs(recomputed - claimed) <= 1e-9 * std::max(1.0, claimed);
  out.push_back(check("associativity", "worst-triple residual reproduces", matches,
                      "claimed " + fmt(claimed) + ", recomputed " + fmt(recomputed)));
  bool verdict_consistent = entry["verdict"] == "fail" ? recomputed > tol : recomputed <= tol;
  out.push_back(check("associativity", "verdict consistent with the residual", verdict_consistent));
}

struct XiLookup {
  std::vector<std::pair<Complex, double>> samples;
  double merge_tol;

  double at(Complex point) const {
    for (const auto& [p, v] : samples)
      if (std::abs(p - point) <= merge_tol) return v;
    throw Error("xi table has no sample near the requested point");
  }
};

XiLookup xi_lookup_from(const json& entry, double merge_tol) {
  XiLookup lookup;
  lookup.merge_tol = merge_tol;
  for (const auto& s : entry["xi_table"])
    lookup.samples.emplace_back(complex_from_json(s["point"]), s["value"].get<double>());
  return lookup;
}

void verify_regraduation(const json& entry, const Scenario& sc, std::vector<WitnessCheck>& out) {
  std::string verdict = entry["verdict"].get<std::string>();
  if (verdict == "trivial") {
    if (!sc.theory) {
      out.push_back(check("regraduation", "scenario echo carries the theory", false));
      return;
    }
    std::vector<WaveState> states;
    for (const auto& s : entry["states"]) states.push_back(state_from_json(s));
    auto cs = build_constraints(*sc.theory, states, sc.slit_pair(), sc.tol("merge"));
    try {
      auto result = solve_constraints(cs, sc.anchor, entry["feasibility_tolerance"].get<double>(),
                                      entry["triviality_tolerance"].get<double>());
      bool still_trivial = result.status == RegraduationResult::Status::Trivial;
      out.push_back(check("regraduation", "re-solving the reconstructed system stays trivial",
                          still_trivial,
                          "constrained residual " + fmt(result.constrained_residual) +
                              ", unconstrained sup-norm " + fmt(result.unconstrained_sup_norm)));
      bool legs = result.constrained_residual > entry["feasibility_tolerance"].get<double>() &&
                  result.unconstrained_sup_norm <= entry["triviality_tolerance"].get<double>();
      out.push_back(check("regraduation", "both certificate legs hold on re-solve", legs));
    } catch (const Error& e) {
      out.push_back(check("regraduation", "re-solving the reconstructed system stays trivial",
                          false, e.what()));
    }
    return;
  }
  if (verdict != "found") return;

  if (entry["mode"] == "constraints") {
    if (!sc.theory) {
      out.push_back(check("regraduation", "scenario echo carries the theory", false));
      return;
    }
    auto lookup = xi_lookup_from(entry, sc.tol("merge"));
    Configuration ca({sc.slits[0]}), cb({sc.slits[1]}), cab({sc.slits[0], sc.slits[1]});
    double bound = entry["additivity_residual"].get<double>() + 1e-9;
    double worst = 0.0;
    bool ok = true;
    try {
      for (const auto& sj : entry["states"]) {
        WaveState state = state_from_json(sj);
        double r = std::abs(lookup.at(phi(*sc.theory, state, cab)) -
                            lookup.at(phi(*sc.theory, state, ca)) -
                            lookup.at(phi(*sc.theory, state, cb)));
        worst = std::max(worst, r);
      }
      ok = worst <= bound;
      out.push_back(check("regraduation", "xi table satisfies the state equations", ok,
                          "worst residual " + fmt(worst) + " vs bound " + fmt(bound)));
    } catch (const Error& e) {
      out.push_back(
          check("regraduation", "xi table covers every state's phi values", false, e.what()));
    }
    return;
  }

  // combinator mode: re-evaluate grid-pair equations against the table
  auto rule = combinator_by_name(entry["rule"].get<std::string>());
  std::vector<double> knots;
  std::vector<double> values;
  for (const auto& s : entry["xi_table"]) {
    knots.push_back(complex_from_json(s["point"]).real());
    values.push_back(s["value"].get<double>());
  }
  RealXiTable xi(knots, values);
  double lo = entry["domain"][0].get<double>(), hi = entry["domain"][1].get<double>();
  double bound = entry["additivity_residual"].get<double>() * 1.0001 + 1e-12;
  double worst = 0.0;
  const std::size_t stride = std::max<std::size_t>(1, knots.size() / 14);
  for (std::size_t i = 0; i < knots.size(); i += stride) {
    for (std::size_t j = 0; j < knots.size(); j += stride) {
      Complex s = rule.apply({knots[i], 0.0}, {knots[j], 0.0});
      if (s.imag() != 0.0 || s.real() < lo || s.real() > hi) continue;
      worst = std::max(worst, std::abs(xi(s.real()) - values[i] - values[j]));
    }
  }
  out.push_back(check("regraduation", "xi table satisfies the combinator equations",
                      worst <= bound, "worst residual " + fmt(worst) + " vs bound " + fmt(bound)));
}

}  // namespace

std::vector<WitnessCheck> verify_report(const json& report) {
  std::vector<WitnessCheck> out;
  if (!report.contains("scenario") || !report.contains("tasks"))
    throw Error("report is missing the scenario echo or the task entries");
  Scenario sc = parse_scenario(report["scenario"]);
  const json& tasks = report["tasks"];

  if (tasks.contains("representation") && sc.theory)
    verify_representation_witness(tasks["representation"], *sc.theory, sc.slit_pair(), out);
  if (tasks.contains("associativity") && tasks["associativity"].contains("worst_triple"))
    verify_associativity(tasks["associativity"], tasks, out);
  if (tasks.contains("regraduation") && tasks["regraduation"].contains("verdict"))
    verify_regraduation(tasks["regraduation"], sc, out);
  return out;
}

}  // namespace regrad
