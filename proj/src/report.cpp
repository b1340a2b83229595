#include "regrad/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ostream>
#include <sstream>

#include "regrad/functional.hpp"
#include "regrad/regraduation.hpp"

namespace regrad {

using nlohmann::json;

namespace {

std::string num_str(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string complex_str(Complex z) {
  if (z.imag() == 0.0) return num_str(z.real());
  return num_str(z.real()) + (z.imag() < 0 ? " - " : " + ") + num_str(std::abs(z.imag())) + "i";
}

json witness_to_json(const RepresentationWitness& w) {
  json out;
  out["first_state"] = state_to_json(w.first);
  out["second_state"] = state_to_json(w.second);
  out["phi_a"] = json::array({complex_to_json(w.phi_a_first), complex_to_json(w.phi_a_second)});
  out["phi_b"] = json::array({complex_to_json(w.phi_b_first), complex_to_json(w.phi_b_second)});
  out["phi_joint"] =
      json::array({complex_to_json(w.phi_joint_first), complex_to_json(w.phi_joint_second)});
  return out;
}

json skipped(const std::string& cause) {
  json e;
  e["verdict"] = "skipped";
  e["cause"] = cause;
  return e;
}

json xi_table_to_json(const RegraduationResult& r) {
  json out = json::array();
  for (const auto& s : r.table)
    out.push_back(json{{"point", complex_to_json(s.point)}, {"value", s.value}});
  return out;
}

struct PipelineState {
  explicit PipelineState(const Scenario& scenario) : sc(scenario) {}

  const Scenario& sc;
  std::optional<RepresentationVerdict> representation;
  std::optional<CombinatorTable> table;
  std::optional<CombinatorRule> identified_rule;
  std::optional<RegraduationResult> regrad;
  std::optional<RealXiTable> xi;
  bool regrad_combinator_mode = false;
};

std::vector<WaveState> sign_flip_states(const std::array<SlitId, 2>& slits,
                                        const std::vector<double>& alphas) {
  std::vector<WaveState> states;
  for (double a : alphas) {
    states.push_back(WaveState::pair(slits[0], slits[1], {a, 0.0}, {a, 0.0}));
    states.push_back(WaveState::pair(slits[0], slits[1], {a, 0.0}, {-a, 0.0}));
  }
  return states;
}

json run_representation(PipelineState& ps) {
  const Scenario& sc = ps.sc;
  auto verdict =
      check_representation(*sc.theory, sc.slit_pair(), *sc.sampler,
                           sc.sample_count("representation"), sc.tol("representation"),
                           sc.probe_alphas);
  ps.representation = verdict;
  json e;
  e["verdict"] = verdict.is_representation() ? "representation" : "not_representation";
  e["tolerance"] = verdict.tolerance;
  e["samples_used"] = verdict.samples_used;
  if (verdict.witness) e["witness"] = witness_to_json(*verdict.witness);
  return e;
}

json run_combinator_fit(PipelineState& ps) {
  const Scenario& sc = ps.sc;
  if (ps.representation && !ps.representation->is_representation())
    return skipped("theory is not a representation");
  json e;
  try {
    auto table = fit_combinator(*sc.theory, sc.slit_pair(), *sc.sampler, sc.sample_count("fit"),
                                sc.tol("key"), sc.probe_alphas);
    ps.table = table;
    e["verdict"] = "fitted";
    e["key_tolerance"] = table.key_tolerance;
    e["entry_count"] = table.entries.size();
    json entries = json::array();
    for (const auto& entry : table.entries)
      entries.push_back(json{{"x", complex_to_json(entry.x)},
                             {"y", complex_to_json(entry.y)},
                             {"z", complex_to_json(entry.z)}});
    e["entries"] = entries;
    if (auto identified = identify_combinator(table.entries)) {
      ps.identified_rule = identified->first;
      e["identified_rule"] = identified->first.name;
      e["identified_residual"] = identified->second;
    }
  } catch (const NonFunctional& err) {
    e["verdict"] = "non_functional";
    e["detail"] = err.what();
  }
  return e;
}

std::vector<std::array<Complex, 3>> domain_triples(double lo, double hi, std::size_t n,
                                                   std::uint64_t seed) {
  SamplerSpec spec{RealUniform{lo, hi}, seed};
  std::vector<SlitId> axes{{"t1"}, {"t2"}, {"t3"}};
  std::vector<std::array<Complex, 3>> triples;
  triples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = sample_wavestate(spec, axes, substream::kAssociativity + i);
    triples.push_back(
        {s.coefficient(axes[0]), s.coefficient(axes[1]), s.coefficient(axes[2])});
  }
  return triples;
}

json run_associativity(PipelineState& ps) {
  const Scenario& sc = ps.sc;
  CombinatorSource source = combinator_by_name("sum");
  std::string source_desc;
  std::vector<std::array<Complex, 3>> triples;
  const std::size_t n = sc.sample_count("associativity_triples");
  const std::uint64_t seed = sc.sampler ? sc.sampler->seed : 0;

  if (sc.combinator) {
    source = combinator_by_name(sc.combinator->rule);
    source_desc = "rule:" + sc.combinator->rule;
    if (!sc.combinator->assoc_grid.empty()) {
      for (double x : sc.combinator->assoc_grid)
        for (double y : sc.combinator->assoc_grid)
          for (double z : sc.combinator->assoc_grid)
            triples.push_back({Complex{x, 0.0}, Complex{y, 0.0}, Complex{z, 0.0}});
    } else {
      triples = domain_triples(sc.combinator->domain->first, sc.combinator->domain->second, n, seed);
    }
  } else if (ps.representation && !ps.representation->is_representation()) {
    return skipped("theory is not a representation");
  } else if (ps.identified_rule || ps.table) {
    // triples drawn from the theory's own phi values
    Configuration first_only({sc.slits[0]});
    std::vector<Complex> values;
    values.reserve(3 * n);
    for (std::size_t i = 0; i < 3 * n; ++i) {
      auto s = sample_wavestate(*sc.sampler, {sc.slits[0], sc.slits[1]},
                                substream::kAssociativity + i);
      values.push_back(phi(*sc.theory, s, first_only));
    }
    for (std::size_t i = 0; i < n; ++i)
      triples.push_back({values[3 * i], values[3 * i + 1], values[3 * i + 2]});
    if (ps.identified_rule) {
      source = *ps.identified_rule;
      source_desc = "rule:" + ps.identified_rule->name + " (identified from fit)";
    } else {
      source = *ps.table;
      source_desc = "table";
    }
  } else {
    return skipped("no combinator available");
  }

  auto report = check_associativity(source, triples, sc.tol("associativity"));
  json e;
  e["verdict"] = report.pass ? "pass" : "fail";
  e["max_residual"] = report.max_residual;
  e["worst_triple"] = json::array({complex_to_json(report.worst_triple[0]),
                                   complex_to_json(report.worst_triple[1]),
                                   complex_to_json(report.worst_triple[2])});
  e["grid_size"] = report.grid_size;
  e["tolerance"] = report.tolerance;
  e["source"] = source_desc;
  return e;
}

json result_to_json(const RegraduationResult& r) {
  json e;
  e["xi_table"] = xi_table_to_json(r);
  e["additivity_residual"] = r.additivity_residual;
  e["anchor"] = json{{"point", complex_to_json(r.anchor_point)}, {"value", r.anchor_value}};
  e["constrained_residual"] = r.constrained_residual;
  e["unconstrained_sup_norm"] = r.unconstrained_sup_norm;
  e["kernel_dim"] = r.kernel_dim;
  return e;
}

json run_regraduation(PipelineState& ps) {
  const Scenario& sc = ps.sc;
  json e;
  if (sc.combinator && sc.combinator->domain) {
    ps.regrad_combinator_mode = true;
    e["mode"] = "combinator";
    e["rule"] = sc.combinator->rule;
    e["domain"] = json::array({sc.combinator->domain->first, sc.combinator->domain->second});
    e["grid_points"] = sc.combinator->grid_points;
    try {
      auto result =
          regraduate_combinator(combinator_by_name(sc.combinator->rule),
                                sc.combinator->domain->first, sc.combinator->domain->second,
                                sc.combinator->grid_points, sc.tol("feasibility"));
      ps.regrad = result;
      ps.xi = to_real_table(result);
      e["verdict"] = "found";
      e.update(result_to_json(result));
    } catch (const NotAssociative& err) {
      e["verdict"] = "not_associative";
      e["detail"] = err.what();
    }
    return e;
  }

  e["mode"] = "constraints";
  std::vector<WaveState> states;
  if (ps.representation && !ps.representation->is_representation()) {
    states = sign_flip_states(sc.slit_pair(), sc.probe_alphas);
    e["states_basis"] = "sign-flip probe family";
  } else {
    states = sample_batch(*sc.sampler, {sc.slits[0], sc.slits[1]},
                          sc.sample_count("regraduation"), substream::kRegraduation);
    e["states_basis"] = "sampled states";
  }
  auto cs = build_constraints(*sc.theory, states, sc.slit_pair(), sc.tol("merge"));
  json states_json = json::array();
  for (const auto& s : cs.sources) states_json.push_back(state_to_json(s));
  e["states"] = states_json;
  json equations = json::array();
  for (const auto& eq : cs.equations)
    equations.push_back(json{{"joint", complex_to_json(cs.points[eq.joint])},
                             {"first", complex_to_json(cs.points[eq.first])},
                             {"second", complex_to_json(cs.points[eq.second])}});
  e["equations"] = equations;
  e["feasibility_tolerance"] = sc.tol("feasibility");
  e["triviality_tolerance"] = sc.tol("triviality");

  auto result = solve_constraints(cs, sc.anchor, sc.tol("feasibility"), sc.tol("triviality"));
  ps.regrad = result;
  e["verdict"] = result.found() ? "found" : "trivial";
  e.update(result_to_json(result));
  if (result.found()) {
    try {
      ps.xi = to_real_table(result);
    } catch (const Error& err) {
      e["interpolation"] = std::string("unavailable: ") + err.what();
    }
  }
  return e;
}

json run_additivity(PipelineState& ps) {
  const Scenario& sc = ps.sc;
  if (!ps.regrad) return skipped("regraduation did not run");
  if (!ps.regrad->found()) return skipped("no non-trivial xi available");
  if (!ps.xi) return skipped("xi table is not interpolable on a real interval");

  Theory theory = ps.regrad_combinator_mode
                      ? Theory::surrogate(combinator_by_name(sc.combinator->rule))
                      : *sc.theory;

  std::pair<double, double> range;
  if (sc.additivity_range) {
    range = *sc.additivity_range;
  } else if (sc.sampler && std::holds_alternative<RealUniform>(sc.sampler->dist)) {
    const auto& u = std::get<RealUniform>(sc.sampler->dist);
    range = {u.lo, u.hi};
  } else if (sc.sampler && std::holds_alternative<GridPoints>(sc.sampler->dist)) {
    const auto& g = std::get<GridPoints>(sc.sampler->dist);
    range = {*std::min_element(g.points.begin(), g.points.end()),
             *std::max_element(g.points.begin(), g.points.end())};
  } else {
    json e;
    e["verdict"] = "error";
    e["message"] = "additivity needs an additivity_range when the sampler is unbounded";
    return e;
  }

  SamplerSpec held_out{RealUniform{range.first, range.second},
                       sc.sampler ? sc.sampler->seed : 0};
  auto states = sample_batch(held_out, {sc.slits[0], sc.slits[1]},
                             sc.sample_count("additivity"), substream::kAdditivity);
  auto stats = verify_additivity(*ps.xi, theory, states, sc.slit_pair());
  json e;
  e["verdict"] = stats.max_residual <= sc.tol("additivity") ? "pass" : "fail";
  e["max_residual"] = stats.max_residual;
  e["mean_residual"] = stats.mean_residual;
  e["count"] = stats.count;
  e["tolerance"] = sc.tol("additivity");
  e["range"] = json::array({range.first, range.second});
  return e;
}

json dispatch(PipelineState& ps, const std::string& task) {
  try {
    if (task == "representation") return run_representation(ps);
    if (task == "combinator") return run_combinator_fit(ps);
    if (task == "associativity") return run_associativity(ps);
    if (task == "regraduation") return run_regraduation(ps);
    if (task == "additivity") return run_additivity(ps);
    throw Error("unknown task '" + task + "'");
  } catch (const Error& err) {
    json e;
    e["verdict"] = "error";
    e["message"] = err.what();
    return e;
  }
}

bool negative_verdict(const std::string& v) {
  return v == "not_representation" || v == "non_functional" || v == "fail" || v == "trivial" ||
         v == "not_associative";
}

std::string build_headline(const Scenario& sc, const json& tasks) {
  std::vector<std::string> segments;
  for (const auto& task : sc.tasks) {
    const json& e = tasks.at(task);
    std::string v = e.at("verdict");
    if (task == "representation") {
      segments.push_back(v == "representation" ? "REPRESENTATION" : "NOT A REPRESENTATION");
    } else if (task == "combinator") {
      if (v == "fitted")
        segments.push_back(e.contains("identified_rule")
                               ? "S ~= " + e["identified_rule"].get<std::string>()
                               : "S fitted");
      else if (v == "non_functional")
        segments.push_back("S NOT FUNCTIONAL");
      else if (v == "error")
        segments.push_back("combinator ERROR");
    } else if (task == "associativity") {
      if (v == "pass") segments.push_back("associativity PASS");
      else if (v == "fail") segments.push_back("associativity FAIL");
      else if (v == "error") segments.push_back("associativity ERROR");
    } else if (task == "regraduation") {
      if (v == "found") segments.push_back("xi FOUND");
      else if (v == "trivial") segments.push_back("regraduation TRIVIAL (xi = 0)");
      else if (v == "not_associative") segments.push_back("NOT ASSOCIATIVE");
      else if (v == "error") segments.push_back("regraduation ERROR");
    } else if (task == "additivity") {
      if (v == "pass") segments.push_back("additivity PASS");
      else if (v == "fail") segments.push_back("additivity FAIL");
      else if (v == "error") segments.push_back("additivity ERROR");
    }
  }
  if (segments.empty()) return "no tasks requested";
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) out += (i ? "; " : "") + segments[i];
  return out;
}

}  // namespace

Report run(const Scenario& scenario) {
  using clock = std::chrono::steady_clock;
  PipelineState ps{scenario};
  json tasks = json::object();
  json timing = json::object();
  auto t0 = clock::now();
  for (const auto& task : scenario.tasks) {
    auto start = clock::now();
    tasks[task] = dispatch(ps, task);
    timing[task + "_ms"] =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
  }
  timing["total_ms"] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  int exit_code = kExitOk;
  for (const auto& task : scenario.tasks) {
    std::string v = tasks[task].at("verdict");
    if (v == "error") exit_code = kExitOperationalError;
  }
  if (exit_code == kExitOk)
    for (const auto& task : scenario.tasks)
      if (negative_verdict(tasks[task].at("verdict"))) exit_code = kExitNegativeVerdict;

  Report report;
  report.doc["exit_code"] = exit_code;
  report.doc["headline"] = build_headline(scenario, tasks);
  report.doc["scenario"] = scenario.normalized;
  report.doc["task_order"] = scenario.tasks;
  report.doc["tasks"] = tasks;
  report.doc["timing"] = timing;
  report.doc["toolkit_version"] = kToolkitVersion;
  return report;
}

namespace {

std::string state_line(const json& state) {
  std::string out;
  bool first = true;
  for (const auto& [label, c] : state.items()) {
    out += (first ? "" : ", ") + label + " = " + complex_str(complex_from_json(c));
    first = false;
  }
  return out;
}

std::string equation_line(const json& eq) {
  std::string joint = complex_str(complex_from_json(eq["joint"]));
  std::string first = complex_str(complex_from_json(eq["first"]));
  std::string second = complex_str(complex_from_json(eq["second"]));
  if (eq["first"] == eq["second"]) return "xi(" + joint + ") = 2 xi(" + first + ")";
  return "xi(" + joint + ") = xi(" + first + ") + xi(" + second + ")";
}

void render_task_text(std::ostream& os, const std::string& name, const json& e) {
  std::string v = e.at("verdict");
  std::string upper = v;
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  os << "[" << name << "] " << upper;
  if (v == "skipped") {
    os << " -- " << e["cause"].get<std::string>() << "\n";
    return;
  }
  if (v == "error") {
    os << " -- " << e["message"].get<std::string>() << "\n";
    return;
  }
  os << "\n";
  if (name == "representation") {
    os << "  tolerance " << num_str(e["tolerance"].get<double>()) << ", samples used "
       << e["samples_used"] << "\n";
    if (e.contains("witness")) {
      const json& w = e["witness"];
      os << "  witness states:\n";
      os << "    A: " << state_line(w["first_state"]) << "\n";
      os << "    B: " << state_line(w["second_state"]) << "\n";
      auto pair_str = [&](const char* key) {
        return complex_str(complex_from_json(w[key][0])) + " | " +
               complex_str(complex_from_json(w[key][1]));
      };
      os << "    phi(a):      " << pair_str("phi_a") << "\n";
      os << "    phi(a'):     " << pair_str("phi_b") << "\n";
      os << "    phi(a v a'): " << pair_str("phi_joint") << "\n";
    }
  } else if (name == "combinator") {
    if (v == "fitted") {
      os << "  " << e["entry_count"] << " entries at key tolerance "
         << num_str(e["key_tolerance"].get<double>()) << "\n";
      if (e.contains("identified_rule"))
        os << "  identified closed form: " << e["identified_rule"].get<std::string>()
           << " (residual " << num_str(e["identified_residual"].get<double>()) << ")\n";
    } else if (e.contains("detail")) {
      os << "  " << e["detail"].get<std::string>() << "\n";
    }
  } else if (name == "associativity") {
    os << "  source " << e["source"].get<std::string>() << ", " << e["grid_size"]
       << " triples, max residual " << num_str(e["max_residual"].get<double>()) << " (tolerance "
       << num_str(e["tolerance"].get<double>()) << ")\n";
    os << "  worst triple: (" << complex_str(complex_from_json(e["worst_triple"][0])) << ", "
       << complex_str(complex_from_json(e["worst_triple"][1])) << ", "
       << complex_str(complex_from_json(e["worst_triple"][2])) << ")\n";
  } else if (name == "regraduation") {
    if (e.contains("detail")) os << "  " << e["detail"].get<std::string>() << "\n";
    if (e["mode"] == "constraints" && e.contains("equations")) {
      os << "  equations:\n";
      for (const auto& eq : e["equations"]) os << "    " << equation_line(eq) << "\n";
    }
    if (e.contains("anchor")) {
      os << "  anchor xi(" << complex_str(complex_from_json(e["anchor"]["point"])) << ") = "
         << num_str(e["anchor"]["value"].get<double>()) << "\n";
      os << "  constrained residual: " << num_str(e["constrained_residual"].get<double>()) << "\n";
      os << "  unconstrained sup-norm: " << num_str(e["unconstrained_sup_norm"].get<double>())
         << " (null-space dimension " << e["kernel_dim"] << ")\n";
      if (v == "found")
        os << "  xi table: " << e["xi_table"].size() << " points, max equation residual "
           << num_str(e["additivity_residual"].get<double>()) << "\n";
    }
  } else if (name == "additivity") {
    os << "  " << e["count"] << " held-out states in [" << num_str(e["range"][0].get<double>())
       << ", " << num_str(e["range"][1].get<double>()) << "]\n";
    os << "  max residual " << num_str(e["max_residual"].get<double>()) << ", mean "
       << num_str(e["mean_residual"].get<double>()) << " (tolerance "
       << num_str(e["tolerance"].get<double>()) << ")\n";
  }
}

}  // namespace

std::string render(const Report& report, const std::string& format) {
  if (format == "json") return report.doc.dump(2) + "\n";
  if (format != "text") throw Error("unknown report format '" + format + "'");

  std::ostringstream os;
  const json& doc = report.doc;
  os << "headline: " << doc["headline"].get<std::string>() << "\n";
  os << "regrad " << doc["toolkit_version"].get<std::string>() << " -- "
     << doc["scenario"]["name"].get<std::string>() << "\n\n";
  for (const auto& task : doc["task_order"]) {
    render_task_text(os, task.get<std::string>(), doc["tasks"][task.get<std::string>()]);
  }
  os << "exit code: " << doc["exit_code"].get<int>() << "\n";
  return os.str();
}

}  // namespace regrad
