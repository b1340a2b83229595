#include "regrad/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "regrad/functional.hpp"

namespace regrad {

using nlohmann::json;

namespace {

const std::map<std::string, double> kDefaultTolerances = {
    {"representation", 1e-9}, {"key", 1e-6},     {"associativity", 1e-9}, {"feasibility", 1e-6},
    {"triviality", 1e-8},     {"merge", 1e-10},  {"additivity", 1e-5},
};

const std::map<std::string, std::size_t> kDefaultSamples = {
    {"representation", 10000}, {"fit", 2000},      {"associativity_triples", 1000},
    {"regraduation", 200},     {"additivity", 1000},
};

const std::set<std::string> kTaskNames = {"representation", "combinator", "associativity",
                                          "regraduation", "additivity"};

const std::set<std::string> kTopLevelKeys = {
    "name",   "slits",        "theory",       "sampler", "tolerances",       "samples",
    "anchor", "probe_alphas", "combinator",   "tasks",   "additivity_range",
};

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw SchemaError(field, "expected a number");
  return j.get<double>();
}

Theory parse_theory(const json& j, const std::vector<SlitId>& slits) {
  if (!j.is_object()) throw SchemaError("theory", "expected an object");
  std::string kind = j.value("kind", "");
  if (kind == "linear") return Theory::linear();
  if (kind == "quadratic") return Theory::quadratic();
  if (kind == "power") {
    if (!j.contains("p") || !j["p"].is_number_integer() || j["p"].get<int>() < 1)
      throw SchemaError("theory.p", "power theories need a positive integer exponent");
    return Theory::power(j["p"].get<int>());
  }
  if (kind == "user_table") {
    if (!j.contains("table") || !j["table"].is_array() || j["table"].empty())
      throw SchemaError("theory.table", "user_table theories need a non-empty sample list");
    std::vector<UserTableEntry> entries;
    for (const auto& e : j["table"]) {
      if (!e.contains("config") || !e.contains("coeffs") || !e.contains("value"))
        throw SchemaError("theory.table", "entries need config, coeffs and value");
      std::vector<SlitId> open;
      for (const auto& label : e["config"]) {
        SlitId id{label.get<std::string>()};
        if (std::find(slits.begin(), slits.end(), id) == slits.end())
          throw SchemaError("theory.table", "config references unknown slit '" + id.label + "'");
        open.push_back(id);
      }
      std::vector<Complex> coeffs;
      for (const auto& c : e["coeffs"]) coeffs.push_back(complex_from_json(c));
      entries.push_back({Configuration(open), coeffs, complex_from_json(e["value"])});
    }
    try {
      return Theory::user_table(UserTable(std::move(entries)));
    } catch (const Error& err) {
      throw SchemaError("theory.table", err.what());
    }
  }
  throw SchemaError("theory.kind", "expected linear, quadratic, power or user_table");
}

SamplerSpec parse_sampler(const json& j) {
  if (!j.is_object()) throw SchemaError("sampler", "expected an object");
  SamplerSpec spec;
  std::string kind = j.value("kind", "");
  if (kind == "complex-gaussian") {
    if (!j.contains("seed")) throw SchemaError("sampler.seed", "random samplers need a seed");
    spec.dist = ComplexGaussian{j.value("sigma", 1.0)};
  } else if (kind == "real-uniform") {
    if (!j.contains("seed")) throw SchemaError("sampler.seed", "random samplers need a seed");
    if (!j.contains("lo") || !j.contains("hi"))
      throw SchemaError("sampler", "real-uniform needs lo and hi");
    spec.dist = RealUniform{require_number(j["lo"], "sampler.lo"),
                            require_number(j["hi"], "sampler.hi")};
  } else if (kind == "grid") {
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
      throw SchemaError("sampler.points", "grid samplers need a non-empty point list");
    GridPoints grid;
    for (const auto& p : j["points"]) grid.points.push_back(require_number(p, "sampler.points"));
    spec.dist = grid;
  } else {
    throw SchemaError("sampler.kind", "expected complex-gaussian, real-uniform or grid");
  }
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

CombinatorSpec parse_combinator(const json& j) {
  if (!j.is_object()) throw SchemaError("combinator", "expected an object");
  CombinatorSpec spec;
  spec.rule = j.value("rule", "");
  try {
    combinator_by_name(spec.rule);
  } catch (const Error& e) {
    throw SchemaError("combinator.rule", e.what());
  }
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    if (!d.is_array() || d.size() != 2) throw SchemaError("combinator.domain", "expected [lo, hi]");
    double lo = require_number(d[0], "combinator.domain");
    double hi = require_number(d[1], "combinator.domain");
    if (!(lo < hi)) throw SchemaError("combinator.domain", "needs lo < hi");
    spec.domain = {{lo, hi}};
  }
  if (j.contains("grid_points")) {
    if (!j["grid_points"].is_number_integer() || j["grid_points"].get<long long>() < 3)
      throw SchemaError("combinator.grid_points", "expected an integer >= 3");
    spec.grid_points = j["grid_points"].get<std::size_t>();
  }
  if (j.contains("grid")) {
    if (!j["grid"].is_array() || j["grid"].size() < 2)
      throw SchemaError("combinator.grid", "expected at least two points");
    for (const auto& p : j["grid"]) spec.assoc_grid.push_back(require_number(p, "combinator.grid"));
  }
  if (!spec.domain && spec.assoc_grid.empty())
    throw SchemaError("combinator", "needs a domain or an explicit grid");
  return spec;
}

void validate_tasks(const Scenario& sc) {
  std::set<std::string> seen;
  for (const auto& task : sc.tasks) {
    if (!kTaskNames.count(task)) throw SchemaError("tasks", "unknown task '" + task + "'");
    if (!seen.insert(task).second) throw SchemaError("tasks", "task '" + task + "' repeats");
  }
  auto before = [&](const std::string& a, const std::string& b) {
    auto ia = std::find(sc.tasks.begin(), sc.tasks.end(), a);
    auto ib = std::find(sc.tasks.begin(), sc.tasks.end(), b);
    return ia != sc.tasks.end() && ia < ib;
  };
  for (const auto& task : sc.tasks) {
    if (task == "representation") {
      if (!sc.theory) throw DependencyError("representation needs a theory");
      if (!sc.sampler) throw DependencyError("representation needs a sampler");
    } else if (task == "combinator") {
      if (!before("representation", "combinator"))
        throw DependencyError("combinator requires the representation task before it");
    } else if (task == "associativity") {
      if (!before("combinator", "associativity") && !sc.combinator)
        throw DependencyError(
            "associativity requires a fitted combinator or a closed-form combinator block");
    } else if (task == "regraduation") {
      bool combinator_mode = sc.combinator && sc.combinator->domain;
      if (!combinator_mode && (!sc.theory || !sc.sampler))
        throw DependencyError(
            "regraduation needs a theory and sampler, or a combinator block with a domain");
    } else if (task == "additivity") {
      if (!before("regraduation", "additivity"))
        throw DependencyError("additivity requires the regraduation task before it");
    }
  }
}

json normalize(const Scenario& sc, const json& doc) {
  json out;
  out["name"] = sc.name;
  out["slits"] = json::array();
  for (const auto& s : sc.slits) out["slits"].push_back(s.label);
  if (doc.contains("theory")) out["theory"] = doc["theory"];
  if (sc.sampler) {
    json s;
    s["kind"] = sc.sampler->kind_name();
    s["seed"] = sc.sampler->seed;
    if (const auto* g = std::get_if<ComplexGaussian>(&sc.sampler->dist)) s["sigma"] = g->sigma;
    if (const auto* u = std::get_if<RealUniform>(&sc.sampler->dist)) {
      s["lo"] = u->lo;
      s["hi"] = u->hi;
    }
    if (const auto* g = std::get_if<GridPoints>(&sc.sampler->dist)) s["points"] = g->points;
    out["sampler"] = s;
  }
  out["tolerances"] = sc.tolerances;
  out["samples"] = sc.samples;
  out["probe_alphas"] = sc.probe_alphas;
  out["anchor"] = complex_to_json(sc.anchor);
  if (sc.combinator) {
    json c;
    c["rule"] = sc.combinator->rule;
    if (sc.combinator->domain)
      c["domain"] = json::array({sc.combinator->domain->first, sc.combinator->domain->second});
    c["grid_points"] = sc.combinator->grid_points;
    if (!sc.combinator->assoc_grid.empty()) c["grid"] = sc.combinator->assoc_grid;
    out["combinator"] = c;
  }
  if (sc.additivity_range)
    out["additivity_range"] =
        json::array({sc.additivity_range->first, sc.additivity_range->second});
  out["tasks"] = sc.tasks;
  return out;
}

}  // namespace

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_object() && j.contains("re")) return Complex{j["re"].get<double>(), j.value("im", 0.0)};
  throw SchemaError("complex", "expected a number or {re, im}");
}

json state_to_json(const WaveState& state) {
  json out;
  for (const auto& [id, c] : state.coefficients()) out[id.label] = complex_to_json(c);
  return out;
}

WaveState state_from_json(const json& j) {
  std::vector<std::pair<SlitId, Complex>> coeffs;
  for (const auto& [label, value] : j.items())
    coeffs.emplace_back(SlitId{label}, complex_from_json(value));
  return WaveState(std::move(coeffs));
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw SchemaError("<root>", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!kTopLevelKeys.count(key)) throw SchemaError(key, "unknown top-level key");
  }

  Scenario sc;
  sc.name = doc.value("name", "unnamed");

  if (!doc.contains("slits") || !doc["slits"].is_array() || doc["slits"].size() < 2)
    throw SchemaError("slits", "expected an array of at least two slit labels");
  std::set<std::string> labels;
  for (const auto& s : doc["slits"]) {
    if (!s.is_string() || s.get<std::string>().empty())
      throw SchemaError("slits", "labels must be non-empty strings");
    if (!labels.insert(s.get<std::string>()).second)
      throw SchemaError("slits", "label '" + s.get<std::string>() + "' repeats");
    sc.slits.push_back(SlitId{s.get<std::string>()});
  }

  if (doc.contains("theory")) sc.theory = parse_theory(doc["theory"], sc.slits);
  if (doc.contains("sampler")) sc.sampler = parse_sampler(doc["sampler"]);

  sc.tolerances = kDefaultTolerances;
  if (doc.contains("tolerances")) {
    for (const auto& [key, value] : doc["tolerances"].items()) {
      if (!kDefaultTolerances.count(key))
        throw SchemaError("tolerances", "unknown name '" + key + "'");
      double v = require_number(value, "tolerances." + key);
      if (!(v > 0.0)) throw SchemaError("tolerances." + key, "must be positive");
      sc.tolerances[key] = v;
    }
  }

  sc.samples = kDefaultSamples;
  if (doc.contains("samples")) {
    for (const auto& [key, value] : doc["samples"].items()) {
      if (!kDefaultSamples.count(key)) throw SchemaError("samples", "unknown name '" + key + "'");
      if (!value.is_number_integer() || value.get<long long>() < 1)
        throw SchemaError("samples." + key, "must be a positive integer");
      sc.samples[key] = value.get<std::size_t>();
    }
  }

  sc.probe_alphas.assign(kDefaultProbeAlphas.begin(), kDefaultProbeAlphas.end());
  if (doc.contains("probe_alphas")) {
    if (!doc["probe_alphas"].is_array() || doc["probe_alphas"].empty())
      throw SchemaError("probe_alphas", "expected a non-empty array");
    sc.probe_alphas.clear();
    for (const auto& a : doc["probe_alphas"]) {
      double v = require_number(a, "probe_alphas");
      if (v == 0.0) throw SchemaError("probe_alphas", "zero probes carry no information");
      sc.probe_alphas.push_back(v);
    }
  }

  if (doc.contains("anchor")) sc.anchor = complex_from_json(doc["anchor"]);
  if (doc.contains("combinator")) sc.combinator = parse_combinator(doc["combinator"]);
  if (doc.contains("additivity_range")) {
    const auto& r = doc["additivity_range"];
    if (!r.is_array() || r.size() != 2) throw SchemaError("additivity_range", "expected [lo, hi]");
    double lo = require_number(r[0], "additivity_range");
    double hi = require_number(r[1], "additivity_range");
    if (!(lo < hi)) throw SchemaError("additivity_range", "needs lo < hi");
    sc.additivity_range = {{lo, hi}};
  }

  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw SchemaError("tasks", "expected an array of task names");
  for (const auto& t : doc["tasks"]) {
    if (!t.is_string()) throw SchemaError("tasks", "task names must be strings");
    sc.tasks.push_back(t.get<std::string>());
  }

  validate_tasks(sc);
  sc.normalized = normalize(sc, doc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  return parse_scenario(doc);
}

}  // namespace regrad
