#include "regrad/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regrad {

WaveState::WaveState(std::vector<std::pair<SlitId, Complex>> coeffs, Detector detector)
    : coeffs_(std::move(coeffs)), detector_(std::move(detector)) {
  std::sort(coeffs_.begin(), coeffs_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i].first == coeffs_[i - 1].first) throw DuplicateSlitError(coeffs_[i].first.label);
}

WaveState WaveState::pair(const SlitId& a, const SlitId& b, Complex ca, Complex cb) {
  return WaveState({{a, ca}, {b, cb}});
}

std::vector<SlitId> WaveState::slits() const {
  std::vector<SlitId> out;
  out.reserve(coeffs_.size());
  for (const auto& [id, c] : coeffs_) out.push_back(id);
  return out;
}

bool WaveState::has_slit(const SlitId& id) const {
  return std::binary_search(coeffs_.begin(), coeffs_.end(), std::pair<SlitId, Complex>{id, {}},
                            [](const auto& a, const auto& b) { return a.first < b.first; });
}

Complex WaveState::coefficient(const SlitId& id) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), id,
                             [](const auto& entry, const SlitId& key) { return entry.first < key; });
  if (it == coeffs_.end() || it->first != id) throw UnknownSlit(id.label);
  return it->second;
}

WaveState WaveState::with_coefficient(const SlitId& id, Complex value) const {
  auto copy = coeffs_;
  auto it = std::lower_bound(copy.begin(), copy.end(), id,
                             [](const auto& entry, const SlitId& key) { return entry.first < key; });
  if (it == copy.end() || it->first != id) throw UnknownSlit(id.label);
  it->second = value;
  WaveState out;
  out.coeffs_ = std::move(copy);
  out.detector_ = detector_;
  return out;
}

namespace {

std::string key_description(const Configuration& config, const std::vector<Complex>& coeffs) {
  std::ostringstream os;
  os << "config {";
  for (std::size_t i = 0; i < config.open().size(); ++i)
    os << (i ? ", " : "") << config.open()[i].label;
  os << "} with coefficients [";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ", ";
    os << coeffs[i].real() << (coeffs[i].imag() < 0 ? "-" : "+") << std::abs(coeffs[i].imag())
       << "i";
  }
  os << "]";
  return os.str();
}

}  // namespace

UserTable::UserTable(std::vector<UserTableEntry> entries, double key_tolerance)
    : entries_(std::move(entries)), key_tol_(key_tolerance) {
  for (const auto& e : entries_)
    if (e.coeffs.size() != e.config.size())
      throw Error("user table entry needs one coefficient per open slit");
}

Complex UserTable::lookup(const Configuration& config, const std::vector<Complex>& coeffs) const {
  for (const auto& e : entries_) {
    if (!(e.config == config)) continue;
    bool match = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (std::abs(e.coeffs[i] - coeffs[i]) > key_tol_) {
        match = false;
        break;
      }
    }
    if (match) return e.value;
  }
  throw TableMiss(key_description(config, coeffs));
}

Theory Theory::linear() {
  Theory t;
  t.kind_ = Kind::Linear;
  t.exponent_ = 1;
  return t;
}

Theory Theory::quadratic() {
  Theory t;
  t.kind_ = Kind::Quadratic;
  t.exponent_ = 2;
  return t;
}

Theory Theory::power(int exponent) {
  if (exponent < 1) throw Error("power exponent must be a positive integer");
  Theory t;
  t.kind_ = Kind::Power;
  t.exponent_ = exponent;
  return t;
}

Theory Theory::user_table(UserTable table) {
  Theory t;
  t.kind_ = Kind::UserTable;
  t.table_ = std::move(table);
  return t;
}

Theory Theory::surrogate(CombinatorRule rule) {
  Theory t;
  t.kind_ = Kind::Surrogate;
  t.rule_ = std::move(rule);
  return t;
}

std::string Theory::kind_name() const {
  switch (kind_) {
    case Kind::Linear: return "linear";
    case Kind::Quadratic: return "quadratic";
    case Kind::Power: return "power";
    case Kind::UserTable: return "user_table";
    case Kind::Surrogate: return "combinator_surrogate";
  }
  return "?";
}

const UserTable& Theory::table() const {
  if (!table_) throw Error("theory has no user table");
  return *table_;
}

const CombinatorRule& Theory::rule() const {
  if (!rule_) throw Error("theory has no combinator rule");
  return *rule_;
}

WaveState project_closed(const WaveState& state, const Configuration& open) {
  for (const auto& id : open.open())
    if (!state.has_slit(id)) throw UnknownSlit(id.label);
  std::vector<std::pair<SlitId, Complex>> coeffs;
  coeffs.reserve(state.coefficients().size());
  for (const auto& [id, c] : state.coefficients())
    coeffs.emplace_back(id, open.contains(id) ? c : Complex{0.0, 0.0});
  return WaveState(std::move(coeffs), state.detector());
}

namespace {

// Integer powers by repeated multiplication; no log/exp branch cuts.
Complex int_power(Complex base, int exponent) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::vector<Complex> open_coefficients(const WaveState& state, const Configuration& config) {
  std::vector<Complex> out;
  out.reserve(config.size());
  for (const auto& id : config.open()) out.push_back(state.coefficient(id));
  return out;
}

}  // namespace

Complex detector_amplitude(const Theory& theory, const WaveState& state,
                           const std::optional<Configuration>& config) {
  switch (theory.kind()) {
    case Theory::Kind::Linear:
    case Theory::Kind::Quadratic:
    case Theory::Kind::Power: {
      Complex sum{0.0, 0.0};
      for (const auto& [id, c] : state.coefficients()) sum += c;
      return int_power(sum, theory.exponent());
    }
    case Theory::Kind::UserTable: {
      Configuration c = config ? *config : Configuration(state.slits());
      return theory.table().lookup(c, open_coefficients(state, c));
    }
    case Theory::Kind::Surrogate: {
      Configuration c = config ? *config : Configuration(state.slits());
      auto coeffs = open_coefficients(state, c);
      Complex acc = coeffs.front();
      for (std::size_t i = 1; i < coeffs.size(); ++i) acc = theory.rule().apply(acc, coeffs[i]);
      return acc;
    }
  }
  throw Error("unreachable theory kind");
}

Complex phi(const Theory& theory, const WaveState& state, const Configuration& config) {
  return detector_amplitude(theory, project_closed(state, config), config);
}

Complex AmplitudeAssignment::at(const Configuration& config) const {
  for (const auto& [c, v] : values)
    if (c == config) return v;
  throw Error("no amplitude recorded for that configuration");
}

AmplitudeAssignment full_assignment(const Theory& theory, const WaveState& state) {
  auto slits = state.slits();
  if (slits.size() > kFullAssignmentSlitCap)
    throw TooManySlits(slits.size(), kFullAssignmentSlitCap);
  AmplitudeAssignment out;
  const std::size_t n = slits.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<SlitId> open;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) open.push_back(slits[i]);
    Configuration config(std::move(open));
    out.values.emplace_back(config, phi(theory, state, config));
  }
  std::sort(out.values.begin(), out.values.end(),
            [](const auto& a, const auto& b) { return a.first.open() < b.first.open(); });
  return out;
}

}  // namespace regrad
