#ifndef REGRAD_THEORY_HPP
#define REGRAD_THEORY_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regrad/setup.hpp"

namespace regrad {

using Complex = std::complex<double>;

// Detection-point labels. Inert metadata; no dynamics are simulated.
struct Detector {
  std::string position = "x_f";
  std::string time = "t_f";
  bool operator==(const Detector&) const = default;
};

// A wavefunction over slits: slit -> complex coefficient, plus detector
// labels. Immutable value type; coefficients are kept sorted by label.
class WaveState {
public:
  WaveState() = default;
  WaveState(std::vector<std::pair<SlitId, Complex>> coeffs, Detector detector = {});

  // Two-slit convenience: coefficients for the slits in label order.
  static WaveState pair(const SlitId& a, const SlitId& b, Complex ca, Complex cb);

  const std::vector<std::pair<SlitId, Complex>>& coefficients() const { return coeffs_; }
  const Detector& detector() const { return detector_; }
  std::vector<SlitId> slits() const;
  bool has_slit(const SlitId& id) const;
  Complex coefficient(const SlitId& id) const;  // throws UnknownSlit

  WaveState with_coefficient(const SlitId& id, Complex value) const;  // throws UnknownSlit

  bool operator==(const WaveState&) const = default;

private:
  std::vector<std::pair<SlitId, Complex>> coeffs_;  // sorted by label
  Detector detector_;
};

// One explicit sample of a user-defined theory: the open-slit coefficients
// (in label order) for a configuration, and the amplitude assigned to it.
struct UserTableEntry {
  Configuration config;
  std::vector<Complex> coeffs;
  Complex value;
};

class UserTable {
public:
  explicit UserTable(std::vector<UserTableEntry> entries, double key_tolerance = 1e-9);

  // Exact-key lookup (keys match within key_tolerance componentwise).
  // Throws TableMiss when no entry matches.
  Complex lookup(const Configuration& config, const std::vector<Complex>& coeffs) const;

  const std::vector<UserTableEntry>& entries() const { return entries_; }
  double key_tolerance() const { return key_tol_; }

private:
  std::vector<UserTableEntry> entries_;
  double key_tol_;
};

// A closed-form two-argument combinator, used both for associativity
// checks and for surrogate theories whose joint amplitude is S applied to
// the per-slit coefficients.
struct CombinatorRule {
  std::string name;
  std::function<Complex(Complex, Complex)> apply;
};

// An amplitude-assignment theory: how the detector amplitude gamma is
// computed from the (projected) wavefunction coefficients.
class Theory {
public:
  enum class Kind { Linear, Quadratic, Power, UserTable, Surrogate };

  static Theory linear();
  static Theory quadratic();                 // identical to power(2)
  static Theory power(int exponent);         // gamma = (sum of coefficients)^p
  static Theory user_table(UserTable table);
  static Theory surrogate(CombinatorRule rule);  // phi(join) = S folded over coefficients

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  int exponent() const { return exponent_; }
  const UserTable& table() const;
  const CombinatorRule& rule() const;

private:
  Theory() = default;
  Kind kind_ = Kind::Linear;
  int exponent_ = 1;
  std::optional<UserTable> table_;
  std::optional<CombinatorRule> rule_;
};

// Zero the coefficients of every slit not in `open`; open slits unchanged.
WaveState project_closed(const WaveState& state, const Configuration& open);

// gamma = <detector | state> under the theory's evolution rule. For
// user-table and surrogate theories the configuration identifies which
// slits are open; by default all of the state's slits count as open.
Complex detector_amplitude(const Theory& theory, const WaveState& state,
                           const std::optional<Configuration>& config = std::nullopt);

// The amplitude assigned to a configuration of open slits:
// detector_amplitude after slit-closure projection.
Complex phi(const Theory& theory, const WaveState& state, const Configuration& config);

// phi over every non-empty sub-configuration of one state.
struct AmplitudeAssignment {
  std::vector<std::pair<Configuration, Complex>> values;  // sorted by configuration
  Complex at(const Configuration& config) const;          // throws Error when absent
};

inline constexpr std::size_t kFullAssignmentSlitCap = 12;

AmplitudeAssignment full_assignment(const Theory& theory, const WaveState& state);

}  // namespace regrad

#endif  // REGRAD_THEORY_HPP
