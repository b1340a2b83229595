#ifndef REGRAD_FUNCTIONAL_HPP
#define REGRAD_FUNCTIONAL_HPP

#include <array>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "regrad/combinators.hpp"
#include "regrad/sampling.hpp"
#include "regrad/theory.hpp"

namespace regrad {

// Two states whose single-slit amplitudes agree within the tolerance while
// the joint amplitude does not: the refutation of "phi(a v a') is a
// function of phi(a) and phi(a')".
struct RepresentationWitness {
  WaveState first, second;
  Complex phi_a_first, phi_a_second;
  Complex phi_b_first, phi_b_second;
  Complex phi_joint_first, phi_joint_second;
};

struct RepresentationVerdict {
  enum class Status { Representation, NotRepresentation };
  Status status = Status::Representation;
  std::optional<RepresentationWitness> witness;
  double tolerance = 0.0;
  std::size_t samples_used = 0;

  bool is_representation() const { return status == Status::Representation; }
};

// Default alpha values for the deterministic sign-flip probe family
// (alpha, alpha) vs (alpha, -alpha).
inline constexpr std::array<double, 4> kDefaultProbeAlphas = {1.0, 0.25, 0.5, 2.0};

// Search for a refutation of the representation property over `slits`.
// Deterministic probes run first, then a seeded bucket search over `n`
// sampled states. A Representation result is a sampling verdict, not a
// proof. Throws BadTolerance unless tol > 0.
RepresentationVerdict check_representation(const Theory& theory, const std::array<SlitId, 2>& slits,
                                           const SamplerSpec& sampler, std::size_t n, double tol,
                                           std::span<const double> probe_alphas = kDefaultProbeAlphas);

// Sampled table of (phi(a), phi(a')) -> phi(a v a'), with the
// functionality invariant enforced at construction time.
struct CombinatorTable {
  std::vector<CombinatorEntry> entries;
  double key_tolerance = 0.0;
};

// Throws NonFunctional (with the offending witness in the message) when
// two key-colliding samples disagree about the joint value; this is a
// representation failure surfacing mid-fit.
CombinatorTable fit_combinator(const Theory& theory, const std::array<SlitId, 2>& slits,
                               const SamplerSpec& sampler, std::size_t n, double key_tol,
                               std::span<const double> probe_alphas = kDefaultProbeAlphas);

// Nearest-entry lookup within key_tolerance; throws EvaluationGap when no
// entry is close enough.
Complex table_lookup(const CombinatorTable& table, Complex x, Complex y);

struct AssociativityReport {
  double max_residual = 0.0;
  std::array<Complex, 3> worst_triple{};
  std::size_t grid_size = 0;
  double tolerance = 0.0;
  bool pass = false;
};

using CombinatorSource = std::variant<CombinatorRule, CombinatorTable>;

// max over triples of |S(S(x,y),z) - S(x,S(y,z))|. Closed-form rules are
// evaluated directly; tables by nearest-key lookup, with EvaluationGap when
// an intermediate value is not covered.
AssociativityReport check_associativity(const CombinatorSource& source,
                                        std::span<const std::array<Complex, 3>> triples,
                                        double tol);

// Evaluate phi through an explicit bracketing: leaves evaluate to the
// single-slit phi, joins apply the combinator rule.
Complex fold_phi(const Theory& theory, const WaveState& state, const SetupExpr& expr,
                 const CombinatorRule& rule);

}  // namespace regrad

#endif  // REGRAD_FUNCTIONAL_HPP
