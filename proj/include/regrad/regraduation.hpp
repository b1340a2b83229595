#ifndef REGRAD_REGRADUATION_HPP
#define REGRAD_REGRADUATION_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "regrad/combinators.hpp"
#include "regrad/theory.hpp"

namespace regrad {

// Linear relation xi(points[joint]) = xi(points[first]) + xi(points[second])
// over the unknown xi-values at the listed sample points.
struct ConstraintEquation {
  std::size_t joint, first, second;
};

struct ConstraintSet {
  std::vector<Complex> points;                // deduplicated sample points
  std::vector<ConstraintEquation> equations;  // unique relations
  std::vector<WaveState> sources;             // first contributing state per equation
  double merge_tolerance = 1e-10;

  std::size_t point_index(Complex value) const;  // throws Error when absent
};

// One additivity equation per state, with phi values merged into shared
// unknowns when they coincide within merge_tol. Duplicate relations are
// kept once.
ConstraintSet build_constraints(const Theory& theory, std::span<const WaveState> states,
                                const std::array<SlitId, 2>& slits, double merge_tol = 1e-10);

struct XiSample {
  Complex point;
  double value;
};

struct RegraduationResult {
  enum class Status { Found, Trivial };
  Status status = Status::Trivial;
  std::vector<XiSample> table;        // xi at each sample point, sorted by point
  double additivity_residual = 0.0;   // max equation residual of the reported table
  Complex anchor_point{};             // normalization anchor
  double anchor_value = 1.0;          // attempted xi(anchor)
  double constrained_residual = 0.0;  // anchored sup-norm residual (certificate, first leg)
  double unconstrained_sup_norm = 0.0;  // best non-trivial exact solution (certificate, second leg)
  std::size_t kernel_dim = 0;         // numerical null-space dimension

  bool found() const { return status == Status::Found; }
};

// Solve the homogeneous system by least squares under xi(anchor) = 1.
//   feasible & unique           -> Found with the anchored table
//   feasible & non-unique       -> SingularSystem
//   infeasible & trivial kernel -> Trivial (the two-sided certificate)
//   infeasible & live kernel    -> BadAnchor (solutions exist, none with xi(anchor) = 1)
RegraduationResult solve_constraints(const ConstraintSet& constraints, Complex anchor,
                                     double feasibility_tol = 1e-6, double triviality_tol = 1e-8);

// Monotone piecewise-linear interpolation table on real knots.
class RealXiTable {
public:
  RealXiTable(std::vector<double> knots, std::vector<double> values);

  double operator()(double t) const;  // throws DomainEscape outside the knot span
  double lo() const { return knots_.front(); }
  double hi() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> knots_;  // strictly increasing
  std::vector<double> values_;
};

// Interpolation view of a result whose sample points are all real.
RealXiTable to_real_table(const RegraduationResult& result);

// Construct xi on an m-point grid over [lo, hi] for a closed-form
// associative combinator, by least squares over all grid pairs of
// xi(S(x, y)) = xi(x) + xi(y) with S-values placed by piecewise-linear
// interpolation. Pairs whose S-value leaves the domain carry no usable
// equation and are skipped. Throws NotAssociative / NonMonotone when the
// preconditions fail.
RegraduationResult regraduate_combinator(const CombinatorRule& rule, double lo, double hi,
                                         std::size_t grid_size, double feasibility_tol = 1e-6);

struct AdditivityStats {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::size_t count = 0;
};

// Residuals |xi(phi(a v a')) - xi(phi(a)) - xi(phi(a'))| over the states.
// Table variant throws DomainEscape when a phi value is outside the table.
AdditivityStats verify_additivity(const RealXiTable& xi, const Theory& theory,
                                  std::span<const WaveState> states,
                                  const std::array<SlitId, 2>& slits);
AdditivityStats verify_additivity(const std::function<double(double)>& xi, const Theory& theory,
                                  std::span<const WaveState> states,
                                  const std::array<SlitId, 2>& slits);

}  // namespace regrad

#endif  // REGRAD_REGRADUATION_HPP
