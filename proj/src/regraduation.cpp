#include "regrad/regraduation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace regrad {

namespace {

constexpr double kRankRelTol = 1e-10;

std::string num_str(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string point_str(Complex p) {
  if (p.imag() == 0.0) return num_str(p.real());
  std::ostringstream os;
  os << num_str(p.real()) << (p.imag() < 0 ? "-" : "+") << num_str(std::abs(p.imag())) << "i";
  return os.str();
}

}  // namespace

std::size_t ConstraintSet::point_index(Complex value) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (std::abs(points[i] - value) <= merge_tolerance) return i;
  throw Error("point " + point_str(value) + " is not referenced by the constraint set");
}

ConstraintSet build_constraints(const Theory& theory, std::span<const WaveState> states,
                                const std::array<SlitId, 2>& slits, double merge_tol) {
  ConstraintSet cs;
  cs.merge_tolerance = merge_tol;
  Configuration ca({slits[0]});
  Configuration cb({slits[1]});
  Configuration cab({slits[0], slits[1]});

  auto intern = [&](Complex value) -> std::size_t {
    for (std::size_t i = 0; i < cs.points.size(); ++i)
      if (std::abs(cs.points[i] - value) <= merge_tol) return i;
    cs.points.push_back(value);
    return cs.points.size() - 1;
  };

  std::set<std::array<std::size_t, 3>> seen;
  for (const auto& state : states) {
    std::size_t u = intern(phi(theory, state, cab));
    std::size_t v = intern(phi(theory, state, ca));
    std::size_t w = intern(phi(theory, state, cb));
    if (w < v) std::swap(v, w);  // xi(v) + xi(w) is symmetric
    if (!seen.insert({u, v, w}).second) continue;
    cs.equations.push_back({u, v, w});
    cs.sources.push_back(state);
  }
  return cs;
}

namespace {

Eigen::MatrixXd constraint_matrix(const ConstraintSet& cs) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cs.equations.size()),
                                            static_cast<Eigen::Index>(cs.points.size()));
  for (std::size_t r = 0; r < cs.equations.size(); ++r) {
    const auto& eq = cs.equations[r];
    a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(eq.joint)) += 1.0;
    a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(eq.first)) -= 1.0;
    a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(eq.second)) -= 1.0;
  }
  return a;
}

std::vector<XiSample> make_table(const std::vector<Complex>& points, const Eigen::VectorXd& x) {
  std::vector<XiSample> table;
  table.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    table.push_back({points[i], x(static_cast<Eigen::Index>(i))});
  std::sort(table.begin(), table.end(), [](const XiSample& a, const XiSample& b) {
    if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
    return a.point.imag() < b.point.imag();
  });
  return table;
}

}  // namespace

RegraduationResult solve_constraints(const ConstraintSet& cs, Complex anchor,
                                     double feasibility_tol, double triviality_tol) {
  if (cs.equations.empty()) throw SingularSystem("no equations");
  const std::size_t anchor_idx = [&] {
    try {
      return cs.point_index(anchor);
    } catch (const Error&) {
      throw BadAnchor("anchor " + point_str(anchor) + " is not a referenced sample point");
    }
  }();

  const Eigen::MatrixXd a = constraint_matrix(cs);
  const auto n = a.cols();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > sigma_max * kRankRelTol && sv(i) > 0.0) ++rank;
  const std::size_t kernel_dim = static_cast<std::size_t>(n - rank);

  // anchored least squares: x[anchor] = 1, minimize |A x| over the rest
  Eigen::VectorXd x(n);
  if (n == 1) {
    x(0) = 1.0;
  } else {
    Eigen::MatrixXd a_rest(a.rows(), n - 1);
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == static_cast<Eigen::Index>(anchor_idx)) continue;
      a_rest.col(col++) = a.col(j);
    }
    Eigen::VectorXd rhs = -a.col(static_cast<Eigen::Index>(anchor_idx));
    Eigen::VectorXd y = a_rest.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    col = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      x(j) = (j == static_cast<Eigen::Index>(anchor_idx)) ? 1.0 : y(col++);
  }
  const double constrained_residual = (a * x).lpNorm<Eigen::Infinity>();

  // non-trivial exact solutions, if any, live in the numerical null space
  double kernel_sup = 0.0;
  double kernel_anchor_weight = 0.0;
  for (Eigen::Index i = rank; i < n; ++i) {
    const auto v = svd.matrixV().col(i);
    kernel_sup = std::max(kernel_sup, v.lpNorm<Eigen::Infinity>());
    kernel_anchor_weight =
        std::max(kernel_anchor_weight, std::abs(v(static_cast<Eigen::Index>(anchor_idx))));
  }

  RegraduationResult result;
  result.anchor_point = cs.points[anchor_idx];
  result.anchor_value = 1.0;
  result.constrained_residual = constrained_residual;
  result.kernel_dim = kernel_dim;
  result.unconstrained_sup_norm = kernel_sup;

  if (constrained_residual <= feasibility_tol) {
    // feasible; unique only when no null direction keeps xi(anchor) fixed
    const bool unique = kernel_dim == 0 || (kernel_dim == 1 && kernel_anchor_weight > 1e-8);
    if (!unique)
      throw SingularSystem("anchored solution is not unique (null space dimension " +
                           std::to_string(kernel_dim) + ")");
    result.status = RegraduationResult::Status::Found;
    result.table = make_table(cs.points, x);
    result.additivity_residual = constrained_residual;
    return result;
  }

  if (kernel_dim == 0 && kernel_sup <= triviality_tol) {
    // two-sided certificate: no anchored fit, and the unconstrained
    // least-squares solution collapses to zero
    result.status = RegraduationResult::Status::Trivial;
    result.table = make_table(cs.points, Eigen::VectorXd::Zero(n));
    result.additivity_residual = 0.0;
    return result;
  }

  throw BadAnchor("the system admits non-trivial solutions, but none with xi(" +
                  point_str(cs.points[anchor_idx]) + ") = 1; re-anchor or prune states");
}

RealXiTable::RealXiTable(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size() || knots_.size() < 2)
    throw Error("xi table needs at least two (knot, value) pairs");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw Error("xi table knots must be strictly increasing");
}

double RealXiTable::operator()(double t) const {
  constexpr double slack = 1e-12;
  if (t < knots_.front() - slack || t > knots_.back() + slack)
    throw DomainEscape(num_str(t) + " outside [" + num_str(knots_.front()) + ", " +
                       num_str(knots_.back()) + "]");
  if (t <= knots_.front()) return values_.front();
  if (t >= knots_.back()) return values_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  std::size_t lo = hi - 1;
  double w = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

RealXiTable to_real_table(const RegraduationResult& result) {
  std::vector<double> knots, values;
  knots.reserve(result.table.size());
  values.reserve(result.table.size());
  for (const auto& s : result.table) {
    if (std::abs(s.point.imag()) > 1e-9)
      throw Error("xi table has a non-real sample point " + point_str(s.point));
    knots.push_back(s.point.real());
    values.push_back(s.value);
  }
  return RealXiTable(std::move(knots), std::move(values));
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_draw(std::uint64_t k) {
  return (static_cast<double>(mix64(k) >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double real_apply(const CombinatorRule& rule, double x, double y) {
  Complex z = rule.apply({x, 0.0}, {y, 0.0});
  if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
    throw Error("combinator '" + rule.name + "' is not real-valued on the domain");
  return z.real();
}

void precheck_associative(const CombinatorRule& rule, double lo, double hi) {
  constexpr std::size_t kTriples = 200;
  constexpr double kTol = 1e-9;
  double worst = 0.0;
  std::array<double, 3> worst_triple{};
  for (std::size_t i = 0; i < kTriples; ++i) {
    double x = lo + unit_draw(3 * i) * (hi - lo);
    double y = lo + unit_draw(3 * i + 1) * (hi - lo);
    double z = lo + unit_draw(3 * i + 2) * (hi - lo);
    double lhs = real_apply(rule, real_apply(rule, x, y), z);
    double rhs = real_apply(rule, x, real_apply(rule, y, z));
    double r = std::abs(lhs - rhs);
    if (r > worst) {
      worst = r;
      worst_triple = {x, y, z};
    }
  }
  if (worst > kTol) {
    std::ostringstream os;
    os << "residual " << worst << " at (" << worst_triple[0] << ", " << worst_triple[1] << ", "
       << worst_triple[2] << ")";
    throw NotAssociative(os.str());
  }
}

void precheck_monotone(const CombinatorRule& rule, const std::vector<double>& knots) {
  const std::size_t m = knots.size();
  // probe a spread of partner values; strict increase required in each slot
  for (std::size_t pi = 0; pi < 7; ++pi) {
    double y = knots[(pi * (m - 1)) / 6];
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (!(real_apply(rule, knots[i + 1], y) > real_apply(rule, knots[i], y)))
        throw NonMonotone("first argument at x=" + num_str(knots[i]) + ", y=" + num_str(y));
      if (!(real_apply(rule, y, knots[i + 1]) > real_apply(rule, y, knots[i])))
        throw NonMonotone("second argument at x=" + num_str(y) + ", y=" + num_str(knots[i]));
    }
  }
}

}  // namespace

RegraduationResult regraduate_combinator(const CombinatorRule& rule, double lo, double hi,
                                         std::size_t grid_size, double feasibility_tol) {
  if (!(lo < hi)) throw Error("regraduation domain needs lo < hi");
  if (grid_size < 3) throw Error("regraduation grid needs at least 3 points");

  precheck_associative(rule, lo, hi);

  // log spacing (when available) equidistributes the interpolation error
  // for the product-like combinators
  const std::size_t m = grid_size;
  std::vector<double> knots(m);
  if (lo > 0.0) {
    const double step = std::log(hi / lo) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) knots[i] = lo * std::exp(step * static_cast<double>(i));
  } else {
    const double step = (hi - lo) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) knots[i] = lo + step * static_cast<double>(i);
  }
  knots.front() = lo;
  knots.back() = hi;

  precheck_monotone(rule, knots);

  struct RowEntry {
    std::size_t idx;
    double coeff;
  };
  using Row = std::array<RowEntry, 6>;
  auto hat = [&](double t, double sign, RowEntry* out) {
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - knots.begin()), 1, m - 1) - 1;
    double w = std::clamp((t - knots[k]) / (knots[k + 1] - knots[k]), 0.0, 1.0);
    out[0] = {k, sign * (1.0 - w)};
    out[1] = {k + 1, sign * w};
  };
  auto make_row = [&](double x, double y, Row& row) -> bool {
    double s = real_apply(rule, x, y);
    if (s < lo || s > hi) return false;
    hat(s, 1.0, &row[0]);
    hat(x, -1.0, &row[2]);
    hat(y, -1.0, &row[4]);
    return true;
  };

  // Equations: xi at S(x, y), placed by interpolation, equals xi(x) + xi(y).
  // All grid pairs, plus randomized in-domain pairs; the random pairs break
  // the weight alignment that leaves edge knots under-determined.
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                 static_cast<Eigen::Index>(m));
  std::size_t usable_pairs = 0;
  auto for_each_equation = [&](bool grid_only, auto&& visit) {
    Row row;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (make_row(knots[i], knots[j], row)) visit(row);
    if (grid_only) return;
    const std::size_t extra = 8 * m;
    for (std::size_t r = 0; r < extra; ++r) {
      double x = lo + unit_draw(0xC0FFEE + 2 * r) * (hi - lo);
      double y = lo + unit_draw(0xC0FFEE + 2 * r + 1) * (hi - lo);
      if (make_row(x, y, row)) visit(row);
    }
  };
  for_each_equation(false, [&](const Row& row) {
    ++usable_pairs;
    for (const auto& p : row)
      for (const auto& q : row)
        normal(static_cast<Eigen::Index>(p.idx), static_cast<Eigen::Index>(q.idx)) +=
            p.coeff * q.coeff;
  });
  if (usable_pairs < m)
    throw Error("combinator leaves the domain on almost every pair; shrink the domain");
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i)
    if (normal(i, i) == 0.0)
      throw Error("no equation touches xi(" + num_str(knots[static_cast<std::size_t>(i)]) +
                  "); the combinator never maps pairs near it into the domain");

  auto solve_anchored = [&](std::size_t anchor_idx) {
    Eigen::Index n = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd nrr(n - 1, n - 1);
    Eigen::VectorXd nra(n - 1);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == static_cast<Eigen::Index>(anchor_idx)) continue;
      Eigen::Index c = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == static_cast<Eigen::Index>(anchor_idx)) continue;
        nrr(r, c++) = normal(i, j);
      }
      nra(r++) = normal(i, static_cast<Eigen::Index>(anchor_idx));
    }
    Eigen::VectorXd y = nrr.ldlt().solve(-nra);
    Eigen::VectorXd x(n);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      x(j) = (j == static_cast<Eigen::Index>(anchor_idx)) ? 1.0 : y(c++);
    double max_residual = 0.0;
    for_each_equation(true, [&](const Row& row) {
      double r3 = 0.0;
      for (const auto& p : row) r3 += p.coeff * x(static_cast<Eigen::Index>(p.idx));
      max_residual = std::max(max_residual, std::abs(r3));
    });
    return std::make_pair(std::move(x), max_residual);
  };

  std::size_t anchor_idx = m - 1;  // xi(hi) = 1; hi avoids zero-crossings like log(1)
  auto [x, residual] = solve_anchored(anchor_idx);
  if (residual > feasibility_tol) {
    anchor_idx = 0;
    std::tie(x, residual) = solve_anchored(anchor_idx);
  }
  if (residual > feasibility_tol)
    throw BadAnchor("anchored least squares infeasible at both domain endpoints (residual " +
                    num_str(residual) + ")");

  RegraduationResult result;
  result.status = RegraduationResult::Status::Found;
  result.table.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    result.table.push_back({Complex{knots[i], 0.0}, x(static_cast<Eigen::Index>(i))});
  result.additivity_residual = residual;
  result.constrained_residual = residual;
  result.anchor_point = Complex{knots[anchor_idx], 0.0};
  result.anchor_value = 1.0;
  result.unconstrained_sup_norm = x.lpNorm<Eigen::Infinity>();
  result.kernel_dim = 1;  // the scaling gauge
  return result;
}

namespace {

AdditivityStats additivity_stats(const std::function<double(double)>& xi, const Theory& theory,
                                 std::span<const WaveState> states,
                                 const std::array<SlitId, 2>& slits) {
  Configuration ca({slits[0]});
  Configuration cb({slits[1]});
  Configuration cab({slits[0], slits[1]});
  AdditivityStats stats;
  double sum = 0.0;
  for (const auto& state : states) {
    auto as_real = [&](Complex z, const char* what) {
      if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real())))
        throw DomainEscape(std::string(what) + " = " + point_str(z) + " is not real");
      return z.real();
    };
    double pj = as_real(phi(theory, state, cab), "phi(a v a')");
    double pa = as_real(phi(theory, state, ca), "phi(a)");
    double pb = as_real(phi(theory, state, cb), "phi(a')");
    double residual = std::abs(xi(pj) - xi(pa) - xi(pb));
    stats.max_residual = std::max(stats.max_residual, residual);
    sum += residual;
    ++stats.count;
  }
  if (stats.count) stats.mean_residual = sum / static_cast<double>(stats.count);
  return stats;
}

}  // namespace

AdditivityStats verify_additivity(const RealXiTable& xi, const Theory& theory,
                                  std::span<const WaveState> states,
                                  const std::array<SlitId, 2>& slits) {
  return additivity_stats([&xi](double t) { return xi(t); }, theory, states, slits);
}

AdditivityStats verify_additivity(const std::function<double(double)>& xi, const Theory& theory,
                                  std::span<const WaveState> states,
                                  const std::array<SlitId, 2>& slits) {
  return additivity_stats(xi, theory, states, slits);
}

}  // namespace regrad
