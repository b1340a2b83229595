#include "regrad/functional.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

namespace regrad {

namespace {

std::int64_t quantize(double v, double tol) {
  double cell = std::floor(v / tol + 0.5);
  // keys this far out cannot produce honest collisions anyway
  if (cell > 9.0e15) return std::int64_t{9000000000000000};
  if (cell < -9.0e15) return std::int64_t{-9000000000000000};
  return static_cast<std::int64_t>(cell);
}

using BucketKey = std::array<std::int64_t, 4>;

BucketKey bucket_key(Complex a, Complex b, double tol) {
  return {quantize(a.real(), tol), quantize(a.imag(), tol), quantize(b.real(), tol),
          quantize(b.imag(), tol)};
}

struct PhiTriple {
  Complex a, b, joint;
};

PhiTriple eval_phis(const Theory& theory, const std::array<SlitId, 2>& slits,
                    const WaveState& state) {
  Configuration ca({slits[0]});
  Configuration cb({slits[1]});
  Configuration cab({slits[0], slits[1]});
  return {phi(theory, state, ca), phi(theory, state, cb), phi(theory, state, cab)};
}

std::string complex_str(Complex z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string witness_detail(const RepresentationWitness& w) {
  std::ostringstream os;
  os << "per-slit phi (" << complex_str(w.phi_a_first) << ", " << complex_str(w.phi_b_first)
     << ") vs (" << complex_str(w.phi_a_second) << ", " << complex_str(w.phi_b_second)
     << ") agree, joint phi " << complex_str(w.phi_joint_first) << " vs "
     << complex_str(w.phi_joint_second) << " do not";
  return os.str();
}

// The paper-style relative-sign family: per-slit amplitudes blind to the
// sign of the second coefficient while the joint amplitude is not.
std::optional<RepresentationWitness> probe_sign_family(const Theory& theory,
                                                       const std::array<SlitId, 2>& slits,
                                                       std::span<const double> probe_alphas,
                                                       double tol) {
  for (double alpha : probe_alphas) {
    WaveState s1 = WaveState::pair(slits[0], slits[1], {alpha, 0.0}, {alpha, 0.0});
    WaveState s2 = WaveState::pair(slits[0], slits[1], {alpha, 0.0}, {-alpha, 0.0});
    PhiTriple p1, p2;
    try {
      p1 = eval_phis(theory, slits, s1);
      p2 = eval_phis(theory, slits, s2);
    } catch (const TableMiss&) {
      continue;  // user tables need not cover the probe states
    }
    if (std::abs(p1.a - p2.a) <= tol && std::abs(p1.b - p2.b) <= tol &&
        std::abs(p1.joint - p2.joint) > 10.0 * tol) {
      return RepresentationWitness{s1, s2, p1.a, p2.a, p1.b, p2.b, p1.joint, p2.joint};
    }
  }
  return std::nullopt;
}

}  // namespace

RepresentationVerdict check_representation(const Theory& theory, const std::array<SlitId, 2>& slits,
                                           const SamplerSpec& sampler, std::size_t n, double tol,
                                           std::span<const double> probe_alphas) {
  if (!(tol > 0.0)) throw BadTolerance(tol);
  if (n < 1) throw Error("representation check needs at least one sample");

  RepresentationVerdict verdict;
  verdict.tolerance = tol;

  if (auto w = probe_sign_family(theory, slits, probe_alphas, tol)) {
    verdict.status = RepresentationVerdict::Status::NotRepresentation;
    verdict.witness = std::move(w);
    verdict.samples_used = 0;
    return verdict;
  }

  struct Stored {
    WaveState state;
    PhiTriple phis;
  };
  std::map<BucketKey, Stored> buckets;
  std::vector<SlitId> slit_list{slits[0], slits[1]};
  for (std::size_t i = 0; i < n; ++i) {
    WaveState state = sample_wavestate(sampler, slit_list, substream::kRepresentation + i);
    PhiTriple p;
    try {
      p = eval_phis(theory, slits, state);
    } catch (const TableMiss&) {
      continue;
    }
    auto key = bucket_key(p.a, p.b, tol);
    auto [it, inserted] = buckets.emplace(key, Stored{state, p});
    if (!inserted) {
      const Stored& prev = it->second;
      if (std::abs(prev.phis.a - p.a) <= tol && std::abs(prev.phis.b - p.b) <= tol &&
          std::abs(prev.phis.joint - p.joint) > 10.0 * tol) {
        verdict.status = RepresentationVerdict::Status::NotRepresentation;
        verdict.witness = RepresentationWitness{prev.state,  state, prev.phis.a,     p.a,
                                                prev.phis.b, p.b,   prev.phis.joint, p.joint};
        verdict.samples_used = i + 1;
        return verdict;
      }
    }
  }
  verdict.status = RepresentationVerdict::Status::Representation;
  verdict.samples_used = n;
  return verdict;
}

CombinatorTable fit_combinator(const Theory& theory, const std::array<SlitId, 2>& slits,
                               const SamplerSpec& sampler, std::size_t n, double key_tol,
                               std::span<const double> probe_alphas) {
  if (!(key_tol > 0.0)) throw BadTolerance(key_tol);

  if (auto w = probe_sign_family(theory, slits, probe_alphas, key_tol))
    throw NonFunctional(witness_detail(*w));

  struct Stored {
    WaveState state;
    PhiTriple phis;
  };
  std::map<BucketKey, Stored> buckets;
  CombinatorTable table;
  table.key_tolerance = key_tol;
  std::vector<SlitId> slit_list{slits[0], slits[1]};
  for (std::size_t i = 0; i < n; ++i) {
    WaveState state = sample_wavestate(sampler, slit_list, substream::kFit + i);
    PhiTriple p;
    try {
      p = eval_phis(theory, slits, state);
    } catch (const TableMiss&) {
      continue;
    }
    // zero-zero keys are kept for refutation but never anchor the table
    bool degenerate = std::abs(p.a) <= key_tol && std::abs(p.b) <= key_tol;
    auto key = bucket_key(p.a, p.b, key_tol);
    auto [it, inserted] = buckets.emplace(key, Stored{state, p});
    if (!inserted) {
      const Stored& prev = it->second;
      if (std::abs(prev.phis.a - p.a) <= key_tol && std::abs(prev.phis.b - p.b) <= key_tol &&
          std::abs(prev.phis.joint - p.joint) > 10.0 * key_tol) {
        RepresentationWitness w{prev.state,  state, prev.phis.a,     p.a,
                                prev.phis.b, p.b,   prev.phis.joint, p.joint};
        throw NonFunctional(witness_detail(w));
      }
      continue;
    }
    if (!degenerate) table.entries.push_back({p.a, p.b, p.joint});
  }
  // the bucket lattice can miss boundary-adjacent keys; the table invariant
  // is pairwise, so sweep once before handing it out
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& a = table.entries[i];
    for (std::size_t j = i + 1; j < table.entries.size(); ++j) {
      const auto& b = table.entries[j];
      if (std::abs(a.x - b.x) <= key_tol && std::abs(a.y - b.y) <= key_tol &&
          std::abs(a.z - b.z) > 10.0 * key_tol) {
        std::ostringstream os;
        os << "entries S(" << complex_str(a.x) << ", " << complex_str(a.y) << ") disagree: "
           << complex_str(a.z) << " vs " << complex_str(b.z);
        throw NonFunctional(os.str());
      }
    }
  }
  return table;
}

Complex table_lookup(const CombinatorTable& table, Complex x, Complex y) {
  const CombinatorEntry* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& e : table.entries) {
    double dx = std::abs(e.x - x);
    double dy = std::abs(e.y - y);
    if (dx <= table.key_tolerance && dy <= table.key_tolerance && dx + dy < best_dist) {
      best = &e;
      best_dist = dx + dy;
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "S(" << complex_str(x) << ", " << complex_str(y) << ") within key tolerance "
       << table.key_tolerance;
    throw EvaluationGap(os.str());
  }
  return best->z;
}

AssociativityReport check_associativity(const CombinatorSource& source,
                                        std::span<const std::array<Complex, 3>> triples,
                                        double tol) {
  if (!(tol > 0.0)) throw BadTolerance(tol);
  auto eval = [&](Complex x, Complex y) -> Complex {
    if (const auto* rule = std::get_if<CombinatorRule>(&source)) return rule->apply(x, y);
    return table_lookup(std::get<CombinatorTable>(source), x, y);
  };
  AssociativityReport report;
  report.grid_size = triples.size();
  report.tolerance = tol;
  bool first = true;
  for (const auto& t : triples) {
    Complex lhs = eval(eval(t[0], t[1]), t[2]);
    Complex rhs = eval(t[0], eval(t[1], t[2]));
    double residual = std::abs(lhs - rhs);
    if (first || residual > report.max_residual) {
      report.max_residual = residual;
      report.worst_triple = t;
      first = false;
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

Complex fold_phi(const Theory& theory, const WaveState& state, const SetupExpr& expr,
                 const CombinatorRule& rule) {
  if (expr.is_atom()) return phi(theory, state, Configuration({expr.slit()}));
  return rule.apply(fold_phi(theory, state, *expr.left(), rule),
                    fold_phi(theory, state, *expr.right(), rule));
}

}  // namespace regrad
