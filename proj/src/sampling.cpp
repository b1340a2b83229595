#include "regrad/sampling.hpp"

#include <cmath>
#include <numbers>

namespace regrad {

const char* SamplerSpec::kind_name() const {
  if (std::holds_alternative<ComplexGaussian>(dist)) return "complex-gaussian";
  if (std::holds_alternative<RealUniform>(dist)) return "real-uniform";
  return "grid";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stateless counter-based stream: draw k for sample `index` under `seed`.
// Hand-rolled so results are identical on every platform.
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t draw) {
  std::uint64_t x = splitmix64(seed ^ splitmix64(index ^ splitmix64(draw + 0x632BE59BD9B4E019ull)));
  // strictly inside (0, 1)
  return (static_cast<double>(x >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// Box-Muller pair of standard normals.
std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t index,
                                        std::uint64_t draw) {
  double u1 = uniform01(seed, index, 2 * draw);
  double u2 = uniform01(seed, index, 2 * draw + 1);
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

WaveState sample_wavestate(const SamplerSpec& spec, const std::vector<SlitId>& slits,
                           std::uint64_t index) {
  std::vector<std::pair<SlitId, Complex>> coeffs;
  coeffs.reserve(slits.size());
  if (const auto* g = std::get_if<ComplexGaussian>(&spec.dist)) {
    if (!(g->sigma > 0.0)) throw BadDistribution("complex-gaussian sigma must be > 0");
    for (std::size_t k = 0; k < slits.size(); ++k) {
      auto [re, im] = gaussian_pair(spec.seed, index, k);
      coeffs.emplace_back(slits[k], Complex{g->sigma * re, g->sigma * im});
    }
  } else if (const auto* u = std::get_if<RealUniform>(&spec.dist)) {
    if (!(u->lo < u->hi)) throw BadDistribution("real-uniform needs lo < hi");
    for (std::size_t k = 0; k < slits.size(); ++k) {
      double t = uniform01(spec.seed, index, k);
      coeffs.emplace_back(slits[k], Complex{u->lo + t * (u->hi - u->lo), 0.0});
    }
  } else {
    const auto& grid = std::get<GridPoints>(spec.dist);
    if (grid.points.empty()) throw BadDistribution("grid needs at least one point");
    const std::size_t m = grid.points.size();
    std::uint64_t digits = index;
    for (std::size_t k = 0; k < slits.size(); ++k) {
      coeffs.emplace_back(slits[k], Complex{grid.points[digits % m], 0.0});
      digits /= m;
    }
  }
  return WaveState(std::move(coeffs));
}

std::vector<WaveState> sample_batch(const SamplerSpec& spec, const std::vector<SlitId>& slits,
                                    std::size_t count, std::uint64_t index_offset) {
  std::vector<WaveState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(sample_wavestate(spec, slits, index_offset + i));
  return out;
}

}  // namespace regrad
