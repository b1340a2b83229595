#ifndef REGRAD_SAMPLING_HPP
#define REGRAD_SAMPLING_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "regrad/theory.hpp"

namespace regrad {

// Coefficients re and im each N(0, sigma^2).
struct ComplexGaussian {
  double sigma = 1.0;
};

// Real coefficients uniform on [lo, hi].
struct RealUniform {
  double lo = -1.0;
  double hi = 1.0;
};

// Real coefficients enumerated from a fixed point list: sample index i is
// the mixed-radix expansion of i over the points, one digit per slit, so a
// batch walks the full Cartesian grid before wrapping.
struct GridPoints {
  std::vector<double> points;
};

struct SamplerSpec {
  std::variant<ComplexGaussian, RealUniform, GridPoints> dist;
  std::uint64_t seed = 0;

  const char* kind_name() const;
};

// Deterministic draw for one sample index: identical (spec, slits, index)
// always produce the identical state, independent of any other draws.
WaveState sample_wavestate(const SamplerSpec& spec, const std::vector<SlitId>& slits,
                           std::uint64_t index = 0);

std::vector<WaveState> sample_batch(const SamplerSpec& spec, const std::vector<SlitId>& slits,
                                    std::size_t count, std::uint64_t index_offset = 0);

// Reserved index-space offsets so distinct pipeline stages never share draws.
namespace substream {
inline constexpr std::uint64_t kRepresentation = 0;
inline constexpr std::uint64_t kFit = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kAssociativity = std::uint64_t{2} << 20;
inline constexpr std::uint64_t kRegraduation = std::uint64_t{3} << 20;
inline constexpr std::uint64_t kAdditivity = std::uint64_t{4} << 20;
}  // namespace substream

}  // namespace regrad

#endif  // REGRAD_SAMPLING_HPP
