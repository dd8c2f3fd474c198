#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "cmkz/types.hpp"

namespace cmkz {

/// Seeded generator with platform-independent conversions (the standard
/// distributions are implementation-defined, so replay would not be portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  cplx complex_normal();
  /// Uniform in the closed disc of the given radius around `center`.
  cplx in_disc(double radius, cplx center = {0.0, 0.0});

 private:
  std::mt19937_64 engine_;
};

/// Stable 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view data);

/// Child seed for a named sub-task; independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

/// Sample n positions uniformly in the unit disc, rejecting configurations
/// whose minimum pairwise distance is below `min_sep_ratio` times the diameter.
std::vector<cplx> sample_generic_positions(std::size_t n, Rng& rng, double min_sep_ratio = 1e-2);

}  // namespace cmkz
