#include "cmkz/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cmkz {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

cplx Rng::in_disc(double radius, cplx center) {
  const double r = radius * std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return center + std::polar(r, theta);
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  // splitmix64 finaliser over the combined value
  std::uint64_t x = master ^ (fnv1a(tag) + 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<cplx> sample_generic_positions(std::size_t n, Rng& rng, double min_sep_ratio) {
  std::vector<cplx> z(n);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (auto& x : z) x = rng.in_disc(1.0);
    if (n < 2) return z;
    double diameter = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) diameter = std::max(diameter, std::abs(z[a] - z[b]));
    if (min_pairwise_distance(z) >= min_sep_ratio * diameter) return z;
  }
  throw NumericalError("sample_generic_positions: rejection sampling did not terminate");
}

}  // namespace cmkz
