#include "cmkz/types.hpp"

#include <algorithm>
#include <limits>

namespace cmkz {

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

double min_pairwise_distance(const std::vector<cplx>& v) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) d = std::min(d, std::abs(v[a] - v[b]));
  return d;
}

bool lex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace cmkz
