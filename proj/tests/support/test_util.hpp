#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "xyep/complex.hpp"
#include "xyep/errors.hpp"

namespace xyep::test {

inline cplx random_gamma(std::mt19937_64& rng, double rmax = 1.8) {
  std::uniform_real_distribution<double> u(-rmax, rmax);
  for (;;) {
    const cplx g(u(rng), u(rng));
    if (std::abs(g) < rmax && std::abs(g - 1.0) > 0.05 && std::abs(g + 1.0) > 0.05) return g;
  }
}

// Greedy multiset distance, independent of the library's matcher.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (cplx z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - z) < std::abs(q - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace xyep::test
