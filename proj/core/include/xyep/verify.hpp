#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xyep/complex.hpp"

namespace xyep::verify {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct SuiteResult {
  std::string name;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  // Worst check, for one-line summaries.
  const Check* worst() const;
};

// Reference EP list: mode II entries at (re, +-im); mode I mirrors them.
struct TableRow {
  int L;
  double re, im;
};
const std::vector<TableRow>& table1();
std::vector<cplx> table1_gammas(int L, bool mode_one);

// Uniform in |gamma| < 2, at least `exclusion` away from +-1 and the EPs of this L.
cplx sample_gamma(std::mt19937_64& rng, int L, double exclusion);

// Suite names in acceptance-criterion order.
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, std::uint64_t seed = 20240611);

}  // namespace xyep::verify
