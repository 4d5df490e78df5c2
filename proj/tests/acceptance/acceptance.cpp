// One line per acceptance criterion; tolerances live in the verify suites.
#include <cstdio>

#include "xyep/verify.hpp"

int main() {
  const auto& names = xyep::verify::suite_names();
  int failed = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    const auto r = xyep::verify::run_suite(names[i]);
    const bool ok = r.passed();
    failed += !ok;
    std::printf("%s criterion %zu [%s] %s (%.2f s)\n", ok ? "PASS" : "FAIL", i + 1, r.name.c_str(), r.title.c_str(),
                r.seconds);
    for (const auto& c : r.checks)
      std::printf("    %s %s: %.6g (limit %.6g)\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.value, c.threshold);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(names.size()) - failed, names.size());
  return failed == 0 ? 0 : 1;
}
