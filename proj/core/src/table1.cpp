#include "xyep/verify.hpp"

namespace xyep::verify {

const std::vector<TableRow>& table1() {
  static const std::vector<TableRow> rows = {
      {4, 0.6000, 0.8000},
      {6, 0.8030, 1.3107}, {6, 0.3399, 0.5547},
      {8, 1.0116, 1.7804}, {8, 0.4138, 0.9104}, {8, 0.2413, 0.4246},
      {10, 1.2233, 2.2336}, {10, 0.4893, 1.2264}, {10, 0.2806, 0.7035}, {10, 0.1886, 0.3444},
      {12, 1.4367, 2.6784}, {12, 0.5666, 1.5242}, {12, 0.3192, 0.9477}, {12, 0.2143, 0.5764},
      {12, 0.1555, 0.2899},
      {14, 1.6512, 3.1183}, {14, 0.6452, 1.8120}, {14, 0.3587, 1.1746}, {14, 0.2378, 0.7787},
      {14, 0.1744, 0.4898}, {14, 0.1326, 0.2505},
  };
  return rows;
}

std::vector<cplx> table1_gammas(int L, bool mode_one) {
  std::vector<cplx> out;
  const double s = mode_one ? -1.0 : 1.0;
  for (const auto& r : table1())
    if (r.L == L) {
      out.emplace_back(s * r.re, r.im);
      out.emplace_back(s * r.re, -r.im);
    }
  return out;
}

}  // namespace xyep::verify
