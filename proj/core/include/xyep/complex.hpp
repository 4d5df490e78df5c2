#pragma once

#include <complex>

#include <Eigen/Dense>

namespace xyep {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

// Principal square root pinned to Re >= 0, ties broken towards Im >= 0.
inline cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

// Bilinear (unconjugated) dot product.
inline cplx bdot(const CVec& a, const CVec& b) { return (a.transpose() * b)(0, 0); }

}  // namespace xyep
