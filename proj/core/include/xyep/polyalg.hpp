#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "xyep/complex.hpp"

namespace xyep::polyalg {

using BigInt = boost::multiprecision::cpp_int;

// Ascending coefficients. The zero polynomial is stored as {0}.
struct DensePoly {
  std::vector<cplx> coeffs{cplx{0.0}};

  DensePoly() = default;
  explicit DensePoly(std::vector<cplx> c);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.size() == 1 && coeffs[0] == cplx{0.0}; }
  cplx operator[](int i) const { return coeffs[static_cast<size_t>(i)]; }
  double norm1() const;
};

DensePoly operator+(const DensePoly& a, const DensePoly& b);
DensePoly operator-(const DensePoly& a, const DensePoly& b);
DensePoly operator*(const DensePoly& a, const DensePoly& b);
DensePoly operator*(cplx s, const DensePoly& a);

// Exact univariate integer polynomial, ascending.
struct IntPoly {
  std::vector<BigInt> coeffs{BigInt(0)};

  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> c);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.size() == 1 && coeffs[0] == 0; }
  BigInt eval(const BigInt& z) const;
  // Homogenized value sum c_i num^i den^(deg-i); zero iff num/den is a root.
  BigInt eval_rational(const BigInt& num, const BigInt& den) const;
  DensePoly to_dense() const;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
// Exact division; throws DegenerateInput when b does not divide a.
IntPoly exact_div(const IntPoly& a, const IntPoly& b);

// coeffs[i][j] multiplies x^i lambda^j.
struct IntBivarPoly {
  std::vector<std::vector<BigInt>> coeffs;

  IntBivarPoly() = default;
  explicit IntBivarPoly(std::vector<std::vector<BigInt>> c);

  int degree_x() const { return static_cast<int>(coeffs.size()) - 1; }
  // Coefficient of x^i as a polynomial in lambda.
  IntPoly x_coeff(int i) const;
  IntBivarPoly derivative_x() const;
  // Substitute lambda and return a polynomial in x.
  DensePoly at_lambda(cplx lambda) const;
};

struct RootSet {
  std::vector<cplx> roots;
  std::vector<double> residuals;
};

struct RootCluster {
  cplx value;
  int multiplicity = 1;
};

DensePoly chebyshev_u_poly(int m);
IntPoly chebyshev_u_exact(int m);

cplx poly_eval(const DensePoly& p, cplx z);
DensePoly poly_derivative(const DensePoly& p);

// Backward error |p(r)| / (||p||_1 max(1,|r|)^deg).
double backward_error(const DensePoly& p, cplx r);

// Aberth-Ehrlich simultaneous iteration.
RootSet poly_roots(const DensePoly& p, double tol = 1e-12, int max_iter = 200);

// Roots closer than 1e-8 (1 + |r|) are merged.
std::vector<RootCluster> cluster_roots(const RootSet& rs, double rel = 1e-8);

// Sylvester resultant in x, fraction-free (Bareiss) over Z[lambda].
IntPoly resultant_eliminate_x(const IntBivarPoly& P, const IntBivarPoly& Q);

// U_n(x) - lambda U_{n-1}(x) with exact coefficients.
IntBivarPoly boundary_bivariate(int n);

}  // namespace xyep::polyalg
