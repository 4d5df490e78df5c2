#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "xyep/errors.hpp"
#include "xyep/polyalg.hpp"

using namespace xyep;
using namespace xyep::polyalg;

TEST_CASE("chebyshev U matches sin((m+1)t)/sin t") {
  for (int m = 0; m <= 12; ++m) {
    const auto p = chebyshev_u_poly(m);
    CHECK(p.degree() == m);
    for (cplx t : {cplx(0.3, 0.1), cplx(1.1, -0.4), cplx(2.0, 0.7)}) {
      const cplx expect = std::sin(static_cast<double>(m + 1) * t) / std::sin(t);
      CHECK(std::abs(poly_eval(p, std::cos(t)) - expect) < 1e-10 * (1.0 + std::abs(expect)));
    }
    const auto exact = chebyshev_u_exact(m).to_dense();
    for (int i = 0; i <= m; ++i) CHECK(exact[i] == p[i]);
  }
  CHECK(chebyshev_u_poly(-1).is_zero());
  CHECK(chebyshev_u_exact(0).coeffs == std::vector<BigInt>{1});
}

TEST_CASE("Aberth recovers prescribed roots") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int deg : {1, 3, 7, 12}) {
    std::vector<cplx> r;
    DensePoly p({cplx{1.0}});
    for (int i = 0; i < deg; ++i) {
      r.emplace_back(n(rng), n(rng));
      p = p * DensePoly({-r.back(), cplx{1.0}});
    }
    const auto rs = poly_roots(p);
    REQUIRE(rs.roots.size() == static_cast<size_t>(deg));
    CHECK(test::multiset_distance(rs.roots, r) < 1e-9);
    for (cplx z : rs.roots) CHECK(backward_error(p, z) < 1e-12);
  }
}

TEST_CASE("exact zero roots are split off") {
  // z^2 (z - 1)(z + 2i)
  const DensePoly p = DensePoly({0.0, 0.0, cplx{1.0}}) * DensePoly({-1.0, 1.0}) * DensePoly({cplx(0, 2), 1.0});
  const auto rs = poly_roots(p);
  CHECK(test::multiset_distance(rs.roots, {0.0, 0.0, 1.0, cplx(0, -2)}) < 1e-12);
}

TEST_CASE("double roots cluster") {
  const DensePoly p = DensePoly({-1.0, 1.0}) * DensePoly({-1.0, 1.0}) * DensePoly({3.0, 1.0});
  const auto cl = cluster_roots(poly_roots(p), 1e-6);
  REQUIRE(cl.size() == 2);
  int twice = 0;
  for (const auto& c : cl)
    if (c.multiplicity == 2) {
      ++twice;
      CHECK(std::abs(c.value - 1.0) < 1e-7);
    }
  CHECK(twice == 1);
}

TEST_CASE("integer polynomial arithmetic") {
  const IntPoly a({3, -2, 5});
  const IntPoly b({-1, 4});
  CHECK(exact_div(a * b, b).coeffs == a.coeffs);
  CHECK_THROWS_AS(exact_div(a, IntPoly({1, 0, 0, 7})), Error);
  CHECK((a + b - b).coeffs == a.coeffs);
  CHECK(a.eval(2) == 3 - 4 + 20);
  // 2x - 1 vanishes at 1/2
  CHECK(IntPoly({-1, 2}).eval_rational(1, 2) == 0);
  CHECK(IntPoly({-1, 2}).eval_rational(1, 3) != 0);
}

namespace {

// Numeric Sylvester determinant, the oracle for the exact resultant.
cplx sylvester_det(const DensePoly& p, const DensePoly& q) {
  const int m = p.degree(), n = q.degree();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m + n, m + n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) S(r, r + i) = p[m - i];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) S(n + r, r + i) = q[n - i];
  return S.determinant();
}

}  // namespace

TEST_CASE("resultant agrees with the numeric Sylvester determinant") {
  SUBCASE("x - lambda against x^2 - 1") {
    const IntBivarPoly P({{0, -1}, {1}});
    const IntBivarPoly Q({{-1}, {0}, {1}});
    const auto res = resultant_eliminate_x(P, Q).to_dense();
    for (cplx lam : {cplx(0.3, 0.2), cplx(-1.5, 0.0), cplx(2.0, 1.0)})
      CHECK(std::abs(std::abs(poly_eval(res, lam)) - std::abs(lam * lam - 1.0)) < 1e-12);
  }
  SUBCASE("boundary polynomial discriminant") {
    for (int n : {2, 3, 4}) {
      const auto P = boundary_bivariate(n);
      const auto dP = P.derivative_x();
      const auto res = resultant_eliminate_x(P, dP).to_dense();
      for (cplx lam : {cplx(0.4, 0.3), cplx(-0.7, 1.1)}) {
        const cplx oracle = sylvester_det(P.at_lambda(lam), dP.at_lambda(lam));
        CHECK(std::abs(std::abs(poly_eval(res, lam)) - std::abs(oracle)) < 1e-9 * (1.0 + std::abs(oracle)));
      }
    }
  }
}

TEST_CASE("boundary bivariate is U_n - lambda U_{n-1}") {
  const auto P = boundary_bivariate(4);
  const cplx lam(0.2, -0.5), x(0.3, 0.4);
  const cplx expect = poly_eval(chebyshev_u_poly(4), x) - lam * poly_eval(chebyshev_u_poly(3), x);
  CHECK(std::abs(poly_eval(P.at_lambda(lam), x) - expect) < 1e-13);
}
