#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "test_util.hpp"
#include "xyep/ep.hpp"
#include "xyep/oracle.hpp"

using namespace xyep;
using chain::Mode;

namespace {

ep::EPRecord l4_mode_two() {
  for (const auto& e : ep::locate_eps(4, Mode::II))
    if (e.gamma_ep.imag() > 0) return e;
  FAIL("no mode II EP at L = 4");
  return {};
}

int numeric_rank(const CMat& m, double rel) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (long i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

}  // namespace

TEST_CASE("gamma <-> lambda") {
  CHECK(std::abs(ep::gamma_of_lambda(cplx(0, 0.5)) - cplx(0.6, 0.8)) < 1e-15);
  CHECK(std::abs(ep::lambda_of_gamma(cplx(0.6, 0.8)) - cplx(0, 0.5)) < 1e-15);
  CHECK(test::error_kind([] { ep::gamma_of_lambda(1.0); }) == ErrorKind::MapSingular);
  CHECK(test::error_kind([] { ep::ep_discriminant(2); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("L = 4 exceptional points") {
  const auto all = ep::locate_all_eps(4);
  REQUIRE(all.size() == 4);
  for (const auto& e : all) {
    CHECK(std::abs(std::abs(e.gamma_ep.real()) - 0.6) < 1e-12);
    CHECK(std::abs(std::abs(e.gamma_ep.imag()) - 0.8) < 1e-12);
    CHECK(e.residuals.boundary < 1e-12);
    CHECK(e.residuals.derivative < 1e-10);
  }
  const auto e = l4_mode_two();
  CHECK(std::abs(e.gamma_ep - cplx(0.6, 0.8)) < 1e-12);
  CHECK(std::abs(e.lambda_ep - cplx(0.0, 0.5)) < 1e-12);
  CHECK(std::abs(e.epsilon_ep - cplx(0.4, 0.2)) < 1e-12);
}

TEST_CASE("mode I EPs mirror mode II") {
  for (int L : {4, 6, 8}) {
    const auto one = ep::locate_eps(L, Mode::I);
    const auto two = ep::locate_eps(L, Mode::II);
    REQUIRE(one.size() == two.size());
    for (const auto& a : two) {
      double best = INFINITY;
      for (const auto& b : one) best = std::min(best, std::abs(b.gamma_ep + a.gamma_ep));
      CHECK(best < 1e-10);
    }
  }
}

TEST_CASE("M is defective at the EP") {
  for (int L : {4, 6}) {
    for (const auto& rec : ep::locate_all_eps(L)) {
      const auto spec = chain::ChainSpec::make(L, rec.gamma_ep);
      const CMat M = chain::build_quasi_hamiltonian(spec).M;
      const CMat shifted = M - rec.epsilon_ep * CMat::Identity(2 * L, 2 * L);
      CHECK(numeric_rank(shifted, 1e-9) == 2 * L - 1);
      CHECK(numeric_rank(shifted * shifted, 1e-9) == 2 * L - 2);
      // a dense solver sees a split pair of size ~sqrt(machine eps)
      Eigen::ComplexEigenSolver<CMat> es(M, false);
      int near = 0;
      for (long i = 0; i < es.eigenvalues().size(); ++i) near += std::abs(es.eigenvalues()(i) - rec.epsilon_ep) < 1e-5;
      CHECK(near == 2);
    }
  }
}

TEST_CASE("Jordan chains") {
  for (const auto& rec : ep::locate_all_eps(6)) {
    const auto dec = ep::jordan_decomposition(rec);
    const auto qh = chain::build_quasi_hamiltonian(dec.spec);
    const int L = dec.spec.L;
    for (const auto* jc : {&dec.plus, &dec.minus}) {
      CVec v(2 * L), w(2 * L);
      v << jc->phi, jc->psi;
      w << jc->phi_ker, jc->psi_ker;
      const CMat shifted = qh.M - jc->epsilon * CMat::Identity(2 * L, 2 * L);
      CHECK((shifted * (qh.S * v)).norm() < 1e-9);
      CHECK((shifted * (qh.S * w) - qh.S * v).norm() < 1e-9);
      CHECK(std::abs(bdot(v, v)) < 1e-9);
      CHECK(std::abs(bdot(w, v) - 1.0) < 1e-9);
      // minimum-norm kernel route differs from the derivative route by a multiple of v
      CVec diff = ep::kernel_route(dec.spec, *jc) - w;
      const cplx c = v.dot(diff) / v.squaredNorm();
      CHECK((diff - c * v).norm() < 1e-7 * (1.0 + w.norm()));
    }
    CHECK(dec.residual < 1e-9);
    CHECK(dec.jordan_blocks == 2);
    CHECK((qh.M * dec.V - dec.V * dec.J).norm() < 1e-9 * qh.M.norm());
  }
}

TEST_CASE("EP state catalog at L = 4") {
  const auto dec = ep::jordan_decomposition(l4_mode_two());
  const auto cat = ep::ep_state_catalog(dec);
  CHECK(cat.count == 12);
  int minus = 0, zero = 0, plus = 0;
  for (const auto& s : cat.states) {
    if (s.sector == ep::Sector::Minus) ++minus;
    if (s.sector == ep::Sector::Zero) {
      ++zero;
      CHECK(s.algebraic_multiplicity == 2);
      CHECK(s.geometric_multiplicity == 1);
    }
    if (s.sector == ep::Sector::Plus) {
      ++plus;
      CHECK(s.vanished_in_naive);
    }
  }
  CHECK(minus == 4);
  CHECK(zero == 4);
  CHECK(plus == 4);

  // ground energy against dense ED
  const auto ed = oracle::ed_eigen(oracle::build_spin_hamiltonian(dec.spec), false);
  cplx lowest = ed.eigenvalues.front();
  for (cplx e : ed.eigenvalues)
    if (e.real() < lowest.real()) lowest = e;
  CHECK(std::abs(ep::ep_ground_energy(dec) - lowest) < 1e-7);
  CHECK(std::abs(ep::ep_ground_energy(dec) - cplx(-1.1745966692, -0.5872983346)) < 1e-9);
}

TEST_CASE("half chain quasi-energies avoid the EP") {
  for (const auto& rec : ep::locate_all_eps(8)) CHECK(ep::half_chain_separation(rec) > 1e-3);
  const auto dense = ep::chain_quasi_energies_dense(3, 0.4);
  CHECK(dense.size() == 6);  // +-eps
}

TEST_CASE("cross-family collisions only at lambda = +-1") {
  for (cplx lam : ep::cross_family_collisions(4)) CHECK(std::min(std::abs(lam - 1.0), std::abs(lam + 1.0)) < 1e-6);  // multiple roots
}
