#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "xyep/chain.hpp"
#include "xyep/errors.hpp"

using namespace xyep;
using chain::ChainSpec;
using chain::Mode;

using test::error_kind;

TEST_CASE("spec validation") {
  CHECK(error_kind([] { ChainSpec::make(3, 0.2); }) == ErrorKind::InvalidConfig);
  CHECK(error_kind([] { ChainSpec::make(0, 0.2); }) == ErrorKind::InvalidConfig);
  CHECK(error_kind([] { ChainSpec::make(4, -1.0); }) == ErrorKind::LambdaSingular);
  CHECK(error_kind([] { chain::boundary_polynomial(ChainSpec::make(4, 1.0), Mode::I); }) == ErrorKind::LambdaSingular);
  const auto s = ChainSpec::make(4, cplx(0.6, 0.8));
  CHECK(std::abs(s.lambda - cplx(0.0, 0.5)) < 1e-15);
}

TEST_CASE("quasi-Hamiltonian layout") {
  const cplx g(0.3, -0.2);
  const auto qh = chain::build_quasi_hamiltonian(ChainSpec::make(4, g));
  CHECK(qh.A(0, 1) == cplx(0.5));
  CHECK(qh.A(0, 2) == cplx(0.0));
  CHECK(qh.B(1, 2) == g / 2.0);
  CHECK(qh.B(2, 1) == -g / 2.0);
  CHECK((qh.M.topRightCorner(4, 4) - qh.B).norm() == 0.0);
  CHECK((qh.M.bottomRightCorner(4, 4) + qh.A).norm() == 0.0);
  CHECK((qh.S * qh.S - CMat::Identity(8, 8)).norm() < 1e-15);
}

TEST_CASE("L = 2 closed form") {
  const auto qs = chain::quasi_energies(ChainSpec::make(2, 0.3));
  REQUIRE(qs.points.size() == 2);
  CHECK(std::abs(qs.points[0].epsilon - 0.65) < 1e-14);
  CHECK(std::abs(qs.points[1].epsilon - 0.35) < 1e-14);
}

TEST_CASE("quasi-energies are the eigenvalues of M") {
  std::mt19937_64 rng(11);
  for (int L : {2, 4, 6, 8, 10, 12}) {
    const auto spec = ChainSpec::make(L, test::random_gamma(rng));
    const auto qs = chain::quasi_energies(spec);
    std::vector<cplx> ours;
    for (const auto& p : qs.points) {
      ours.push_back(p.epsilon);
      ours.push_back(-p.epsilon);
    }
    Eigen::ComplexEigenSolver<CMat> es(chain::build_quasi_hamiltonian(spec).M, false);
    std::vector<cplx> ref(es.eigenvalues().data(), es.eigenvalues().data() + 2 * L);
    CHECK(test::multiset_distance(ours, ref) < 1e-9);
  }
}

TEST_CASE("XX limit") {
  for (int L = 2; L <= 14; L += 2) {
    const auto qs = chain::quasi_energies(ChainSpec::make(L, 0.0));
    CHECK(qs.families_coincide);
    for (const auto& p : qs.points)
      CHECK(std::abs(p.epsilon - std::cos(p.branch_index * std::numbers::pi / (L + 1))) < 1e-12);
  }
}

TEST_CASE("x and eps maps invert each other") {
  const auto spec = ChainSpec::make(6, cplx(0.4, 0.9));
  for (cplx e : {cplx(0.7, 0.1), cplx(1.2, -0.3)}) CHECK(std::abs(chain::epsilon_of_x(spec, chain::x_of_epsilon(spec, e)) - e) < 1e-14);
}

TEST_CASE("mode vectors solve the mode equations and match the trig form") {
  std::mt19937_64 rng(5);
  for (int L : {4, 8, 14}) {
    const auto spec = ChainSpec::make(L, test::random_gamma(rng, 1.2));
    const auto qh = chain::build_quasi_hamiltonian(spec);
    for (auto p : chain::quasi_energies(spec).points) {
      const auto mv = chain::mode_vector_poly(spec, p);
      CHECK(((qh.A + qh.B) * mv.phi - p.epsilon * mv.psi).norm() < 1e-10);
      CHECK(((qh.A - qh.B) * mv.psi - p.epsilon * mv.phi).norm() < 1e-10);
      CHECK(std::abs(bdot(mv.phi, mv.phi) + bdot(mv.psi, mv.psi) - 1.0) < 1e-12);

      const cplx k = chain::momentum_of_x(p.x);
      CHECK(std::abs(chain::momentum_residual(spec, k, p.mode)) < 1e-8);
      const auto tv = chain::mode_vector_trig(spec, k, p.mode);
      const double same = (tv.phi - mv.phi).norm() + (tv.psi - mv.psi).norm();
      const double flipped = (tv.phi + mv.phi).norm() + (tv.psi + mv.psi).norm();
      CHECK(std::min(same, flipped) < 1e-8);
    }
  }
}

TEST_CASE("negative branch flips phi") {
  const auto spec = ChainSpec::make(4, cplx(0.2, 0.1));
  auto p = chain::quasi_energies(spec).points[0];
  const auto plus = chain::mode_vector_poly(spec, p);
  p.sign = -1;
  const auto minus = chain::mode_vector_poly(spec, p);
  CHECK((plus.phi + minus.phi).norm() < 1e-15);
  CHECK((plus.psi - minus.psi).norm() < 1e-15);
}

TEST_CASE("mode parity support") {
  // mode I puts phi on even sites (odd 0-based indices)
  const auto spec = ChainSpec::make(6, cplx(0.5, 0.5));
  for (const auto& p : chain::quasi_energies(spec).points) {
    const auto mv = chain::mode_vector_poly(spec, p);
    const CVec& even = p.mode == Mode::I ? mv.phi : mv.psi;
    const CVec& odd = p.mode == Mode::I ? mv.psi : mv.phi;
    for (int i = 0; i < 6; i += 2) CHECK(even(i) == cplx{0.0});
    for (int i = 1; i < 6; i += 2) CHECK(odd(i) == cplx{0.0});
  }
}

TEST_CASE("raw mode vector rejects eps = 0") {
  CVec phi, psi;
  CHECK(error_kind([&] { chain::mode_vector_raw(ChainSpec::make(4, 0.3), Mode::I, 0.0, phi, psi); }) == ErrorKind::EpsilonZero);
}
