#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "test_util.hpp"
#include "xyep/basis.hpp"
#include "xyep/ep.hpp"
#include "xyep/oracle.hpp"

using namespace xyep;
using chain::ChainSpec;

namespace {

CMat pauli(char which) {
  CMat m(2, 2);
  const cplx i(0.0, 1.0);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'm': m << 0, 0, 1, 0; break;  // bit 0 -> bit 1
    default: m = CMat::Identity(2, 2);
  }
  return m;
}

// Site 0 is the leftmost factor.
CMat on_sites(int L, const std::vector<std::pair<int, char>>& ops) {
  CMat out = CMat::Identity(1, 1);
  for (int s = 0; s < L; ++s) {
    char w = '1';
    for (auto [site, c] : ops)
      if (site == s) w = c;
    const CMat tmp = Eigen::kroneckerProduct(out, pauli(w)).eval();
    out = tmp;
  }
  return out;
}

CMat kron_hamiltonian(int L, cplx g) {
  const long dim = 1L << L;
  CMat H = CMat::Zero(dim, dim);
  for (int j = 0; j + 1 < L; ++j)
    H -= 0.5 * ((1.0 + g) / 2.0 * on_sites(L, {{j, 'x'}, {j + 1, 'x'}}) + (1.0 - g) / 2.0 * on_sites(L, {{j, 'y'}, {j + 1, 'y'}}));
  return H;
}

}  // namespace

TEST_CASE("spin Hamiltonian equals the Kronecker construction") {
  std::mt19937_64 rng(2);
  for (int L : {2, 4, 6}) {
    const cplx g = test::random_gamma(rng);
    CHECK((oracle::build_spin_hamiltonian(ChainSpec::make(L, g)).matrix - kron_hamiltonian(L, g)).norm() < 1e-14);
  }
  CHECK(test::error_kind([] { oracle::build_spin_hamiltonian(ChainSpec::make(14, 0.1)); }) == ErrorKind::SizeLimit);
}

TEST_CASE("Jordan-Wigner fermions") {
  const int L = 4;
  for (int j = 0; j < L; ++j) {
    std::vector<std::pair<int, char>> ops;
    for (int l = 0; l < j; ++l) ops.emplace_back(l, 'z');
    ops.emplace_back(j, 'm');
    CHECK((oracle::jw_annihilator(L, j) - on_sites(L, ops)).norm() < 1e-15);
  }
  const long dim = 1L << L;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      const CMat ci = oracle::jw_annihilator(L, i), cj = oracle::jw_annihilator(L, j);
      const CMat ac = ci * cj.adjoint() + cj.adjoint() * ci;
      CHECK((ac - (i == j ? 1.0 : 0.0) * CMat::Identity(dim, dim)).norm() < 1e-14);
      CHECK((ci * cj + cj * ci).norm() < 1e-14);
    }
}

TEST_CASE("H = 1/2 C^dag M C") {
  const int L = 4;
  const cplx g(0.35, -0.7);
  const auto qh = chain::build_quasi_hamiltonian(ChainSpec::make(L, g));
  std::vector<CMat> C, Cd;
  for (int j = 0; j < L; ++j) C.push_back(oracle::jw_annihilator(L, j));
  for (int j = 0; j < L; ++j) C.push_back(C[static_cast<size_t>(j)].adjoint());
  for (const auto& c : C) Cd.push_back(c.adjoint());
  CMat H = CMat::Zero(1L << L, 1L << L);
  for (int a = 0; a < 2 * L; ++a)
    for (int b = 0; b < 2 * L; ++b) H += 0.5 * qh.M(a, b) * Cd[static_cast<size_t>(a)] * C[static_cast<size_t>(b)];
  CHECK((H - kron_hamiltonian(L, g)).norm() < 1e-13);
}

TEST_CASE("ED agrees with the analytic spectrum") {
  std::mt19937_64 rng(9);
  for (int L : {2, 4, 6, 8}) {
    const auto spec = ChainSpec::make(L, test::random_gamma(rng));
    const auto H = oracle::build_spin_hamiltonian(spec);
    const auto ed = oracle::ed_eigen(H, L <= 6);
    CHECK(ed.backward_error < 1e-12);
    const auto mb = basis::many_body_energies(spec, chain::quasi_energies(spec).points);
    CHECK(test::multiset_distance(mb.energies(), ed.eigenvalues) < 1e-9);
    const auto m = oracle::match_spectra(mb.energies(), ed.eigenvalues);
    CHECK(m.max_distance < 1e-9);
    if (ed.has_vectors)
      for (long k = 0; k < ed.eigenvectors.cols(); ++k)
        CHECK((H.matrix * ed.eigenvectors.col(k) - ed.eigenvalues[static_cast<size_t>(k)] * ed.eigenvectors.col(k)).norm() <
              1e-10);
  }
}

TEST_CASE("L = 4 closed form") {
  const cplx g(0.45, 0.3);
  const auto cf = oracle::l4_closed_form(g);
  CHECK_FALSE(cf.limit_required);
  REQUIRE(cf.energies.size() == 16);
  const CMat H = kron_hamiltonian(4, g);
  Eigen::ComplexEigenSolver<CMat> es(H, false);
  std::vector<cplx> ref(es.eigenvalues().data(), es.eigenvalues().data() + 16);
  CHECK(test::multiset_distance(cf.energies, ref) < 1e-12);
  for (const auto& f : cf.families) CHECK((H * f.vector - f.energy * f.vector).norm() < 1e-12 * f.vector.norm());

  const auto xx = oracle::l4_closed_form(0.0);
  CHECK(xx.limit_required);
  CHECK(test::error_kind([] { oracle::l4_closed_form(0.0, true); }) == ErrorKind::LimitRequired);
}

TEST_CASE("multiplicities at the L = 4 EP") {
  ep::EPRecord rec;
  for (const auto& e : ep::locate_eps(4, chain::Mode::II))
    if (e.gamma_ep.imag() > 0) rec = e;
  const auto H = oracle::build_spin_hamiltonian(ChainSpec::make(4, rec.gamma_ep));
  const auto rep = oracle::geometric_multiplicities(H.matrix, oracle::ed_eigen(H, false).eigenvalues);
  CHECK(rep.geometric_total == 12);
  int algebraic = 0;
  for (const auto& l : rep.levels) algebraic += l.algebraic;
  CHECK(algebraic == 16);

  const auto dec = ep::jordan_decomposition(rec);
  const auto st = oracle::build_ep_states(dec, ep::ep_state_catalog(dec));
  CHECK(st.rank == 12);
  CHECK(st.omega1_null_dim == 1);
  CHECK(st.omega2_null_dim == 1);
  CHECK(st.max_residual < 1e-8);
}

TEST_CASE("match_spectra sizes") {
  CHECK(test::error_kind([] { oracle::match_spectra({1.0}, {1.0, 2.0}); }) == ErrorKind::CardinalityMismatch);
  const auto m = oracle::match_spectra({1.0, cplx(0, 2)}, {cplx(0, 2), 1.0 + 1e-12});
  CHECK(m.pairing == std::vector<int>{1, 0});
}
