#pragma once

#include <string>
#include <vector>

#include "xyep/basis.hpp"
#include "xyep/chain.hpp"
#include "xyep/ep.hpp"

namespace xyep::oracle {

struct SpinHamiltonian {
  int L = 0;
  cplx gamma{0.0};
  CMat matrix;
};

struct EDResult {
  std::vector<cplx> eigenvalues;
  CMat eigenvectors;  // empty unless requested
  bool has_vectors = false;
  double backward_error = 0.0;  // relative to ||H||
};

struct ClosedFormVector {
  std::string name;
  cplx energy;
  CVec vector;
};

struct L4ClosedForm {
  cplx gamma;
  cplx D_plus, D_minus;
  std::vector<cplx> energies;  // the sixteen values
  std::vector<ClosedFormVector> families;
  bool limit_required = false;
  cplx vector_gamma;  // gamma actually used for the eigenvector families
};

struct Multiplicity {
  cplx eigenvalue;
  int algebraic = 0;
  int geometric = 0;
};

struct MultiplicityReport {
  std::vector<Multiplicity> levels;
  int geometric_total = 0;
};

struct EPStateRecord {
  ep::Sector sector = ep::Sector::Zero;
  std::uint32_t occupation = 0;
  int vacuum = 1;  // 1 or 2
  cplx energy{0.0};
  double residual = 0.0;
  double norm = 0.0;
  CVec state;
};

struct EPStateVerification {
  std::vector<EPStateRecord> states;
  int omega1_null_dim = 0, omega2_null_dim = 0;
  int rank = 0;
  int overlap = 0;        // 2 * 2^(L-1) - rank
  double max_residual = 0.0;
  double naive_vanished_norm = 0.0;  // largest norm from the literal two-raising construction
};

struct SpectrumMatch {
  double max_distance = 0.0;
  std::vector<int> pairing;  // a[i] <-> b[pairing[i]]
  bool greedy = false;
};

SpinHamiltonian build_spin_hamiltonian(const chain::ChainSpec& spec);

EDResult ed_eigen(const SpinHamiltonian& H, bool want_vectors);

L4ClosedForm l4_closed_form(cplx gamma, bool strict = false);

MultiplicityReport geometric_multiplicities(const CMat& H, const std::vector<cplx>& eigenvalues, double cluster_tol = 1e-7);

// Jordan-Wigner annihilator c_j; site 0 is the most significant bit, bit 0 = up.
CMat jw_annihilator(int L, int j);

CMat realize_operator(const basis::OperatorRow& row, int L);

EPStateVerification build_ep_states(const ep::JordanDecomposition& dec, const ep::EPStateCatalog& catalog);

SpectrumMatch match_spectra(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol = 1e-8);

}  // namespace xyep::oracle
