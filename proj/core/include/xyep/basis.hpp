#pragma once

#include <cstdint>
#include <vector>

#include "xyep/chain.hpp"

namespace xyep::basis {

struct ColumnLabel {
  chain::Mode mode = chain::Mode::I;
  int branch = 1;
  int sign = 1;
};

struct BiorthogonalBasis {
  CMat V, V_inv;
  std::vector<cplx> lambda_diag;
  std::vector<ColumnLabel> mode_order;
  double orthogonality_residual = 0.0;
  double diagonalization_residual = 0.0;  // ||MV - V Lambda|| / ||M||
};

// Operator X = sum_mu plus_mu (c_mu + c_mu^dag) + minus_mu (c_mu - c_mu^dag).
struct OperatorRow {
  CVec plus, minus;
};

enum class Family { R, Rstar, L, Lstar };

const char* family_name(Family f);

// Four families of L rows. R and L* carry mode I, R* and L carry mode II;
// row index i = 2(branch-1) + (sign < 0).
struct OperatorCoefficients {
  int L = 0;
  std::vector<OperatorRow> R, Rstar, Lop, Lstar;

  const std::vector<OperatorRow>& family(Family f) const;
};

using OccupationPattern = std::uint32_t;  // bit k: mode I branch k+1; bit L/2+k: mode II

struct ManyBodyEntry {
  OccupationPattern occupation = 0;
  cplx energy{0.0};
};

struct ManyBodySpectrum {
  int L = 0;
  std::vector<ManyBodyEntry> entries;
  std::vector<cplx> energies() const;
};

struct VacuumEnergy {
  cplx E0{0.0};      // sum of all principal quasi-energies
  cplx ground{0.0};  // -E0 / 2
};

struct PairingReport {
  int pairs = 0;
  bool all_matched = false;
  double max_residual = 0.0;
};

// Modes: the +eps mode vectors, L/2 per family in quasi_energies order.
BiorthogonalBasis assemble_basis(const chain::ChainSpec& spec, const std::vector<chain::ModeVector>& modes);

// quasi_energies -> mode_vector_poly -> assemble_basis.
BiorthogonalBasis basis_at(const chain::ChainSpec& spec);

// Operator rows from an arbitrary invertible V (also used at EPs).
OperatorRow r_type_row(const CMat& V_inv, int k);
OperatorRow l_type_row(const CMat& V, int k);

OperatorCoefficients operator_coefficients(const BiorthogonalBasis& b);

cplx anticommutator(const OperatorRow& a, const OperatorRow& b);
cplx anticommutator(const OperatorCoefficients& ops, Family fi, int i, Family fj, int j);
// Value the algebra predicts for the pair above.
cplx expected_anticommutator(Family fi, int i, Family fj, int j);

// Max |computed - expected| over every family pair and index.
double anticommutation_table_residual(const OperatorCoefficients& ops);

ManyBodySpectrum many_body_energies(const chain::ChainSpec& spec, const std::vector<chain::SpectralPoint>& points);

VacuumEnergy vacuum_energy(const std::vector<chain::SpectralPoint>& points);

PairingReport pairing_structure(const BiorthogonalBasis& b);

}  // namespace xyep::basis
