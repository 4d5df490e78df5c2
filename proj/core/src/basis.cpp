#include "xyep/basis.hpp"

#include <algorithm>
#include <cmath>

#include "xyep/errors.hpp"

namespace xyep::basis {

using chain::Mode;

const char* family_name(Family f) {
  switch (f) {
    case Family::R: return "R";
    case Family::Rstar: return "R*";
    case Family::L: return "L";
    case Family::Lstar: return "L*";
  }
  return "?";
}

const std::vector<OperatorRow>& OperatorCoefficients::family(Family f) const {
  switch (f) {
    case Family::R: return R;
    case Family::Rstar: return Rstar;
    case Family::L: return Lop;
    case Family::Lstar: return Lstar;
  }
  return R;
}

std::vector<cplx> ManyBodySpectrum::energies() const {
  std::vector<cplx> e;
  e.reserve(entries.size());
  for (const auto& x : entries) e.push_back(x.energy);
  return e;
}

BiorthogonalBasis assemble_basis(const chain::ChainSpec& spec, const std::vector<chain::ModeVector>& modes) {
  const int L = spec.L;
  if (static_cast<int>(modes.size()) != L)
    throw Error(ErrorKind::InvalidConfig, "assemble_basis needs L mode vectors");
  const auto qh = chain::build_quasi_hamiltonian(spec);
  BiorthogonalBasis b;
  b.V.resize(2 * L, 2 * L);
  int col = 0;
  for (const auto& mv : modes) {
    CVec stacked(2 * L);
    for (int sign : {1, -1}) {
      stacked << static_cast<double>(sign) * mv.phi, mv.psi;
      b.V.col(col++) = qh.S * stacked;
      b.lambda_diag.push_back(static_cast<double>(sign) * mv.point.epsilon);
      b.mode_order.push_back({mv.point.mode, mv.point.branch_index, sign});
    }
  }
  b.V_inv = b.V.transpose();
  b.orthogonality_residual = (b.V_inv * b.V - CMat::Identity(2 * L, 2 * L)).cwiseAbs().maxCoeff();
  if (b.orthogonality_residual > 1e-6)
    throw Error(ErrorKind::DefectiveBasis, "orthogonality residual " + std::to_string(b.orthogonality_residual));
  CVec lam = Eigen::Map<const CVec>(b.lambda_diag.data(), 2 * L);
  b.diagonalization_residual = (qh.M * b.V - b.V * lam.asDiagonal()).norm() / qh.M.norm();
  return b;
}

BiorthogonalBasis basis_at(const chain::ChainSpec& spec) {
  const auto qs = chain::quasi_energies(spec);
  std::vector<chain::ModeVector> modes;
  for (const auto& p : qs.points) modes.push_back(chain::mode_vector_poly(spec, p));
  return assemble_basis(spec, modes);
}

OperatorRow r_type_row(const CMat& V_inv, int k) {
  const long L = V_inv.cols() / 2;
  const CVec a = V_inv.row(k).head(L).transpose();
  const CVec b = V_inv.row(k).tail(L).transpose();
  return {(a + b) / 2.0, (a - b) / 2.0};
}

OperatorRow l_type_row(const CMat& V, int k) {
  const long L = V.rows() / 2;
  const CVec a = V.col(k).tail(L);
  const CVec b = V.col(k).head(L);
  return {(a + b) / 2.0, (a - b) / 2.0};
}

OperatorCoefficients operator_coefficients(const BiorthogonalBasis& b) {
  const int L = static_cast<int>(b.V.rows() / 2);
  OperatorCoefficients ops;
  ops.L = L;
  for (int k = 0; k < 2 * L; ++k) {
    const bool mode_one = b.mode_order[static_cast<size_t>(k)].mode == Mode::I;
    (mode_one ? ops.R : ops.Rstar).push_back(r_type_row(b.V_inv, k));
    (mode_one ? ops.Lstar : ops.Lop).push_back(l_type_row(b.V, k));
  }
  return ops;
}

cplx anticommutator(const OperatorRow& a, const OperatorRow& b) {
  return 2.0 * (bdot(a.plus, b.plus) - bdot(a.minus, b.minus));
}

cplx anticommutator(const OperatorCoefficients& ops, Family fi, int i, Family fj, int j) {
  return anticommutator(ops.family(fi).at(static_cast<size_t>(i)), ops.family(fj).at(static_cast<size_t>(j)));
}

namespace {

bool family_mode_one(Family f) { return f == Family::R || f == Family::Lstar; }
bool family_right(Family f) { return f == Family::R || f == Family::Rstar; }

}  // namespace

cplx expected_anticommutator(Family fi, int i, Family fj, int j) {
  if (family_mode_one(fi) != family_mode_one(fj)) return 0.0;
  if (family_right(fi) != family_right(fj)) return i == j ? 1.0 : 0.0;
  return (i != j && i / 2 == j / 2) ? -1.0 : 0.0;
}

double anticommutation_table_residual(const OperatorCoefficients& ops) {
  const Family all[] = {Family::R, Family::Rstar, Family::L, Family::Lstar};
  double worst = 0.0;
  for (Family fi : all)
    for (Family fj : all)
      for (int i = 0; i < ops.L; ++i)
        for (int j = 0; j < ops.L; ++j)
          worst = std::max(worst, std::abs(anticommutator(ops, fi, i, fj, j) - expected_anticommutator(fi, i, fj, j)));
  return worst;
}

ManyBodySpectrum many_body_energies(const chain::ChainSpec& spec, const std::vector<chain::SpectralPoint>& points) {
  const int L = spec.L;
  if (static_cast<int>(points.size()) != L)
    throw Error(ErrorKind::InvalidConfig, "many_body_energies needs L quasi-energies");
  if (L > 30) throw Error(ErrorKind::SizeLimit, "too many occupation patterns");
  ManyBodySpectrum out;
  out.L = L;
  const std::uint32_t count = 1u << L;
  out.entries.resize(count);
  for (std::uint32_t a = 0; a < count; ++a) {
    cplx e{0.0};
    for (int k = 0; k < L; ++k) e += ((a >> k) & 1u ? 1.0 : -1.0) * points[static_cast<size_t>(k)].epsilon;
    out.entries[a] = {a, 0.5 * e};
  }
  return out;
}

VacuumEnergy vacuum_energy(const std::vector<chain::SpectralPoint>& points) {
  VacuumEnergy v;
  for (const auto& p : points) v.E0 += p.epsilon;
  v.ground = -v.E0 / 2.0;
  return v;
}

PairingReport pairing_structure(const BiorthogonalBasis& b) {
  const long n = b.V.rows();
  const long L = n / 2;
  PairingReport r;
  CMat S(n, n);
  const CMat Id = CMat::Identity(L, L);
  S << Id, Id, Id, -Id;
  S /= std::sqrt(2.0);
  r.all_matched = true;
  for (long k = 0; k + 1 < n; k += 2) {
    const auto& lp = b.mode_order[static_cast<size_t>(k)];
    const auto& lm = b.mode_order[static_cast<size_t>(k + 1)];
    if (lp.sign != 1 || lm.sign != -1 || lp.mode != lm.mode || lp.branch != lm.branch) {
      r.all_matched = false;
      continue;
    }
    const CVec up = S * b.V.col(k);
    const CVec um = S * b.V.col(k + 1);
    double res = std::abs(b.lambda_diag[static_cast<size_t>(k)] + b.lambda_diag[static_cast<size_t>(k + 1)]);
    res = std::max(res, (up.head(L) + um.head(L)).cwiseAbs().maxCoeff());
    res = std::max(res, (up.tail(L) - um.tail(L)).cwiseAbs().maxCoeff());
    r.max_residual = std::max(r.max_residual, res);
    ++r.pairs;
  }
  if (r.max_residual > 1e-9) r.all_matched = false;
  return r;
}

}  // namespace xyep::basis
