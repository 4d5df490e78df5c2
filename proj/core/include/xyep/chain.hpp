#pragma once

#include <vector>

#include "xyep/complex.hpp"
#include "xyep/polyalg.hpp"

namespace xyep::chain {

enum class Mode { I, II };

const char* mode_name(Mode m);

struct ChainSpec {
  int L = 2;
  cplx gamma{0.0};
  cplx lambda{-1.0};

  // Validates L even >= 2 and gamma != -1.
  static ChainSpec make(int L, cplx gamma);
};

struct QuasiHamiltonian {
  CMat A, B, M, S;
};

struct SpectralPoint {
  Mode mode = Mode::I;
  cplx epsilon{0.0};
  cplx x{0.0};
  int branch_index = 1;
  int sign = 1;
};

struct QuasiSpectrum {
  // Mode I branches 1..L/2 then mode II, each sorted by Re(eps) descending.
  std::vector<SpectralPoint> points;
  bool near_ep = false;
  bool families_coincide = false;
  double min_root_gap = 0.0;
};

struct ModeVector {
  CVec phi, psi;
  SpectralPoint point;
  cplx norm_A{1.0};
  int delta = 1;
};

QuasiHamiltonian build_quasi_hamiltonian(const ChainSpec& spec);

polyalg::DensePoly boundary_polynomial(const ChainSpec& spec, Mode mode);

cplx x_of_epsilon(const ChainSpec& spec, cplx eps);
cplx epsilon_of_x(const ChainSpec& spec, cplx x);

// x-roots of one family's boundary polynomial.
std::vector<cplx> boundary_roots(const ChainSpec& spec, Mode mode);

QuasiSpectrum quasi_energies(const ChainSpec& spec);

// Unnormalized polynomial-form (phi, psi) at an arbitrary eps; with
// derivative = true returns d/d eps of the same vectors.
void mode_vector_raw(const ChainSpec& spec, Mode mode, cplx eps, CVec& phi, CVec& psi, bool derivative = false);

ModeVector mode_vector_poly(const ChainSpec& spec, const SpectralPoint& point);

ModeVector mode_vector_trig(const ChainSpec& spec, cplx k, Mode mode);

cplx momentum_residual(const ChainSpec& spec, cplx k, Mode mode);

// Quasi-momentum from x = cos 2k.
cplx momentum_of_x(cplx x);

// Value of psi (mode I) or phi (mode II) continued to site L+1; vanishes on the spectrum.
cplx boundary_overflow(const ChainSpec& spec, Mode mode, cplx eps);

}  // namespace xyep::chain
