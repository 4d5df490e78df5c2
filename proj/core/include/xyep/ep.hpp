#pragma once

#include <cstdint>
#include <vector>

#include "xyep/basis.hpp"
#include "xyep/chain.hpp"
#include "xyep/polyalg.hpp"

namespace xyep::ep {

using chain::Mode;

struct EPResiduals {
  double boundary = 0.0;    // |P(x_ep)|
  double derivative = 0.0;  // |dP/dx(x_ep)|
  double momentum = 0.0;    // (L+2) sin Lk cos(L+2)k - L sin(L+2)k cos Lk
};

struct EPRecord {
  int L = 0;
  Mode mode = Mode::I;
  cplx gamma_ep, lambda_ep, epsilon_ep, x_ep;
  EPResiduals residuals;
};

cplx gamma_of_lambda(cplx lambda);
cplx lambda_of_gamma(cplx gamma);

// Res_x(P, dP/dx) for P = U_{L/2}(x) - mu U_{L/2-1}(x), exact; mu is lambda
// for mode I and 1/lambda for mode II.
polyalg::IntPoly ep_discriminant(int L);

std::vector<EPRecord> locate_eps(int L, Mode mode);
std::vector<EPRecord> locate_all_eps(int L);

// lambda values where a mode-I root coincides with a mode-II root.
std::vector<cplx> cross_family_collisions(int L);

struct JordanChain {
  CVec phi, psi;          // eigenvector
  CVec phi_ker, psi_ker;  // generalized eigenvector
  cplx beta{0.0};         // w = d/deps v + beta v before the final rescale
  int block_sign = 1;
  cplx epsilon{0.0};      // block_sign * eps_ep
  double residual = 0.0;  // max |(M - eps) S w - S v|
};

// Derivative route. Gauge: w^T w = 0, then both vectors scaled so w^T v = 1.
JordanChain generalized_eigenvector(const chain::ChainSpec& spec, const chain::ModeVector& seed);

// Minimum-norm solution of (M - eps) S w = S v; returned stacked as [phi; psi].
CVec kernel_route(const chain::ChainSpec& spec, const JordanChain& jc);

double chain_identity_residual(const chain::ChainSpec& spec, cplx eps, const CVec& v, const CVec& w);

struct EPColumn {
  Mode mode = Mode::I;
  int branch = 0;  // 0 for the Jordan-chain columns
  int sign = 1;
  bool generalized = false;
};

struct JordanDecomposition {
  chain::ChainSpec spec;
  EPRecord record;
  CMat V, V_inv, J;
  std::vector<EPColumn> columns;
  int chain_column = 0;  // column of v+; layout v+, w+, v-, w-
  JordanChain plus, minus;
  double residual = 0.0;   // ||M V - V J||_F / ||M||_F
  double condition = 0.0;  // cond_2(V)
  double gram_residual = 0.0;  // V^T V against identity with swapped chain pairs
  int rank_minus_eps = 0;
  int rank_minus_eps_sq = 0;
  int jordan_blocks = 0;
};

JordanDecomposition jordan_decomposition(const EPRecord& record);

enum class Sector { Minus, Zero, Plus };
const char* sector_name(Sector s);

struct EPState {
  std::uint32_t occupation = 0;  // bits over the non-EP +eps columns
  Sector sector = Sector::Zero;
  cplx energy{0.0};
  bool from_omega1 = false;
  bool from_omega2 = false;
  int algebraic_multiplicity = 1;
  int geometric_multiplicity = 1;
  bool vanished_in_naive = false;
};

struct EPStateCatalog {
  std::vector<EPState> states;
  int count = 0;
  std::vector<int> non_ep_columns;  // +eps columns of V outside the chains
  int v_plus = 0, w_plus = 0;
  cplx epsilon_ep{0.0};
};

EPStateCatalog ep_state_catalog(const JordanDecomposition& dec);

cplx ep_ground_energy(const JordanDecomposition& dec);

// Quasi-energies of an open chain of any length (no parity restriction).
std::vector<cplx> chain_quasi_energies_dense(int L, cplx gamma);

// Distance from +-eps_ep to the quasi-energies of the L/2 chain at gamma_ep.
double half_chain_separation(const EPRecord& rec);

}  // namespace xyep::ep
