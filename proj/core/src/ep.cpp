#include "xyep/ep.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "xyep/errors.hpp"

namespace xyep::ep {

using polyalg::DensePoly;

cplx gamma_of_lambda(cplx lambda) {
  if (std::abs(1.0 - lambda) < 1e-300) throw Error(ErrorKind::MapSingular, "lambda = 1 has no finite gamma");
  return (1.0 + lambda) / (1.0 - lambda);
}

cplx lambda_of_gamma(cplx gamma) {
  if (std::abs(1.0 + gamma) < 1e-300) throw Error(ErrorKind::MapSingular, "gamma = -1 has no finite lambda");
  return -(1.0 - gamma) / (1.0 + gamma);
}

polyalg::IntPoly ep_discriminant(int L) {
  if (L < 4 || L % 2 != 0) throw Error(ErrorKind::InvalidConfig, "EP search needs even L >= 4");
  const auto P = polyalg::boundary_bivariate(L / 2);
  return polyalg::resultant_eliminate_x(P, P.derivative_x());
}

namespace {

struct ChebSet {
  DensePoly un, um, dun, dum, ddun, ddum;
  explicit ChebSet(int n)
      : un(polyalg::chebyshev_u_poly(n)),
        um(polyalg::chebyshev_u_poly(n - 1)),
        dun(polyalg::poly_derivative(un)),
        dum(polyalg::poly_derivative(um)),
        ddun(polyalg::poly_derivative(dun)),
        ddum(polyalg::poly_derivative(dum)) {}
};

// Newton on (P, dP/dx) = 0 in the unknowns (x, mu).
void refine_double_root(const ChebSet& c, cplx& x, cplx& mu) {
  for (int it = 0; it < 30; ++it) {
    const cplx um = polyalg::poly_eval(c.um, x);
    const cplx dum = polyalg::poly_eval(c.dum, x);
    const cplx f1 = polyalg::poly_eval(c.un, x) - mu * um;
    const cplx f2 = polyalg::poly_eval(c.dun, x) - mu * dum;
    const cplx j11 = f2, j12 = -um;
    const cplx j21 = polyalg::poly_eval(c.ddun, x) - mu * polyalg::poly_eval(c.ddum, x), j22 = -dum;
    const cplx det = j11 * j22 - j12 * j21;
    if (std::abs(det) == 0.0) return;
    const cplx dx = (f1 * j22 - j12 * f2) / det;
    const cplx dmu = (j11 * f2 - j21 * f1) / det;
    x -= dx;
    mu -= dmu;
    if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(x)) && std::abs(dmu) <= 1e-16 * (1.0 + std::abs(mu))) return;
  }
}

double momentum_condition(int L, cplx x) {
  const cplx k = chain::momentum_of_x(x);
  const double a = L + 2.0, b = L;
  return std::abs(a * std::sin(b * k) * std::cos(a * k) - b * std::sin(a * k) * std::cos(b * k));
}

}  // namespace

std::vector<EPRecord> locate_eps(int L, Mode mode) {
  const int n = L / 2;
  const auto disc = ep_discriminant(L);
  const auto mus = polyalg::poly_roots(disc.to_dense(), 1e-10).roots;
  const ChebSet cheb(n);
  std::vector<EPRecord> out;
  for (cplx mu : mus) {
    const DensePoly P = cheb.un - mu * cheb.um;
    const DensePoly dP = polyalg::poly_derivative(P);
    cplx x{0.0};
    if (dP.degree() >= 1) {
      double best = INFINITY;
      for (cplx r : polyalg::poly_roots(dP, 1e-10).roots) {
        const double v = std::abs(polyalg::poly_eval(P, r));
        if (v < best) {
          best = v;
          x = r;
        }
      }
    }
    refine_double_root(cheb, x, mu);
    if (mode == Mode::II && std::abs(mu) < 1e-12) continue;
    const cplx lambda = mode == Mode::I ? mu : 1.0 / mu;
    if (std::abs(1.0 - lambda) < 1e-12) continue;

    EPRecord r;
    r.L = L;
    r.mode = mode;
    r.lambda_ep = lambda;
    r.gamma_ep = gamma_of_lambda(lambda);
    r.x_ep = x;
    const DensePoly Pr = cheb.un - mu * cheb.um;
    r.residuals.boundary = std::abs(polyalg::poly_eval(Pr, x));
    r.residuals.derivative = std::abs(polyalg::poly_eval(polyalg::poly_derivative(Pr), x));
    r.residuals.momentum = momentum_condition(L, x);
    const cplx g2 = r.gamma_ep * r.gamma_ep;
    r.epsilon_ep = principal_sqrt(((1.0 - g2) * x + 1.0 + g2) / 2.0);
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const EPRecord& a, const EPRecord& b) {
    const double ma = std::abs(a.gamma_ep), mb = std::abs(b.gamma_ep);
    if (std::abs(ma - mb) > 1e-9) return ma > mb;
    return a.gamma_ep.imag() > b.gamma_ep.imag();
  });
  return out;
}

std::vector<EPRecord> locate_all_eps(int L) {
  auto a = locate_eps(L, Mode::I);
  auto b = locate_eps(L, Mode::II);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<cplx> cross_family_collisions(int L) {
  if (L < 2 || L % 2 != 0) throw Error(ErrorKind::InvalidConfig, "L must be even and >= 2");
  const int n = L / 2;
  const auto un = polyalg::chebyshev_u_exact(n);
  const auto um = polyalg::chebyshev_u_exact(n - 1);
  using polyalg::BigInt;
  std::vector<std::vector<BigInt>> p(static_cast<size_t>(n + 1), {BigInt(0), BigInt(0)});
  std::vector<std::vector<BigInt>> q(static_cast<size_t>(n + 1), {BigInt(0), BigInt(0)});
  for (size_t i = 0; i < un.coeffs.size(); ++i) {
    p[i][0] += un.coeffs[i];
    q[i][1] += un.coeffs[i];
  }
  for (size_t i = 0; i < um.coeffs.size(); ++i) {
    p[i][1] -= um.coeffs[i];
    q[i][0] -= um.coeffs[i];
  }
  const auto res = polyalg::resultant_eliminate_x(polyalg::IntBivarPoly(p), polyalg::IntBivarPoly(q));
  if (res.degree() < 1) return {};
  return polyalg::poly_roots(res.to_dense(), 1e-10).roots;
}

double chain_identity_residual(const chain::ChainSpec& spec, cplx eps, const CVec& v, const CVec& w) {
  const auto qh = chain::build_quasi_hamiltonian(spec);
  const long n = qh.M.rows();
  return ((qh.M - eps * CMat::Identity(n, n)) * qh.S * w - qh.S * v).cwiseAbs().maxCoeff();
}

JordanChain generalized_eigenvector(const chain::ChainSpec& spec, const chain::ModeVector& seed) {
  const int L = spec.L;
  JordanChain jc;
  jc.block_sign = seed.point.sign;
  jc.epsilon = static_cast<double>(seed.point.sign) * seed.point.epsilon;
  CVec phi, psi, dphi, dpsi;
  chain::mode_vector_raw(spec, seed.point.mode, jc.epsilon, phi, psi, false);
  chain::mode_vector_raw(spec, seed.point.mode, jc.epsilon, dphi, dpsi, true);
  CVec v(2 * L), w(2 * L);
  v << phi, psi;
  w << dphi, dpsi;
  const cplx wv = bdot(w, v);
  if (std::abs(wv) < 1e-14 * w.norm() * v.norm())
    throw Error(ErrorKind::ChainResidualTooLarge, "derivative vector does not pair with the eigenvector");
  jc.beta = -bdot(w, w) / (2.0 * wv);
  w += jc.beta * v;
  const cplx c = 1.0 / principal_sqrt(bdot(w, v));
  v *= c;
  w *= c;
  jc.phi = v.head(L);
  jc.psi = v.tail(L);
  jc.phi_ker = w.head(L);
  jc.psi_ker = w.tail(L);
  jc.residual = chain_identity_residual(spec, jc.epsilon, v, w);
  if (!(jc.residual <= 1e-7))
    throw Error(ErrorKind::ChainResidualTooLarge, "chain identity residual " + std::to_string(jc.residual));
  return jc;
}

CVec kernel_route(const chain::ChainSpec& spec, const JordanChain& jc) {
  const auto qh = chain::build_quasi_hamiltonian(spec);
  const long n = qh.M.rows();
  CVec v(n);
  v << jc.phi, jc.psi;
  const CMat A = (qh.M - jc.epsilon * CMat::Identity(n, n)) * qh.S;
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(A);
  cod.setThreshold(1e-10);
  return cod.solve(qh.S * v);
}

namespace {

struct PairColumns {
  std::vector<CVec> cols;
  std::vector<cplx> eps;
  std::vector<EPColumn> labels;
};

void append_pairs(const chain::ChainSpec& spec, const CMat& S, Mode mode, std::vector<cplx> xs, PairColumns& out) {
  std::vector<chain::SpectralPoint> pts;
  for (cplx x : xs) pts.push_back({mode, chain::epsilon_of_x(spec, x), x, 0, 1});
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.epsilon.real() != b.epsilon.real()) return a.epsilon.real() > b.epsilon.real();
    return a.epsilon.imag() > b.epsilon.imag();
  });
  int branch = 1;
  for (auto& p : pts) {
    p.branch_index = branch;
    for (int sign : {1, -1}) {
      p.sign = sign;
      const auto mv = chain::mode_vector_poly(spec, p);
      CVec st(2 * spec.L);
      st << mv.phi, mv.psi;
      out.cols.push_back(S * st);
      out.eps.push_back(static_cast<double>(sign) * p.epsilon);
      out.labels.push_back({mode, branch, sign, false});
    }
    ++branch;
  }
}

int numerical_rank(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  const auto& s = svd.singularValues();
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++r;
  return r;
}

}  // namespace

JordanDecomposition jordan_decomposition(const EPRecord& record) {
  JordanDecomposition d;
  d.record = record;
  d.spec = chain::ChainSpec::make(record.L, record.gamma_ep);
  const auto& spec = d.spec;
  const int L = spec.L;
  const auto qh = chain::build_quasi_hamiltonian(spec);

  PairColumns pc;
  for (Mode mode : {Mode::I, Mode::II}) {
    auto xs = chain::boundary_roots(spec, mode);
    if (mode != record.mode) {
      append_pairs(spec, qh.S, mode, xs, pc);
      continue;
    }
    // drop the two roots that merge at x_ep
    std::sort(xs.begin(), xs.end(), [&](cplx a, cplx b) { return std::abs(a - record.x_ep) < std::abs(b - record.x_ep); });
    append_pairs(spec, qh.S, mode, std::vector<cplx>(xs.begin() + 2, xs.end()), pc);

    d.chain_column = static_cast<int>(pc.cols.size());
    for (int sign : {1, -1}) {
      chain::ModeVector seed;
      seed.point = {mode, record.epsilon_ep, record.x_ep, 0, sign};
      const auto jc = generalized_eigenvector(spec, seed);
      (sign > 0 ? d.plus : d.minus) = jc;
      CVec v(2 * L), w(2 * L);
      v << jc.phi, jc.psi;
      w << jc.phi_ker, jc.psi_ker;
      pc.cols.push_back(qh.S * v);
      pc.cols.push_back(qh.S * w);
      pc.eps.push_back(jc.epsilon);
      pc.eps.push_back(jc.epsilon);
      pc.labels.push_back({mode, 0, sign, false});
      pc.labels.push_back({mode, 0, sign, true});
    }
  }

  const int N = 2 * L;
  d.V.resize(N, N);
  d.J = CMat::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    d.V.col(k) = pc.cols[static_cast<size_t>(k)];
    d.J(k, k) = pc.eps[static_cast<size_t>(k)];
  }
  d.J(d.chain_column, d.chain_column + 1) = 1.0;
  d.J(d.chain_column + 2, d.chain_column + 3) = 1.0;
  d.jordan_blocks = 2;
  d.columns = pc.labels;

  d.residual = (qh.M * d.V - d.V * d.J).norm() / qh.M.norm();
  Eigen::JacobiSVD<CMat> svd(d.V);
  const auto& s = svd.singularValues();
  d.condition = s(0) / s(s.size() - 1);
  if (!(s(s.size() - 1) > 1e-12 * s(0))) throw Error(ErrorKind::SingularVEP, "V_EP is numerically singular");
  d.V_inv = d.V.partialPivLu().inverse();

  CMat G = CMat::Identity(N, N);
  for (int c : {d.chain_column, d.chain_column + 2}) {
    G(c, c) = G(c + 1, c + 1) = 0.0;
    G(c, c + 1) = G(c + 1, c) = 1.0;
  }
  d.gram_residual = (d.V.transpose() * d.V - G).cwiseAbs().maxCoeff();

  const CMat Me = qh.M - record.epsilon_ep * CMat::Identity(N, N);
  d.rank_minus_eps = numerical_rank(Me);
  d.rank_minus_eps_sq = numerical_rank(Me * Me);
  return d;
}

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::Minus: return "minus";
    case Sector::Zero: return "zero";
    case Sector::Plus: return "plus";
  }
  return "?";
}

EPStateCatalog ep_state_catalog(const JordanDecomposition& dec) {
  EPStateCatalog cat;
  cat.epsilon_ep = dec.plus.epsilon;
  cat.v_plus = dec.chain_column;
  cat.w_plus = dec.chain_column + 1;
  std::vector<cplx> eps;
  for (int k = 0; k < static_cast<int>(dec.columns.size()); ++k) {
    const auto& c = dec.columns[static_cast<size_t>(k)];
    if (c.branch > 0 && c.sign > 0) {
      cat.non_ep_columns.push_back(k);
      eps.push_back(dec.J(k, k));
    }
  }
  const int m = static_cast<int>(eps.size());
  for (std::uint32_t a = 0; a < (1u << m); ++a) {
    cplx base{0.0};
    for (int k = 0; k < m; ++k) base += ((a >> k) & 1u ? 0.5 : -0.5) * eps[static_cast<size_t>(k)];
    EPState minus{a, Sector::Minus, base - cat.epsilon_ep, true, false, 1, 1, false};
    EPState zero{a, Sector::Zero, base, true, true, 2, 1, false};
    EPState plus{a, Sector::Plus, base + cat.epsilon_ep, false, true, 1, 1, true};
    cat.states.push_back(minus);
    cat.states.push_back(zero);
    cat.states.push_back(plus);
  }
  cat.count = static_cast<int>(cat.states.size());
  return cat;
}

cplx ep_ground_energy(const JordanDecomposition& dec) {
  const auto cat = ep_state_catalog(dec);
  cplx best = cat.states.front().energy;
  for (const auto& s : cat.states)
    if (s.energy.real() < best.real()) best = s.energy;
  return best;
}

std::vector<cplx> chain_quasi_energies_dense(int L, cplx gamma) {
  CMat A = CMat::Zero(L, L), B = CMat::Zero(L, L);
  for (int i = 0; i + 1 < L; ++i) {
    A(i, i + 1) = A(i + 1, i) = 0.5;
    B(i, i + 1) = gamma / 2.0;
    B(i + 1, i) = -gamma / 2.0;
  }
  CMat M(2 * L, 2 * L);
  M << A, B, -B, -A;
  Eigen::ComplexEigenSolver<CMat> es(M, false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

double half_chain_separation(const EPRecord& rec) {
  const auto e = chain_quasi_energies_dense(rec.L / 2, rec.gamma_ep);
  double best = INFINITY;
  for (cplx v : e) best = std::min({best, std::abs(v - rec.epsilon_ep), std::abs(v + rec.epsilon_ep)});
  return best;
}

}  // namespace xyep::ep
