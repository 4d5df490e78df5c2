#include "xyep/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xyep/errors.hpp"

namespace xyep::chain {

const char* mode_name(Mode m) { return m == Mode::I ? "I" : "II"; }

ChainSpec ChainSpec::make(int L, cplx gamma) {
  if (L < 2 || L % 2 != 0) throw Error(ErrorKind::InvalidConfig, "L must be even and >= 2");
  if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
    throw Error(ErrorKind::InvalidConfig, "gamma must be finite");
  if (1.0 + gamma == cplx{0.0}) throw Error(ErrorKind::LambdaSingular, "gamma = -1 leaves lambda undefined");
  ChainSpec s;
  s.L = L;
  s.gamma = gamma;
  s.lambda = -(1.0 - gamma) / (1.0 + gamma);
  return s;
}

QuasiHamiltonian build_quasi_hamiltonian(const ChainSpec& spec) {
  const int L = spec.L;
  QuasiHamiltonian q;
  q.A = CMat::Zero(L, L);
  q.B = CMat::Zero(L, L);
  for (int i = 0; i + 1 < L; ++i) {
    q.A(i, i + 1) = q.A(i + 1, i) = 0.5;
    q.B(i, i + 1) = spec.gamma / 2.0;
    q.B(i + 1, i) = -spec.gamma / 2.0;
  }
  q.M.resize(2 * L, 2 * L);
  q.M << q.A, q.B, -q.B, -q.A;
  const CMat Id = CMat::Identity(L, L);
  q.S.resize(2 * L, 2 * L);
  q.S << Id, Id, Id, -Id;
  q.S /= std::sqrt(2.0);
  return q;
}

namespace {

void check_regular(const ChainSpec& spec) {
  if (std::abs(1.0 - spec.gamma * spec.gamma) < 1e-14)
    throw Error(ErrorKind::LambdaSingular, "gamma = +-1: x(eps) is undefined");
}

cplx family_coupling(const ChainSpec& spec, Mode mode) {
  return mode == Mode::I ? spec.lambda : 1.0 / spec.lambda;
}

// U_{-1}..U_n at x, and optionally their x-derivatives.
template <class C>
void chebyshev_values(int n, C x, std::vector<C>& u, std::vector<C>* du) {
  using R = typename C::value_type;
  u.assign(static_cast<size_t>(n + 2), C{0});
  u[1] = 1;
  for (int m = 1; m <= n; ++m) u[static_cast<size_t>(m + 1)] = R(2) * x * u[static_cast<size_t>(m)] - u[static_cast<size_t>(m - 1)];
  if (du) {
    du->assign(static_cast<size_t>(n + 2), C{0});
    for (int m = 1; m <= n; ++m)
      (*du)[static_cast<size_t>(m + 1)] =
          R(2) * u[static_cast<size_t>(m)] + R(2) * x * (*du)[static_cast<size_t>(m)] - (*du)[static_cast<size_t>(m - 1)];
  }
}

}  // namespace

polyalg::DensePoly boundary_polynomial(const ChainSpec& spec, Mode mode) {
  check_regular(spec);
  const int n = spec.L / 2;
  const cplx c = family_coupling(spec, mode);
  return polyalg::chebyshev_u_poly(n) - c * polyalg::chebyshev_u_poly(n - 1);
}

cplx x_of_epsilon(const ChainSpec& spec, cplx eps) {
  const cplx g2 = spec.gamma * spec.gamma;
  return (2.0 * eps * eps - 1.0 - g2) / (1.0 - g2);
}

cplx epsilon_of_x(const ChainSpec& spec, cplx x) {
  const cplx g2 = spec.gamma * spec.gamma;
  return principal_sqrt(((1.0 - g2) * x + 1.0 + g2) / 2.0);
}

std::vector<cplx> boundary_roots(const ChainSpec& spec, Mode mode) {
  return polyalg::poly_roots(boundary_polynomial(spec, mode)).roots;
}

namespace {

// A numerically double root splits by ~sqrt(u ||P|| / |P''|); pairs closer than
// a few times that cannot be told apart from an EP in double precision.
double double_root_resolution(const polyalg::DensePoly& P, cplx mid) {
  const double u = std::numeric_limits<double>::epsilon();
  const double d2 = std::abs(polyalg::poly_eval(polyalg::poly_derivative(polyalg::poly_derivative(P)), mid));
  if (d2 == 0.0) return 0.0;
  const double scale = P.norm1() * std::pow(std::max(1.0, std::abs(mid)), P.degree());
  return 8.0 * std::sqrt(u * scale / d2);
}

// Below this |eps| the x route only fixes eps^2 to ~1e-16, so eps itself loses
// relative accuracy. The product of one mode's quasi-energies is known exactly
// (the sublattice block of A+B is bidiagonal), which pins a lone small eps.
constexpr double kSmallEps = 1e-2;

void repair_small_eps(const ChainSpec& spec, Mode mode, std::vector<SpectralPoint>& pts) {
  int small = -1, count = 0;
  for (size_t k = 0; k < pts.size(); ++k)
    if (std::abs(pts[k].epsilon) < kSmallEps) {
      small = static_cast<int>(k);
      ++count;
    }
  if (count != 1) return;
  const cplx diag = mode == Mode::I ? (1.0 + spec.gamma) / 2.0 : (1.0 - spec.gamma) / 2.0;
  cplx eps = std::pow(diag, spec.L / 2);
  for (size_t k = 0; k < pts.size(); ++k)
    if (static_cast<int>(k) != small) eps /= pts[k].epsilon;
  if (eps.real() < 0.0 || (eps.real() == 0.0 && eps.imag() < 0.0)) eps = -eps;
  auto& p = pts[static_cast<size_t>(small)];
  p.epsilon = eps;
  p.x = x_of_epsilon(spec, eps);
}

}  // namespace

QuasiSpectrum quasi_energies(const ChainSpec& spec) {
  check_regular(spec);
  QuasiSpectrum out;
  out.min_root_gap = INFINITY;
  for (Mode mode : {Mode::I, Mode::II}) {
    const auto P = boundary_polynomial(spec, mode);
    const auto xs = polyalg::poly_roots(P).roots;
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = i + 1; j < xs.size(); ++j) {
        const double gap = std::abs(xs[i] - xs[j]);
        out.min_root_gap = std::min(out.min_root_gap, gap);
        if (gap < 1e-8 || gap < double_root_resolution(P, 0.5 * (xs[i] + xs[j]))) out.near_ep = true;
      }
    std::vector<SpectralPoint> pts;
    for (const auto& x : xs) pts.push_back({mode, epsilon_of_x(spec, x), x, 0, 1});
    repair_small_eps(spec, mode, pts);
    std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
      if (a.epsilon.real() != b.epsilon.real()) return a.epsilon.real() > b.epsilon.real();
      return a.epsilon.imag() > b.epsilon.imag();
    });
    for (size_t k = 0; k < pts.size(); ++k) pts[k].branch_index = static_cast<int>(k) + 1;
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }
  out.families_coincide = std::abs(spec.gamma) < 1e-12;
  return out;
}

void mode_vector_raw(const ChainSpec& spec, Mode mode, cplx eps, CVec& phi, CVec& psi, bool derivative) {
  check_regular(spec);
  if (std::abs(eps) < 1e-12) throw Error(ErrorKind::EpsilonZero, "quasi-energy too close to zero");
  // extended precision: f / (2 eps) below cancels when eps is small
  using X = std::complex<long double>;
  const int L = spec.L;
  const int n = L / 2;
  const X g(spec.gamma), e(eps), one(1);
  const X x = (X(2) * e * e - one - g * g) / (one - g * g);
  const X dx = X(4) * e / (one - g * g);
  std::vector<X> u, du;
  chebyshev_values(n, x, u, &du);
  auto U = [&](int m) { return u[static_cast<size_t>(m + 1)]; };
  auto dU = [&](int m) { return du[static_cast<size_t>(m + 1)]; };

  const X p = mode == Mode::I ? one + g : one - g;
  const X q = mode == Mode::I ? one - g : one + g;
  phi = CVec::Zero(L);
  psi = CVec::Zero(L);
  CVec& even = mode == Mode::I ? phi : psi;
  CVec& odd = mode == Mode::I ? psi : phi;
  // site 2m sits at index 2m-1, site 2m+1 at index 2m
  for (int m = 1; m <= n; ++m) even(2 * m - 1) = cplx(derivative ? dU(m - 1) * dx : U(m - 1));
  for (int m = 0; m < n; ++m) {
    const X f = p * U(m) + q * U(m - 1);
    if (derivative) {
      const X fd = (p * dU(m) + q * dU(m - 1)) * dx;
      odd(2 * m) = cplx(fd / (X(2) * e) - f / (X(2) * e * e));
    } else {
      odd(2 * m) = cplx(f / (X(2) * e));
    }
  }
}

cplx boundary_overflow(const ChainSpec& spec, Mode mode, cplx eps) {
  const int n = spec.L / 2;
  const cplx g = spec.gamma;
  const cplx x = x_of_epsilon(spec, eps);
  std::vector<cplx> u;
  chebyshev_values<cplx>(n, x, u, nullptr);
  const cplx p = mode == Mode::I ? 1.0 + g : 1.0 - g;
  const cplx q = mode == Mode::I ? 1.0 - g : 1.0 + g;
  return (p * u[static_cast<size_t>(n + 1)] + q * u[static_cast<size_t>(n)]) / (2.0 * eps);
}

namespace {

cplx normalize(CVec& phi, CVec& psi) {
  const cplx nn = bdot(phi, phi) + bdot(psi, psi);
  const double scale = phi.squaredNorm() + psi.squaredNorm();
  if (std::abs(nn) < 1e-14 * scale)
    throw Error(ErrorKind::DefectiveBasis, "mode vector is self-orthogonal (exceptional point)");
  const cplx a = 1.0 / principal_sqrt(nn);
  phi *= a;
  psi *= a;
  return a;
}

}  // namespace

ModeVector mode_vector_poly(const ChainSpec& spec, const SpectralPoint& point) {
  ModeVector mv;
  mv.point = point;
  mode_vector_raw(spec, point.mode, point.epsilon, mv.phi, mv.psi);
  mv.norm_A = normalize(mv.phi, mv.psi);
  mv.delta = 1;
  if (point.sign < 0) mv.phi = -mv.phi;
  return mv;
}

ModeVector mode_vector_trig(const ChainSpec& spec, cplx k, Mode mode) {
  check_regular(spec);
  if (std::abs(std::sin(k)) < 1e-12) throw Error(ErrorKind::DegenerateMomentum, "sin k vanishes");
  const int L = spec.L;
  const int n = L / 2;
  const cplx g = spec.gamma;
  const cplx s = std::sin(k);
  const cplx eps = principal_sqrt(1.0 - (1.0 - g * g) * s * s);
  if (std::abs(eps) < 1e-12) throw Error(ErrorKind::EpsilonZero, "quasi-energy too close to zero");
  const cplx p = mode == Mode::I ? 1.0 + g : 1.0 - g;
  const cplx q = mode == Mode::I ? 1.0 - g : 1.0 + g;

  const auto qh = build_quasi_hamiltonian(spec);
  const CMat ApB = qh.A + qh.B;
  const CMat AmB = qh.A - qh.B;

  ModeVector best;
  double best_res = INFINITY;
  for (int delta : {1, -1}) {
    CVec phi = CVec::Zero(L), psi = CVec::Zero(L);
    CVec& even = mode == Mode::I ? phi : psi;
    CVec& odd = mode == Mode::I ? psi : phi;
    for (int m = 1; m <= n; ++m) even(2 * m - 1) = std::sin(2.0 * m * k);
    for (int m = 0; m < n; ++m)
      odd(2 * m) = static_cast<double>(delta) * (p * std::sin(2.0 * (m + 1) * k) + q * std::sin(2.0 * m * k)) / (2.0 * eps);
    const double res = mode == Mode::I ? (ApB * phi - eps * psi).norm() : (AmB * psi - eps * phi).norm();
    if (res < best_res) {
      best_res = res;
      best.phi = phi;
      best.psi = psi;
      best.delta = delta;
    }
  }
  best.norm_A = normalize(best.phi, best.psi);
  best.point = {mode, eps, std::cos(2.0 * k), 0, 1};
  return best;
}

cplx momentum_residual(const ChainSpec& spec, cplx k, Mode mode) {
  const int L = spec.L;
  const double guard = 1e-12;
  if (std::abs(std::cos(k)) < guard || std::abs(std::cos((L + 1.0) * k)) < guard || std::abs(std::sin(static_cast<double>(L) * k)) < guard)
    throw Error(ErrorKind::TrigSingular, "momentum equation singular at this k");
  return std::sin((L + 2.0) * k) / std::sin(static_cast<double>(L) * k) - family_coupling(spec, mode);
}

cplx momentum_of_x(cplx x) { return 0.5 * std::acos(x); }

}  // namespace xyep::chain
