#include "xyep/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "xyep/errors.hpp"

namespace xyep::polyalg {

namespace {

template <class T>
void trim(std::vector<T>& c) {
  while (c.size() > 1 && c.back() == T(0)) c.pop_back();
  if (c.empty()) c.push_back(T(0));
}

}  // namespace

DensePoly::DensePoly(std::vector<cplx> c) : coeffs(std::move(c)) { trim(coeffs); }

double DensePoly::norm1() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::abs(c);
  return s;
}

DensePoly operator+(const DensePoly& a, const DensePoly& b) {
  std::vector<cplx> c(std::max(a.coeffs.size(), b.coeffs.size()), cplx{0.0});
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return DensePoly(std::move(c));
}

DensePoly operator-(const DensePoly& a, const DensePoly& b) { return a + cplx{-1.0} * b; }

DensePoly operator*(const DensePoly& a, const DensePoly& b) {
  std::vector<cplx> c(a.coeffs.size() + b.coeffs.size() - 1, cplx{0.0});
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return DensePoly(std::move(c));
}

DensePoly operator*(cplx s, const DensePoly& a) {
  std::vector<cplx> c = a.coeffs;
  for (auto& v : c) v *= s;
  return DensePoly(std::move(c));
}

IntPoly::IntPoly(std::vector<BigInt> c) : coeffs(std::move(c)) { trim(coeffs); }

BigInt IntPoly::eval(const BigInt& z) const {
  BigInt acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

BigInt IntPoly::eval_rational(const BigInt& num, const BigInt& den) const {
  BigInt acc = 0;
  BigInt dpow = 1;
  // sum c_i num^i den^(deg - i), built from the top coefficient down
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * num + *it * dpow;
    dpow *= den;
  }
  return acc;
}

DensePoly IntPoly::to_dense() const {
  std::vector<cplx> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.emplace_back(v.convert_to<double>(), 0.0);
  return DensePoly(std::move(c));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> c(std::max(a.coeffs.size(), b.coeffs.size()), BigInt(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> c(std::max(a.coeffs.size(), b.coeffs.size()), BigInt(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
  return IntPoly(std::move(c));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly{};
  std::vector<BigInt> c(a.coeffs.size() + b.coeffs.size() - 1, BigInt(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return IntPoly(std::move(c));
}

IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::DegenerateInput, "division by the zero polynomial");
  if (a.is_zero()) return IntPoly{};
  std::vector<BigInt> rem = a.coeffs;
  const int db = b.degree();
  const int da = a.degree();
  if (da < db) throw Error(ErrorKind::DegenerateInput, "inexact polynomial division");
  std::vector<BigInt> q(static_cast<size_t>(da - db + 1), BigInt(0));
  const BigInt& lead = b.coeffs.back();
  for (int k = da - db; k >= 0; --k) {
    const BigInt& top = rem[static_cast<size_t>(k + db)];
    if (top == 0) continue;
    BigInt qr;
    BigInt qk;
    boost::multiprecision::divide_qr(top, lead, qk, qr);
    if (qr != 0) throw Error(ErrorKind::DegenerateInput, "inexact polynomial division");
    q[static_cast<size_t>(k)] = qk;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k + j)] -= qk * b.coeffs[static_cast<size_t>(j)];
  }
  for (const auto& r : rem)
    if (r != 0) throw Error(ErrorKind::DegenerateInput, "inexact polynomial division");
  return IntPoly(std::move(q));
}

IntBivarPoly::IntBivarPoly(std::vector<std::vector<BigInt>> c) : coeffs(std::move(c)) {
  for (auto& row : coeffs) trim(row);
  while (coeffs.size() > 1 && coeffs.back().size() == 1 && coeffs.back()[0] == 0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back({BigInt(0)});
}

IntPoly IntBivarPoly::x_coeff(int i) const {
  if (i < 0 || i > degree_x()) return IntPoly{};
  return IntPoly(coeffs[static_cast<size_t>(i)]);
}

IntBivarPoly IntBivarPoly::derivative_x() const {
  if (degree_x() == 0) return IntBivarPoly({{BigInt(0)}});
  std::vector<std::vector<BigInt>> d;
  for (int i = 1; i <= degree_x(); ++i) {
    auto row = coeffs[static_cast<size_t>(i)];
    for (auto& v : row) v *= i;
    d.push_back(std::move(row));
  }
  return IntBivarPoly(std::move(d));
}

DensePoly IntBivarPoly::at_lambda(cplx lambda) const {
  std::vector<cplx> c;
  for (const auto& row : coeffs) {
    cplx acc{0.0};
    for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * lambda + it->convert_to<double>();
    c.push_back(acc);
  }
  return DensePoly(std::move(c));
}

DensePoly chebyshev_u_poly(int m) {
  if (m < -1) throw Error(ErrorKind::DegenerateInput, "chebyshev index below -1");
  return chebyshev_u_exact(m).to_dense();
}

IntPoly chebyshev_u_exact(int m) {
  if (m < -1) throw Error(ErrorKind::DegenerateInput, "chebyshev index below -1");
  if (m == -1) return IntPoly{};
  std::vector<BigInt> prev{BigInt(0)};
  std::vector<BigInt> cur{BigInt(1)};
  for (int k = 0; k < m; ++k) {
    std::vector<BigInt> next(cur.size() + 1, BigInt(0));
    for (size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return IntPoly(std::move(cur));
}

cplx poly_eval(const DensePoly& p, cplx z) {
  cplx acc{0.0};
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

DensePoly poly_derivative(const DensePoly& p) {
  if (p.degree() == 0) return DensePoly{};
  std::vector<cplx> d(p.coeffs.size() - 1);
  for (size_t i = 1; i < p.coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * p.coeffs[i];
  return DensePoly(std::move(d));
}

double backward_error(const DensePoly& p, cplx r) {
  const double scale = p.norm1() * std::pow(std::max(1.0, std::abs(r)), p.degree());
  if (scale == 0.0) return 0.0;
  return std::abs(poly_eval(p, r)) / scale;
}

RootSet poly_roots(const DensePoly& p, double tol, int max_iter) {
  if (p.degree() < 1) throw Error(ErrorKind::DegenerateInput, "poly_roots needs degree >= 1");
  for (const auto& c : p.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::DegenerateInput, "non-finite coefficient");

  RootSet out;
  // exact zero roots
  size_t nz = 0;
  while (p.coeffs[nz] == cplx{0.0}) ++nz;
  for (size_t i = 0; i < nz; ++i) out.roots.emplace_back(0.0, 0.0);

  std::vector<cplx> c(p.coeffs.begin() + static_cast<long>(nz), p.coeffs.end());
  const cplx lead = c.back();
  for (auto& v : c) v /= lead;
  DensePoly q(c);
  const int n = q.degree();

  if (n == 1) {
    out.roots.push_back(-q.coeffs[0]);
  } else if (n > 1) {
    double cauchy = 0.0;
    for (int i = 0; i < n; ++i) cauchy = std::max(cauchy, std::abs(q.coeffs[static_cast<size_t>(i)]));
    cauchy += 1.0;
    // geometric-mean radius keeps the start inside the Cauchy disc
    double r0 = std::pow(std::abs(q.coeffs[0]), 1.0 / n);
    r0 = std::clamp(r0, 1e-3 * cauchy, cauchy);
    std::vector<cplx> z(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
      z[static_cast<size_t>(k)] = std::polar(r0, 2.0 * std::numbers::pi * k / n + 0.4);

    const DensePoly dq = poly_derivative(q);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(static_cast<size_t>(n), false);
    for (int it = 0; it < max_iter; ++it) {
      bool all_done = true;
      for (int k = 0; k < n; ++k) {
        auto& zk = z[static_cast<size_t>(k)];
        if (done[static_cast<size_t>(k)]) continue;
        const cplx pv = poly_eval(q, zk);
        if (pv == cplx{0.0}) {
          done[static_cast<size_t>(k)] = true;
          continue;
        }
        const cplx ratio = pv / poly_eval(dq, zk);
        cplx sum{0.0};
        for (int j = 0; j < n; ++j)
          if (j != k) sum += 1.0 / (zk - z[static_cast<size_t>(j)]);
        const cplx w = ratio / (1.0 - ratio * sum);
        if (std::isfinite(w.real()) && std::isfinite(w.imag())) zk -= w;
        if (std::abs(w) <= 4.0 * eps * std::abs(zk) || backward_error(q, zk) <= eps)
          done[static_cast<size_t>(k)] = true;
        else
          all_done = false;
      }
      if (all_done) break;
    }
    out.roots.insert(out.roots.end(), z.begin(), z.end());
  }

  out.residuals.reserve(out.roots.size());
  for (const auto& r : out.roots) {
    const double be = backward_error(p, r);
    if (!(be <= tol))
      throw Error(ErrorKind::NonConvergence, "root finder residual above tolerance");
    out.residuals.push_back(be);
  }
  return out;
}

std::vector<RootCluster> cluster_roots(const RootSet& rs, double rel) {
  const size_t n = rs.roots.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(rs.roots[i] - rs.roots[j]) < rel * (1.0 + std::abs(rs.roots[i]))) parent[find(i)] = find(j);
  std::vector<RootCluster> out;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.push_back({rs.roots[i], 1});
    } else {
      auto& c = out[static_cast<size_t>(slot[r])];
      c.value += rs.roots[i];
      c.multiplicity += 1;
    }
  }
  for (auto& c : out) c.value /= static_cast<double>(c.multiplicity);
  return out;
}

IntPoly resultant_eliminate_x(const IntBivarPoly& P, const IntBivarPoly& Q) {
  const int m = P.degree_x();
  const int n = Q.degree_x();
  if (m < 1 || n < 1) throw Error(ErrorKind::DegenerateInput, "resultant needs x-degree >= 1");
  const int N = m + n;
  std::vector<std::vector<IntPoly>> S(static_cast<size_t>(N), std::vector<IntPoly>(static_cast<size_t>(N)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) S[static_cast<size_t>(i)][static_cast<size_t>(i + k)] = P.x_coeff(m - k);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) S[static_cast<size_t>(n + i)][static_cast<size_t>(i + k)] = Q.x_coeff(n - k);

  int sign = 1;
  IntPoly prev({BigInt(1)});
  for (int k = 0; k < N - 1; ++k) {
    auto ku = static_cast<size_t>(k);
    if (S[ku][ku].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (!S[static_cast<size_t>(i)][ku].is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) return IntPoly{};
      std::swap(S[ku], S[static_cast<size_t>(piv)]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      auto iu = static_cast<size_t>(i);
      for (int j = k + 1; j < N; ++j) {
        auto ju = static_cast<size_t>(j);
        S[iu][ju] = exact_div(S[iu][ju] * S[ku][ku] - S[iu][ku] * S[ku][ju], prev);
      }
      S[iu][ku] = IntPoly{};
    }
    prev = S[ku][ku];
  }
  IntPoly det = S[static_cast<size_t>(N - 1)][static_cast<size_t>(N - 1)];
  if (sign < 0) det = IntPoly{} - det;
  return det;
}

IntBivarPoly boundary_bivariate(int n) {
  if (n < 1) throw Error(ErrorKind::DegenerateInput, "boundary polynomial needs n >= 1");
  const IntPoly un = chebyshev_u_exact(n);
  const IntPoly um = chebyshev_u_exact(n - 1);
  std::vector<std::vector<BigInt>> c(static_cast<size_t>(n + 1), std::vector<BigInt>{BigInt(0), BigInt(0)});
  for (size_t i = 0; i < un.coeffs.size(); ++i) c[i][0] = un.coeffs[i];
  for (size_t i = 0; i < um.coeffs.size(); ++i) c[i][1] = -um.coeffs[i];
  return IntBivarPoly(std::move(c));
}

}  // namespace xyep::polyalg
