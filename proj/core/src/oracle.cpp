#include "xyep/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "xyep/errors.hpp"

extern "C" {
// gfortran ABI, hidden character lengths last
void zgees_(const char* jobvs, const char* sort, void* select, const int* n, std::complex<double>* a, const int* lda,
            int* sdim, std::complex<double>* w, std::complex<double>* vs, const int* ldvs, std::complex<double>* work,
            const int* lwork, double* rwork, int* bwork, int* info, std::size_t, std::size_t);
void zgeev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a, const int* lda,
            std::complex<double>* w, std::complex<double>* vl, const int* ldvl, std::complex<double>* vr, const int* ldvr,
            std::complex<double>* work, const int* lwork, double* rwork, int* info, std::size_t, std::size_t);
}

namespace xyep::oracle {

namespace {

// Schur form A = U T U^H; A is overwritten with T.
void lapack_schur(CMat& A, CMat& U) {
  const int n = static_cast<int>(A.rows());
  U.resize(n, n);
  std::vector<cplx> w(static_cast<size_t>(n));
  std::vector<double> rwork(static_cast<size_t>(n));
  int sdim = 0, info = 0, lwork = -1;
  cplx query;
  zgees_("V", "N", nullptr, &n, A.data(), &n, &sdim, w.data(), U.data(), &n, &query, &lwork, rwork.data(), nullptr,
         &info, 1, 1);
  lwork = static_cast<int>(query.real());
  std::vector<cplx> work(static_cast<size_t>(lwork));
  zgees_("V", "N", nullptr, &n, A.data(), &n, &sdim, w.data(), U.data(), &n, work.data(), &lwork, rwork.data(), nullptr,
         &info, 1, 1);
  if (info != 0) throw Error(ErrorKind::NoConvergence, "zgees failed, info = " + std::to_string(info));
}

void lapack_eig(CMat A, std::vector<cplx>& w, CMat& vr) {
  const int n = static_cast<int>(A.rows());
  const int one = 1;
  w.assign(static_cast<size_t>(n), cplx{0.0});
  vr.resize(n, n);
  std::vector<double> rwork(static_cast<size_t>(2 * n));
  int info = 0, lwork = -1;
  cplx query, dummy;
  zgeev_("N", "V", &n, A.data(), &n, w.data(), &dummy, &one, vr.data(), &n, &query, &lwork, rwork.data(), &info, 1, 1);
  lwork = static_cast<int>(query.real());
  std::vector<cplx> work(static_cast<size_t>(lwork));
  zgeev_("N", "V", &n, A.data(), &n, w.data(), &dummy, &one, vr.data(), &n, work.data(), &lwork, rwork.data(), &info, 1,
         1);
  if (info != 0) throw Error(ErrorKind::NoConvergence, "zgeev failed, info = " + std::to_string(info));
}

}  // namespace

SpinHamiltonian build_spin_hamiltonian(const chain::ChainSpec& spec) {
  const int L = spec.L;
  if (L > 12) throw Error(ErrorKind::SizeLimit, "spin Hamiltonian limited to L <= 12");
  const long dim = 1L << L;
  SpinHamiltonian h;
  h.L = L;
  h.gamma = spec.gamma;
  h.matrix = CMat::Zero(dim, dim);
  const cplx same = -spec.gamma / 2.0;  // sx sx and sy sy add on aligned pairs
  const cplx diff = -0.5;
  for (long s = 0; s < dim; ++s) {
    for (int j = 0; j + 1 < L; ++j) {
      const int b1 = L - 1 - j, b2 = L - 2 - j;
      const long t = s ^ ((1L << b1) | (1L << b2));
      const bool aligned = ((s >> b1) & 1L) == ((s >> b2) & 1L);
      h.matrix(t, s) += aligned ? same : diff;
    }
  }
  return h;
}

EDResult ed_eigen(const SpinHamiltonian& H, bool want_vectors) {
  if (want_vectors && H.L > 10) throw Error(ErrorKind::SizeLimit, "eigenvectors limited to L <= 10");
  if (H.L > 12) throw Error(ErrorKind::SizeLimit, "ED limited to L <= 12");
  const double hn = H.matrix.norm();
  const long n = H.matrix.rows();
  EDResult r;
  if (want_vectors) {
    r.eigenvectors = CMat::Zero(n, n);
    r.has_vectors = true;
  }
  // every term flips two spins, so H is block diagonal in the popcount parity
  long col = 0;
  for (int parity : {0, 1}) {
    std::vector<long> idx;
    for (long s = 0; s < n; ++s)
      if (std::popcount(static_cast<unsigned long>(s)) % 2 == parity) idx.push_back(s);
    const long m = static_cast<long>(idx.size());
    CMat block(m, m);
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < m; ++j) block(i, j) = H.matrix(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);

    if (want_vectors) {
      std::vector<cplx> w;
      CMat vr;
      lapack_eig(block, w, vr);
      for (long k = 0; k < m; ++k, ++col) {
        r.eigenvalues.push_back(w[static_cast<size_t>(k)]);
        for (long i = 0; i < m; ++i) r.eigenvectors(idx[static_cast<size_t>(i)], col) = vr(i, k);
        const CVec v = r.eigenvectors.col(col);
        const double res = (H.matrix * v - w[static_cast<size_t>(k)] * v).norm() / v.norm();
        r.backward_error = std::max(r.backward_error, hn > 0 ? res / hn : res);
      }
    } else {
      CMat T = block, U;
      lapack_schur(T, U);
      for (long k = 0; k < m; ++k) r.eigenvalues.push_back(T(k, k));
      // random probes keep the residual estimate at matrix-vector cost
      std::mt19937_64 rng(12345 + static_cast<std::uint64_t>(parity));
      std::normal_distribution<double> nd;
      for (int p = 0; p < 3; ++p) {
        CVec x(m);
        for (long i = 0; i < m; ++i) x(i) = cplx(nd(rng), nd(rng));
        const double res = (block * (U * x) - U * (T * x)).norm() / x.norm();
        r.backward_error = std::max(r.backward_error, hn > 0 ? res / hn : res);
      }
    }
  }
  return r;
}

namespace {

CVec vec16(std::initializer_list<cplx> v) {
  CVec out(16);
  int i = 0;
  for (cplx x : v) out(i++) = x;
  return out;
}

}  // namespace

L4ClosedForm l4_closed_form(cplx gamma, bool strict) {
  L4ClosedForm cf;
  cf.gamma = gamma;
  auto dplus = [](cplx g) { return 5.0 * g * g + 6.0 * g + 5.0; };
  auto dminus = [](cplx g) { return 5.0 * g * g - 6.0 * g + 5.0; };
  cf.D_plus = dplus(gamma);
  cf.D_minus = dminus(gamma);
  const cplx sp = std::sqrt(cf.D_plus), sm = std::sqrt(cf.D_minus);
  const cplx g = gamma;
  cf.energies = {0.5, -0.5, g / 2.0, -g / 2.0};
  for (double s : {1.0, -1.0}) {
    cf.energies.push_back((1.0 - g + s * sm) / 4.0);
    cf.energies.push_back((g - 1.0 + s * sm) / 4.0);
    cf.energies.push_back(-(1.0 + g) / 4.0 + s * sp / 4.0);
    cf.energies.push_back((1.0 + g) / 4.0 + s * sp / 4.0);
    cf.energies.push_back(s * (sp + sm) / 4.0);
    cf.energies.push_back(s * (sp - sm) / 4.0);
  }

  const bool singular = std::abs(g - 1.0) < 1e-8 || std::abs(g + 1.0) < 1e-8 || std::abs(g) < 1e-8;
  if (singular) {
    if (strict) throw Error(ErrorKind::LimitRequired, "displayed eigenvector denominators vanish at this gamma");
    cf.limit_required = true;
    cf.vector_gamma = g + 1e-6 * cplx(1.0, 1.0) / std::sqrt(2.0);
  } else {
    cf.vector_gamma = g;
  }

  const cplx h = cf.vector_gamma;
  const cplx Dp = std::sqrt(dplus(h)), Dm = std::sqrt(dminus(h));
  auto& F = cf.families;
  F.push_back({"v_1/2", 0.5, vec16({0, 0, 0, -1, 0, 1, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0})});
  F.push_back({"v_-1/2", -0.5, vec16({0, 0, 0, -1, 0, -1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0})});
  F.push_back({"v_g/2", h / 2.0, vec16({-1, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 1})});
  F.push_back({"v_-g/2", -h / 2.0, vec16({-1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 1})});
  for (int si : {1, -1}) {
    const double s = si;
    const std::string tag = si > 0 ? "+" : "-";
    {
      const cplx E = (h - 1.0 + s * Dm) / 4.0;
      const cplx a = (h - 2.0 * E) / (h - 1.0), b = -a;
      F.push_back({"v1" + tag, E, vec16({0, -1, a, 0, a, 0, 0, 1, -1, 0, 0, b, 0, b, 1, 0})});
    }
    {
      const cplx E = (1.0 + h + s * Dp) / 4.0;
      const cplx a = (h - 2.0 * E) / (h + 1.0), b = -a;
      F.push_back({"v2" + tag, E, vec16({0, 1, a, 0, b, 0, 0, -1, -1, 0, 0, b, 0, a, 1, 0})});
    }
    {
      const cplx E = (1.0 - h + s * Dm) / 4.0;
      const cplx a = (-h - 2.0 * E) / (h - 1.0), b = (h + 2.0 * E) / (h - 1.0);
      F.push_back({"v3" + tag, E, vec16({0, -1, a, 0, b, 0, 0, -1, 1, 0, 0, a, 0, b, 1, 0})});
    }
    {
      const cplx E = -(1.0 + h + s * Dp) / 4.0;
      const cplx a = (-h - 2.0 * E) / (h + 1.0);
      F.push_back({"v4" + tag, E, vec16({0, 1, a, 0, a, 0, 0, 1, 1, 0, 0, a, 0, a, 1, 0})});
    }
    for (int eta : {1, -1}) {
      const cplx E = -(static_cast<double>(eta) * Dp + s * Dm) / 4.0;
      const cplx c = (4.0 * E * E * E - (5.0 * h * h + 8.0) * E) / (6.0 * h);
      const cplx d = -5.0 * h / 4.0 + E * E / h;
      const cplx e = (-4.0 * E * E * E + (5.0 * h * h + 2.0) * E) / (3.0 * h);
      F.push_back({std::string("v5") + (eta > 0 ? "+" : "-") + tag, E, vec16({1, 0, 0, c, 0, d, e, 0, 0, e, d, 0, c, 0, 0, 1})});
    }
  }
  return cf;
}

namespace {

double singular_threshold_rank(const CMat& A, double rel, Eigen::VectorXd* out = nullptr) {
  Eigen::VectorXd s;
  if (A.rows() <= 16 && A.cols() <= 16) {
    s = Eigen::JacobiSVD<CMat>(A).singularValues();
  } else {
    s = Eigen::BDCSVD<CMat>(A).singularValues();
  }
  if (out) *out = s;
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

}  // namespace

MultiplicityReport geometric_multiplicities(const CMat& H, const std::vector<cplx>& eigenvalues, double cluster_tol) {
  const size_t n = eigenvalues.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(eigenvalues[i] - eigenvalues[j]) < cluster_tol) parent[find(i)] = find(j);
  // gap guard: distinct clusters must sit well outside the tolerance
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (find(i) != find(j) && std::abs(eigenvalues[i] - eigenvalues[j]) < 10.0 * cluster_tol)
        throw Error(ErrorKind::ClusterAmbiguity, "eigenvalue gap comparable to the clustering tolerance");

  MultiplicityReport rep;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(rep.levels.size());
      rep.levels.push_back({eigenvalues[i], 1, 0});
    } else {
      auto& lv = rep.levels[static_cast<size_t>(slot[r])];
      lv.eigenvalue += eigenvalues[i];
      lv.algebraic += 1;
    }
  }
  const long dim = H.rows();
  for (auto& lv : rep.levels) {
    lv.eigenvalue /= static_cast<double>(lv.algebraic);
    const CMat A = H - lv.eigenvalue * CMat::Identity(dim, dim);
    lv.geometric = static_cast<int>(dim - singular_threshold_rank(A, 1e-8));
    rep.geometric_total += lv.geometric;
  }
  return rep;
}

CMat jw_annihilator(int L, int j) {
  const long dim = 1L << L;
  const int p = L - 1 - j;
  CMat c = CMat::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    if ((s >> p) & 1L) continue;
    const int parity = std::popcount(static_cast<unsigned long>(s >> (p + 1)));
    c(s | (1L << p), s) = (parity % 2) ? -1.0 : 1.0;
  }
  return c;
}

CMat realize_operator(const basis::OperatorRow& row, int L) {
  if (L > 8) throw Error(ErrorKind::SizeLimit, "operator realization limited to L <= 8");
  const long dim = 1L << L;
  CMat X = CMat::Zero(dim, dim);
  for (int mu = 0; mu < L; ++mu) {
    const CMat c = jw_annihilator(L, mu);
    const CMat cd = c.adjoint();
    X += row.plus(mu) * (c + cd) + row.minus(mu) * (c - cd);
  }
  return X;
}

namespace {

CVec null_vector(const std::vector<const CMat*>& ops, int& dim_out) {
  const long n = ops.front()->cols();
  CMat stacked(n * static_cast<long>(ops.size()), n);
  for (size_t i = 0; i < ops.size(); ++i) stacked.middleRows(static_cast<long>(i) * n, n) = *ops[i];
  Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++r;
  dim_out = static_cast<int>(n - r);
  if (dim_out < 1) throw Error(ErrorKind::VacuumNotFound, "annihilator set has no common null vector");
  return svd.matrixV().col(r);
}

}  // namespace

EPStateVerification build_ep_states(const ep::JordanDecomposition& dec, const ep::EPStateCatalog& catalog) {
  const int L = dec.spec.L;
  if (L > 6) throw Error(ErrorKind::SizeLimit, "EP state construction limited to L <= 6");
  const auto H = build_spin_hamiltonian(dec.spec).matrix;
  const int N = 2 * L;
  std::vector<CMat> R(static_cast<size_t>(N)), Lo(static_cast<size_t>(N));
  for (int k = 0; k < N; ++k) {
    R[static_cast<size_t>(k)] = realize_operator(basis::r_type_row(dec.V_inv, k), L);
    Lo[static_cast<size_t>(k)] = realize_operator(basis::l_type_row(dec.V, k), L);
  }
  const int v = catalog.v_plus, w = catalog.w_plus;
  std::vector<const CMat*> ann1, ann2;
  for (int k : catalog.non_ep_columns) {
    ann1.push_back(&R[static_cast<size_t>(k)]);
    ann2.push_back(&R[static_cast<size_t>(k)]);
  }
  ann1.push_back(&R[static_cast<size_t>(v)]);
  ann1.push_back(&R[static_cast<size_t>(w)]);
  ann2.push_back(&Lo[static_cast<size_t>(v)]);
  ann2.push_back(&Lo[static_cast<size_t>(w)]);

  EPStateVerification out;
  const CVec omega1 = null_vector(ann1, out.omega1_null_dim);
  const CVec omega2 = null_vector(ann2, out.omega2_null_dim);

  auto raise = [&](CVec s, std::uint32_t occ) {
    for (size_t k = 0; k < catalog.non_ep_columns.size(); ++k)
      if ((occ >> k) & 1u) s = Lo[static_cast<size_t>(catalog.non_ep_columns[k])] * s;
    return s;
  };
  auto record = [&](const ep::EPState& st, int vacuum, const CVec& psi) {
    EPStateRecord r;
    r.sector = st.sector;
    r.occupation = st.occupation;
    r.vacuum = vacuum;
    r.energy = st.energy;
    r.norm = psi.norm();
    r.residual = r.norm > 0 ? (H * psi - st.energy * psi).norm() / r.norm : INFINITY;
    r.state = r.norm > 0 ? CVec(psi / r.norm) : psi;
    out.max_residual = std::max(out.max_residual, r.residual);
    out.states.push_back(std::move(r));
  };

  for (const auto& st : catalog.states) {
    if (st.from_omega1) {
      CVec s = st.sector == ep::Sector::Zero ? CVec(Lo[static_cast<size_t>(v)] * omega1) : omega1;
      record(st, 1, raise(s, st.occupation));
    }
    if (st.from_omega2) {
      CVec s = st.sector == ep::Sector::Zero ? CVec(R[static_cast<size_t>(w)] * omega2) : omega2;
      record(st, 2, raise(s, st.occupation));
    }
  }

  CMat all(1L << L, static_cast<long>(out.states.size()));
  for (size_t i = 0; i < out.states.size(); ++i) all.col(static_cast<long>(i)) = out.states[i].state;
  out.rank = static_cast<int>(singular_threshold_rank(all, 1e-8));
  out.overlap = static_cast<int>(out.states.size()) - out.rank;

  // literal construction: both EP raisings on one vacuum
  const CVec naive = Lo[static_cast<size_t>(w)] * (Lo[static_cast<size_t>(v)] * omega1);
  out.naive_vanished_norm = naive.norm() / omega1.norm();
  return out;
}

SpectrumMatch match_spectra(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  if (a.size() != b.size()) throw Error(ErrorKind::CardinalityMismatch, "spectra differ in size");
  const size_t n = a.size();
  auto key = [](cplx z) { return std::make_pair(std::round(z.real() / 1e-9), z.imag()); };
  std::vector<int> ia(n), ib(n);
  std::iota(ia.begin(), ia.end(), 0);
  std::iota(ib.begin(), ib.end(), 0);
  std::sort(ia.begin(), ia.end(), [&](int x, int y) { return key(a[static_cast<size_t>(x)]) < key(a[static_cast<size_t>(y)]); });
  std::sort(ib.begin(), ib.end(), [&](int x, int y) { return key(b[static_cast<size_t>(x)]) < key(b[static_cast<size_t>(y)]); });
  SpectrumMatch m;
  m.pairing.assign(n, -1);
  for (size_t i = 0; i < n; ++i) {
    m.pairing[static_cast<size_t>(ia[i])] = ib[i];
    m.max_distance = std::max(m.max_distance, std::abs(a[static_cast<size_t>(ia[i])] - b[static_cast<size_t>(ib[i])]));
  }
  if (m.max_distance <= tol) return m;

  std::vector<bool> used(n, false);
  std::vector<int> gp(n, -1);
  double gmax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double best = INFINITY;
    int bj = -1;
    for (size_t j = 0; j < n; ++j)
      if (!used[j] && std::abs(a[i] - b[j]) < best) {
        best = std::abs(a[i] - b[j]);
        bj = static_cast<int>(j);
      }
    used[static_cast<size_t>(bj)] = true;
    gp[i] = bj;
    gmax = std::max(gmax, best);
  }
  if (gmax < m.max_distance) {
    m.max_distance = gmax;
    m.pairing = gp;
    m.greedy = true;
  }
  return m;
}

}  // namespace xyep::oracle
