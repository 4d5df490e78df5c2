#include "xyep/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "xyep/basis.hpp"
#include "xyep/chain.hpp"
#include "xyep/ep.hpp"
#include "xyep/errors.hpp"
#include "xyep/oracle.hpp"
#include "xyep/topology.hpp"

namespace xyep::verify {

using chain::ChainSpec;
using chain::Mode;

bool SuiteResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* SuiteResult::worst() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return checks.empty() ? nullptr : &checks.front();
}

namespace {

void below(SuiteResult& r, const std::string& name, double value, double threshold) {
  r.checks.push_back({name, value < threshold, value, threshold});
}

void above(SuiteResult& r, const std::string& name, double value, double threshold) {
  r.checks.push_back({name, value > threshold, value, threshold});
}

void equal(SuiteResult& r, const std::string& name, double value, double expected) {
  r.checks.push_back({name, value == expected, value, expected});
}

void truth(SuiteResult& r, const std::string& name, bool ok) { r.checks.push_back({name, ok, ok ? 1.0 : 0.0, 1.0}); }

std::vector<cplx> analytic_spectrum(const ChainSpec& spec) {
  const auto qs = chain::quasi_energies(spec);
  return basis::many_body_energies(spec, qs.points).energies();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SuiteResult suite_ep_table(std::uint64_t) {
  SuiteResult r;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool counts = true;
  for (int L = 4; L <= 14; L += 2)
    for (bool one : {true, false}) {
      const auto recs = ep::locate_eps(L, one ? Mode::I : Mode::II);
      const auto ref = table1_gammas(L, one);
      if (recs.size() != ref.size()) counts = false;
      for (cplx g : ref) {
        double best = INFINITY;
        // the table carries 4 decimals, so the bound is per component
        for (const auto& e : recs)
          best = std::min(best, std::max(std::abs(e.gamma_ep.real() - g.real()), std::abs(e.gamma_ep.imag() - g.imag())));
        worst = std::max(worst, best);
      }
    }
  truth(r, "EP count per L and mode equals the table", counts);
  below(r, "max componentwise |dgamma| against the table", worst, 5e-5);
  below(r, "runtime seconds", seconds_since(t0), 30.0);
  return r;
}

SuiteResult suite_closed_form(std::uint64_t seed) {
  SuiteResult r;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const cplx g = sample_gamma(rng, 4, 1e-2);
    const auto cf = oracle::l4_closed_form(g);
    worst = std::max(worst, oracle::match_spectra(analytic_spectrum(ChainSpec::make(4, g)), cf.energies, 1e-10).max_distance);
  }
  below(r, "max multiset distance, 100 random gamma", worst, 1e-10);
  return r;
}

SuiteResult suite_oracle(std::uint64_t seed) {
  SuiteResult r;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed + 1);
  double worst = 0.0, backward = 0.0;
  for (int L : {2, 4, 6, 8})
    for (int s = 0; s < 25; ++s) {
      const auto spec = ChainSpec::make(L, sample_gamma(rng, L, 1e-2));
      const auto ed = oracle::ed_eigen(oracle::build_spin_hamiltonian(spec), false);
      double radius = 0.0;
      for (cplx e : ed.eigenvalues) radius = std::max(radius, std::abs(e));
      const auto m = oracle::match_spectra(analytic_spectrum(spec), ed.eigenvalues, 1e-8 * radius);
      worst = std::max(worst, m.max_distance / radius);
      backward = std::max(backward, ed.backward_error);
    }
  below(r, "max multiset distance / spectral radius", worst, 1e-8);
  below(r, "ED backward error / ||H||", backward, 1e-10);
  below(r, "runtime seconds", seconds_since(t0), 120.0);
  return r;
}

SuiteResult suite_mode_equations(std::uint64_t seed) {
  SuiteResult r;
  std::mt19937_64 rng(seed + 2);
  double worst = 0.0;
  for (int L = 2; L <= 14; L += 2)
    for (int s = 0; s < 10; ++s) {
      const auto spec = ChainSpec::make(L, sample_gamma(rng, L, 1e-2));
      const auto qh = chain::build_quasi_hamiltonian(spec);
      for (auto p : chain::quasi_energies(spec).points) {
        for (int sign : {1, -1}) {
          p.sign = sign;
          const auto mv = chain::mode_vector_poly(spec, p);
          const cplx e = static_cast<double>(sign) * p.epsilon;
          const double res = ((qh.A + qh.B) * mv.phi - e * mv.psi).norm() + ((qh.A - qh.B) * mv.psi - e * mv.phi).norm();
          worst = std::max(worst, res);
        }
      }
    }
  below(r, "max ||(A+B)phi - eps psi|| + ||(A-B)psi - eps phi||", worst, 1e-10);
  return r;
}

SuiteResult suite_anticommutation(std::uint64_t seed) {
  SuiteResult r;
  std::mt19937_64 rng(seed + 3);
  double coeff = 0.0;
  for (int L = 2; L <= 14; L += 2)
    for (int s = 0; s < 10; ++s) {
      const auto b = basis::basis_at(ChainSpec::make(L, sample_gamma(rng, L, 1e-2)));
      coeff = std::max(coeff, basis::anticommutation_table_residual(basis::operator_coefficients(b)));
    }
  below(r, "coefficient-level table residual, L <= 14", coeff, 1e-10);

  double matrix = 0.0;
  const basis::Family fams[] = {basis::Family::R, basis::Family::Rstar, basis::Family::L, basis::Family::Lstar};
  for (int L = 2; L <= 6; L += 2) {
    const auto ops = basis::operator_coefficients(basis::basis_at(ChainSpec::make(L, sample_gamma(rng, L, 1e-2))));
    std::vector<CMat> mats;
    std::vector<std::pair<basis::Family, int>> ids;
    for (auto f : fams)
      for (int i = 0; i < L; ++i) {
        mats.push_back(oracle::realize_operator(ops.family(f)[static_cast<size_t>(i)], L));
        ids.emplace_back(f, i);
      }
    const long dim = 1L << L;
    for (size_t a = 0; a < mats.size(); ++a)
      for (size_t b = 0; b < mats.size(); ++b) {
        const CMat ac = mats[a] * mats[b] + mats[b] * mats[a];
        const cplx scalar = basis::anticommutator(ops, ids[a].first, ids[a].second, ids[b].first, ids[b].second);
        matrix = std::max(matrix, (ac - scalar * CMat::Identity(dim, dim)).cwiseAbs().maxCoeff());
      }
  }
  below(r, "matrix-realized anticommutators vs coefficients, L <= 6", matrix, 1e-9);
  return r;
}

SuiteResult suite_diagonalization(std::uint64_t seed) {
  SuiteResult r;
  std::mt19937_64 rng(seed + 4);
  double worst = 0.0, inv = 0.0;
  for (int L = 2; L <= 12; L += 2)
    for (int s = 0; s < 5; ++s) {
      const auto spec = ChainSpec::make(L, sample_gamma(rng, L, 1e-2));
      const auto b = basis::basis_at(spec);
      const auto qh = chain::build_quasi_hamiltonian(spec);
      CVec lam = Eigen::Map<const CVec>(b.lambda_diag.data(), 2 * L);
      worst = std::max(worst, (qh.M - b.V * lam.asDiagonal() * b.V_inv).norm() / qh.M.norm());
      inv = std::max(inv, (b.V * b.V_inv - CMat::Identity(2 * L, 2 * L)).cwiseAbs().maxCoeff());
    }
  below(r, "||M - V Lambda V^-1|| / ||M||, L <= 12", worst, 1e-9);
  below(r, "||V V^-1 - I||_max", inv, 1e-10);
  return r;
}

SuiteResult suite_jordan(std::uint64_t) {
  SuiteResult r;
  double chain_res = 0.0, dec_res = 0.0, parity = 0.0;
  bool blocks = true;
  int count = 0;
  for (int L = 4; L <= 8; L += 2)
    for (const auto& rec : ep::locate_all_eps(L)) {
      const auto d = ep::jordan_decomposition(rec);
      ++count;
      chain_res = std::max({chain_res, d.plus.residual, d.minus.residual});
      dec_res = std::max(dec_res, d.residual);
      if (d.jordan_blocks != 2 || d.rank_minus_eps != 2 * L - 1 || d.rank_minus_eps_sq != 2 * L - 2) blocks = false;
      for (const auto* jc : {&d.plus, &d.minus})
        for (int i = 0; i < L; ++i) {
          if (jc->phi(i) == cplx{0.0}) parity = std::max(parity, std::abs(jc->phi_ker(i)));
          if (jc->psi(i) == cplx{0.0}) parity = std::max(parity, std::abs(jc->psi_ker(i)));
        }
    }
  equal(r, "EPs examined (L <= 8, both modes)", count, 24);
  below(r, "max chain identity residual", chain_res, 1e-8);
  below(r, "max ||M V - V J|| / ||M||", dec_res, 1e-8);
  truth(r, "exactly two 2x2 blocks at +-eps_EP", blocks);
  below(r, "max off-parity generalized component", parity, 1e-12);
  return r;
}

SuiteResult suite_ep_states(std::uint64_t) {
  SuiteResult r;
  ep::EPRecord rec;
  for (const auto& e : ep::locate_eps(4, Mode::II))
    if (std::abs(e.gamma_ep - cplx(0.6, 0.8)) < 1e-9) rec = e;
  const auto spec = ChainSpec::make(4, rec.gamma_ep);
  const auto H = oracle::build_spin_hamiltonian(spec);
  const auto ed = oracle::ed_eigen(H, false);
  const auto mult = oracle::geometric_multiplicities(H.matrix, ed.eigenvalues);
  equal(r, "ED geometric multiplicity sum", mult.geometric_total, 12);
  int defective = 0;
  for (const auto& lv : mult.levels)
    if (lv.algebraic == 2 && lv.geometric == 1) ++defective;
  equal(r, "levels with algebraic 2 / geometric 1", defective, 4);

  const auto dec = ep::jordan_decomposition(rec);
  const auto cat = ep::ep_state_catalog(dec);
  const auto built = oracle::build_ep_states(dec, cat);
  equal(r, "catalog count", cat.count, 12);
  equal(r, "rank of constructed states", built.rank, 12);
  equal(r, "overlap of the two vacuum families", built.overlap, 4);
  below(r, "max per-state residual", built.max_residual, 1e-8);
  return r;
}

SuiteResult suite_self_orthogonality(std::uint64_t) {
  SuiteResult r;
  ep::EPRecord rec;
  for (const auto& e : ep::locate_eps(4, Mode::II))
    if (std::abs(e.gamma_ep - cplx(0.6, 0.8)) < 1e-9) rec = e;
  topology::Selector sel{rec, 0};

  topology::GammaGrid at_ep{rec.gamma_ep.real(), rec.gamma_ep.real() + 0.2, rec.gamma_ep.imag(), rec.gamma_ep.imag(), 2, 2};
  const auto g = topology::overlap_grid(4, at_ep, sel);
  below(r, "|rigidity| at gamma_EP", g.at(0, 0).magnitude, 1e-6);
  above(r, "|rigidity| at gamma_EP + 0.2", g.at(1, 0).magnitude, 0.05);

  const auto cf = oracle::l4_closed_form(rec.gamma_ep);
  double closed = INFINITY;
  for (const auto& f : cf.families)
    if (f.name == "v1+") closed = std::abs(topology::phase_rigidity(f.vector));
  below(r, "|rigidity| of closed-form v1 at gamma_EP", closed, 1e-6);

  // Re gamma = 0.6, Im gamma in [0.6, 1.0]
  topology::GammaGrid line{0.6, 0.6, 0.6, 1.0, 2, 41};
  const auto scan = topology::overlap_grid(4, line, sel);
  int argmin = 0;
  for (int j = 0; j < 41; ++j)
    if (scan.at(0, j).magnitude < scan.at(0, argmin).magnitude) argmin = j;
  bool monotone = true;
  for (int j = 1; j <= argmin; ++j) monotone = monotone && scan.at(0, j).magnitude < scan.at(0, j - 1).magnitude;
  for (int j = argmin + 1; j < 41; ++j) monotone = monotone && scan.at(0, j).magnitude > scan.at(0, j - 1).magnitude;
  below(r, "line scan zero located at Im gamma = 0.8", std::abs(scan.at(0, argmin).gamma.imag() - 0.8), 1e-9);
  below(r, "line scan minimum", scan.at(0, argmin).magnitude, 1e-6);
  truth(r, "single zero with monotone flanks", monotone);
  return r;
}

SuiteResult suite_monodromy(std::uint64_t) {
  SuiteResult r;
  topology::LoopSpec loop{cplx(0.6, 0.8), 0.05, 256, 1, 1, 0.0};
  const auto once = topology::track_loop(4, loop);
  // labels: mode I 0,1; mode II 2,3
  truth(r, "encircling loop swaps the two mode-II labels", once.closed && once.permutation == std::vector<int>{0, 1, 3, 2});
  auto twice_spec = loop;
  twice_spec.turns = 2;
  const auto twice = topology::track_loop(4, twice_spec);
  truth(r, "double traversal is the identity", twice.closed && twice.permutation == std::vector<int>{0, 1, 2, 3});
  const auto free_loop = topology::track_loop(4, {cplx(1.5, 1.5), 0.05, 256, 1, 1, 0.0});
  truth(r, "EP-free loop is the identity", free_loop.closed && free_loop.permutation == std::vector<int>{0, 1, 2, 3});
  auto rev_spec = loop;
  rev_spec.orientation = -1;
  const auto rev = topology::track_loop(4, rev_spec);
  truth(r, "reversed loop gives the inverse permutation", rev.closed && rev.permutation == topology::inverse(once.permutation));
  // two loops through a common point: around the EP, then an EP-free detour
  topology::LoopSpec a{cplx(0.6, 0.8), 0.05, 256, 1, 1, 0.0};
  topology::LoopSpec b{cplx(0.75, 0.8), 0.1, 256, 1, 1, std::numbers::pi};
  const auto ab = topology::track_loops(4, {a, b});
  const auto pa = topology::track_loop(4, a), pb = topology::track_loop(4, b);
  truth(r, "concatenated loops compose", ab.closed && ab.permutation == topology::compose(pa.permutation, pb.permutation));
  return r;
}

SuiteResult suite_limits(std::uint64_t seed) {
  SuiteResult r;
  double worst = 0.0;
  for (int L = 2; L <= 14; L += 2) {
    const auto qs = chain::quasi_energies(ChainSpec::make(L, 0.0));
    std::vector<double> expect;
    for (int n = 1; n <= L / 2; ++n) expect.push_back(std::cos(n * std::numbers::pi / (L + 1)));
    for (const auto& p : qs.points) {
      const double e = expect[static_cast<size_t>(p.branch_index - 1)];
      worst = std::max(worst, std::abs(p.epsilon - e));
    }
  }
  below(r, "gamma = 0 quasi-energies vs cos(n pi/(L+1))", worst, 1e-12);

  std::mt19937_64 rng(seed + 5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double imag = 0.0;
  for (int L = 2; L <= 14; L += 2)
    for (int s = 0; s < 5; ++s) {
      double g;
      do g = u(rng);
      while (std::abs(std::abs(g) - 1.0) < 1e-2);
      const auto spec = ChainSpec::make(L, g);
      for (cplx e : analytic_spectrum(spec)) imag = std::max(imag, std::abs(e.imag()));
      if (L <= 8)
        for (cplx e : oracle::ed_eigen(oracle::build_spin_hamiltonian(spec), false).eigenvalues)
          imag = std::max(imag, std::abs(e.imag()));
    }
  below(r, "max |Im E| for real gamma (analytic and ED)", imag, 1e-10);
  return r;
}

SuiteResult suite_pt_circle(std::uint64_t) {
  SuiteResult r;
  double worst4 = 0.0, min6 = INFINITY;
  for (const auto& e : ep::locate_all_eps(4)) worst4 = std::max(worst4, std::abs(std::abs(e.gamma_ep) - 1.0));
  for (const auto& e : ep::locate_all_eps(6)) min6 = std::min(min6, std::abs(std::abs(e.gamma_ep) - 1.0));
  below(r, "L = 4: max ||gamma_EP| - 1|", worst4, 1e-9);
  above(r, "L = 6: min ||gamma_EP| - 1|", min6, 0.1);
  return r;
}

SuiteResult suite_branch_scaling(std::uint64_t) {
  SuiteResult r;
  double worst = 0.0;
  for (int L = 4; L <= 8; L += 2)
    for (const auto& e : ep::locate_all_eps(L)) {
      const auto rep = topology::branch_scaling_probe(L, e, topology::default_radii());
      worst = std::max(worst, std::abs(rep.exponent - 0.5));
    }
  below(r, "max |exponent - 0.5| over L <= 8 EPs", worst, 0.05);
  const auto ctrl = topology::crossing_scaling_probe(4, topology::default_radii());
  below(r, "gamma = 0 crossing control |exponent - 1|", std::abs(ctrl.exponent - 1.0), 0.05);
  return r;
}

struct SuiteDef {
  std::string title;
  std::function<SuiteResult(std::uint64_t)> fn;
};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> reg = {
      {"ep-table", {"EP table L = 4..14", suite_ep_table}},
      {"closed-form", {"L = 4 closed form", suite_closed_form}},
      {"oracle", {"oracle equivalence", suite_oracle}},
      {"mode-equations", {"mode equations", suite_mode_equations}},
      {"anticommutation", {"anticommutation suite", suite_anticommutation}},
      {"diagonalization", {"diagonalization", suite_diagonalization}},
      {"jordan", {"Jordan structure at EPs", suite_jordan}},
      {"ep-states", {"EP state counting", suite_ep_states}},
      {"self-orthogonality", {"self-orthogonality", suite_self_orthogonality}},
      {"monodromy", {"monodromy", suite_monodromy}},
      {"limits", {"Hermitian and limit sanity", suite_limits}},
      {"pt-circle", {"PT circle", suite_pt_circle}},
      {"branch-scaling", {"branch scaling", suite_branch_scaling}},
  };
  return reg;
}

}  // namespace

cplx sample_gamma(std::mt19937_64& rng, int L, double exclusion) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> avoid = {1.0, -1.0};
  if (L >= 4)
    for (const auto& e : ep::locate_all_eps(L)) avoid.push_back(e.gamma_ep);
  for (;;) {
    const cplx g = std::polar(2.0 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    bool ok = true;
    for (cplx a : avoid)
      if (std::abs(g - a) < exclusion) ok = false;
    if (ok) return g;
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "ep-table", "closed-form", "oracle", "mode-equations", "anticommutation", "diagonalization", "jordan",
      "ep-states", "self-orthogonality", "monodromy", "limits", "pt-circle", "branch-scaling"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorKind::InvalidConfig, "unknown suite '" + name + "'");
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    r = it->second.fn(seed);
  } catch (const Error& e) {
    r.checks.push_back({std::string("raised ") + e.what(), false, 0.0, 0.0});
  }
  r.name = name;
  r.title = it->second.title;
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace xyep::verify
