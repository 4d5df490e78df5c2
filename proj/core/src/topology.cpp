#include "xyep/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "xyep/errors.hpp"
#include "xyep/oracle.hpp"

namespace xyep::topology {

using chain::Mode;

cplx phase_rigidity(const CVec& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroVector, "phase rigidity of a zero vector");
  return bdot(v, v) / n2;
}

void GammaGrid::validate() const {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidConfig, "grid needs nx, ny >= 2");
  if (!(re_max >= re_min) || !(im_max >= im_min)) throw Error(ErrorKind::InvalidConfig, "grid bounds are reversed");
}

cplx GammaGrid::at(int i, int j) const {
  return {re_min + (re_max - re_min) * i / (nx - 1), im_min + (im_max - im_min) * j / (ny - 1)};
}

Selector default_selector(int L, cplx gamma) {
  const auto eps = ep::locate_all_eps(L);
  if (eps.empty()) throw Error(ErrorKind::InvalidConfig, "no EP available for this L");
  Selector s;
  s.ep = *std::min_element(eps.begin(), eps.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.gamma_ep - gamma) < std::abs(b.gamma_ep - gamma);
  });
  return s;
}

namespace {

template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, n); ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) f(i);
    });
  for (auto& th : pool) th.join();
}

bool near_pole(cplx g) { return std::abs(g - 1.0) < 1e-3 || std::abs(g + 1.0) < 1e-3; }

// Nearest-neighbour assignment; false when ambiguous or not a bijection.
bool match_roots(const std::vector<cplx>& prev, const std::vector<cplx>& next, std::vector<cplx>& out, double& max_d) {
  const size_t n = prev.size();
  out.assign(n, cplx{0.0});
  std::vector<bool> used(n, false);
  bool ok = true;
  max_d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d1 = INFINITY, d2 = INFINITY;
    size_t j1 = 0;
    for (size_t j = 0; j < n; ++j) {
      const double d = std::abs(prev[i] - next[j]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        j1 = j;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (n > 1 && d1 > 0.5 * d2) ok = false;
    if (used[j1]) ok = false;
    used[j1] = true;
    out[i] = next[j1];
    max_d = std::max(max_d, d1);
  }
  return ok;
}

std::vector<cplx> greedy_match(const std::vector<cplx>& prev, const std::vector<cplx>& next) {
  const size_t n = prev.size();
  std::vector<cplx> out(n);
  std::vector<bool> used(n, false);
  for (size_t i = 0; i < n; ++i) {
    size_t best = 0;
    double bd = INFINITY;
    for (size_t j = 0; j < n; ++j)
      if (!used[j] && std::abs(prev[i] - next[j]) < bd) {
        bd = std::abs(prev[i] - next[j]);
        best = j;
      }
    used[best] = true;
    out[i] = next[best];
  }
  return out;
}

std::vector<cplx> roots_at(int L, Mode mode, cplx g) {
  return chain::boundary_roots(chain::ChainSpec::make(L, g), mode);
}

std::vector<cplx> track_rec(int L, Mode mode, cplx ga, cplx gb, const std::vector<cplx>& roots, int depth,
                            int& refinements, double& max_step) {
  std::vector<cplx> out;
  double d = 0.0;
  if (match_roots(roots, roots_at(L, mode, gb), out, d)) {
    max_step = std::max(max_step, d);
    return out;
  }
  if (depth >= 12) throw Error(ErrorKind::AmbiguousContinuation, "root matching stayed ambiguous after 12 bisections");
  ++refinements;
  const cplx mid = 0.5 * (ga + gb);
  const auto half = track_rec(L, mode, ga, mid, roots, depth + 1, refinements, max_step);
  return track_rec(L, mode, mid, gb, half, depth + 1, refinements, max_step);
}

}  // namespace

std::vector<cplx> track_segment(int L, Mode mode, cplx ga, cplx gb, const std::vector<cplx>& roots, int& refinements,
                                double* max_step) {
  double ms = 0.0;
  auto out = track_rec(L, mode, ga, gb, roots, 0, refinements, ms);
  if (max_step) *max_step = ms;
  return out;
}

std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& second) {
  std::vector<int> out(first.size());
  for (size_t i = 0; i < first.size(); ++i) out[i] = second[static_cast<size_t>(first[i])];
  return out;
}

std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[static_cast<size_t>(p[i])] = static_cast<int>(i);
  return out;
}

namespace {

cplx loop_point(const LoopSpec& l, double t) {
  return l.center + std::polar(l.radius, l.start_angle + l.orientation * 2.0 * std::numbers::pi * t);
}

void check_loop(int L, const LoopSpec& l, const std::vector<ep::EPRecord>& eps) {
  if (l.steps < 16) throw Error(ErrorKind::InvalidConfig, "loops need at least 16 steps");
  if (!(l.radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "loop radius must be positive");
  if (l.turns < 1) throw Error(ErrorKind::InvalidConfig, "loop needs at least one turn");
  if (l.orientation != 1 && l.orientation != -1) throw Error(ErrorKind::InvalidConfig, "orientation must be +1 or -1");
  auto clearance = [&](cplx p) { return std::abs(std::abs(p - l.center) - l.radius); };
  for (cplx pole : {cplx{1.0}, cplx{-1.0}})
    if (clearance(pole) < l.radius / 10.0) throw Error(ErrorKind::InvalidConfig, "loop passes too close to gamma = +-1");
  for (const auto& e : eps)
    if (clearance(e.gamma_ep) < l.radius / 10.0)
      throw Error(ErrorKind::InvalidConfig, "loop passes closer than radius/10 to an EP");
  (void)L;
}

}  // namespace

LoopResult track_loops(int L, const std::vector<LoopSpec>& loops) {
  if (loops.empty()) throw Error(ErrorKind::InvalidConfig, "no loop given");
  const auto eps = L >= 4 ? ep::locate_all_eps(L) : std::vector<ep::EPRecord>{};
  for (const auto& l : loops) check_loop(L, l, eps);
  const cplx start = loop_point(loops.front(), 0.0);
  for (const auto& l : loops)
    if (std::abs(loop_point(l, 0.0) - start) > 1e-12) throw Error(ErrorKind::InvalidConfig, "loops do not share a start point");

  const auto spec0 = chain::ChainSpec::make(L, start);
  const auto qs = chain::quasi_energies(spec0);
  const int half = L / 2;
  std::vector<cplx> init[2];
  for (const auto& p : qs.points) init[p.mode == Mode::I ? 0 : 1].push_back(p.x);

  LoopResult res;
  std::vector<cplx> cur[2] = {init[0], init[1]};
  for (const auto& l : loops) {
    const int total = l.steps * l.turns;
    cplx prev = loop_point(l, 0.0);
    for (int s = 1; s <= total; ++s) {
      const cplx g = loop_point(l, static_cast<double>(s) / l.steps);
      double step = 0.0;
      for (int m = 0; m < 2; ++m) {
        double ms = 0.0;
        cur[m] = track_segment(L, m == 0 ? Mode::I : Mode::II, prev, g, cur[m], res.refinements, &ms);
        step = std::max(step, ms);
      }
      res.step_distances.push_back(step);
      prev = g;
    }
  }

  res.permutation.assign(static_cast<size_t>(L), -1);
  res.closed = true;
  std::vector<bool> hit(static_cast<size_t>(L), false);
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < half; ++i) {
      int best = 0;
      double bd = INFINITY;
      for (int j = 0; j < half; ++j) {
        const double d = std::abs(cur[m][static_cast<size_t>(i)] - init[m][static_cast<size_t>(j)]);
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      const int label = m * half + best;
      if (bd > 1e-6 * (1.0 + std::abs(init[m][static_cast<size_t>(best)])) || hit[static_cast<size_t>(label)]) res.closed = false;
      hit[static_cast<size_t>(label)] = true;
      res.permutation[static_cast<size_t>(m * half + i)] = label;
    }
  return res;
}

LoopResult track_loop(int L, const LoopSpec& loop) { return track_loops(L, {loop}); }

namespace {

struct TrackedGrid {
  std::vector<cplx> x0, x1;     // the selected pair, labels 0 and 1
  std::vector<cplx> rest_sum;   // sum of the other principal quasi-energies
  std::vector<bool> pole;
  int fallback = 0;
};

TrackedGrid track_grid(int L, const GammaGrid& grid, const Selector& sel) {
  grid.validate();
  if (L > 8) throw Error(ErrorKind::SizeLimit, "overlap maps limited to L <= 8");
  if (sel.ep.L != L) throw Error(ErrorKind::InvalidConfig, "selector EP belongs to a different L");
  const Mode m = sel.ep.mode;
  const Mode other = m == Mode::I ? Mode::II : Mode::I;

  const cplx gs = sel.ep.gamma_ep + 1e-3;
  std::vector<cplx> roots = roots_at(L, m, gs);
  std::sort(roots.begin(), roots.end(), [&](cplx a, cplx b) { return std::abs(a - sel.ep.x_ep) < std::abs(b - sel.ep.x_ep); });
  if (roots.size() >= 2 && (roots[0].real() < roots[1].real() || (roots[0].real() == roots[1].real() && roots[0].imag() < roots[1].imag())))
    std::swap(roots[0], roots[1]);

  TrackedGrid tg;
  const size_t ncell = static_cast<size_t>(grid.nx * grid.ny);
  tg.x0.assign(ncell, cplx{NAN, NAN});
  tg.x1.assign(ncell, cplx{NAN, NAN});
  tg.rest_sum.assign(ncell, cplx{NAN, NAN});
  tg.pole.assign(ncell, false);

  cplx g_prev = gs;
  int refinements = 0;
  auto step = [&](std::vector<cplx>& r, cplx from, cplx to) {
    try {
      r = track_segment(L, m, from, to, r, refinements);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AmbiguousContinuation) throw;
      r = greedy_match(r, roots_at(L, m, to));
      ++tg.fallback;
    }
  };
  // x(lambda) is regular at gamma = +-1, so the side of the detour does not matter
  auto advance = [&](std::vector<cplx>& r, cplx from, cplx to) {
    for (cplx pole : {cplx{1.0}, cplx{-1.0}}) {
      const cplx d = to - from;
      const double t = std::clamp(((pole - from) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
      if (std::abs(from + t * d - pole) < 2e-3) {
        const cplx via = pole + 0.05 * cplx(0.0, 1.0) * d / std::abs(d);
        step(r, from, via);
        step(r, via, to);
        return;
      }
    }
    step(r, from, to);
  };
  auto visit = [&](std::vector<cplx>& r, cplx& from, int i, int j) {
    const cplx g = grid.at(i, j);
    const size_t c = static_cast<size_t>(j * grid.nx + i);
    if (near_pole(g)) {
      tg.pole[c] = true;
      return;
    }
    advance(r, from, g);
    from = g;
    const auto spec = chain::ChainSpec::make(L, g);
    tg.x0[c] = r[0];
    tg.x1[c] = r[1];
    cplx sum{0.0};
    for (size_t k = 2; k < r.size(); ++k) sum += chain::epsilon_of_x(spec, r[k]);
    for (cplx x : chain::boundary_roots(spec, other)) sum += chain::epsilon_of_x(spec, x);
    tg.rest_sum[c] = sum;
  };

  std::vector<cplx> col = roots;
  cplx col_from = g_prev;
  for (int j = 0; j < grid.ny; ++j) {
    visit(col, col_from, 0, j);
    std::vector<cplx> row = col;
    cplx row_from = col_from;
    for (int i = 1; i < grid.nx; ++i) visit(row, row_from, i, j);
  }
  return tg;
}

OverlapGrid fill_samples(int L, const GammaGrid& grid, const TrackedGrid& tg, int member, int threads) {
  OverlapGrid og;
  og.grid = grid;
  og.fallback_steps = tg.fallback;
  og.samples.resize(tg.x0.size());
  parallel_for(static_cast<int>(tg.x0.size()), threads, [&](int c) {
    const int i = c % grid.nx, j = c / grid.nx;
    auto& s = og.samples[static_cast<size_t>(c)];
    s.gamma = grid.at(i, j);
    s.member = member;
    if (tg.pole[static_cast<size_t>(c)]) {
      s.pole = true;
      s.overlap = cplx{NAN, NAN};
      s.magnitude = NAN;
      return;
    }
    const auto spec = chain::ChainSpec::make(L, s.gamma);
    s.x_member = member == 0 ? tg.x0[static_cast<size_t>(c)] : tg.x1[static_cast<size_t>(c)];
    s.x_partner = member == 0 ? tg.x1[static_cast<size_t>(c)] : tg.x0[static_cast<size_t>(c)];
    s.energy = -0.5 * tg.rest_sum[static_cast<size_t>(c)] +
               0.5 * (chain::epsilon_of_x(spec, s.x_member) - chain::epsilon_of_x(spec, s.x_partner));
    const CMat H = oracle::build_spin_hamiltonian(spec).matrix;
    const long n = H.rows();
    const cplx shift = s.energy + 1e-12 * cplx(1.0, 1.0) * std::max(1.0, std::abs(s.energy));
    Eigen::PartialPivLU<CMat> lu(H - shift * CMat::Identity(n, n));
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    CVec v(n);
    for (long k = 0; k < n; ++k) v(k) = cplx(nd(rng), nd(rng));
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
    s.residual = (H * v - s.energy * v).norm();
    s.overlap = phase_rigidity(v);
    s.magnitude = std::abs(s.overlap);
  });
  return og;
}

}  // namespace

OverlapGrid overlap_grid(int L, const GammaGrid& grid, const Selector& selector, int threads) {
  const auto tg = track_grid(L, grid, selector);
  return fill_samples(L, grid, tg, selector.member, threads);
}

SheetDataset sheet_stitch(int L, const GammaGrid& grid, const Selector& selector, int threads) {
  const auto tg = track_grid(L, grid, selector);
  SheetDataset ds;
  ds.sheet0 = fill_samples(L, grid, tg, 0, threads);
  ds.sheet1 = fill_samples(L, grid, tg, 1, threads);
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const size_t a = static_cast<size_t>(j * grid.nx + i), b = a + static_cast<size_t>(grid.nx);
      if (tg.pole[a] || tg.pole[b]) continue;
      const double keep = std::abs(tg.x0[a] - tg.x0[b]) + std::abs(tg.x1[a] - tg.x1[b]);
      const double swap = std::abs(tg.x0[a] - tg.x1[b]) + std::abs(tg.x1[a] - tg.x0[b]);
      if (swap < keep) ds.seam.push_back({i, j, 0.5 * (grid.at(i, j) + grid.at(i, j + 1))});
    }
  return ds;
}

namespace {

double fit_slope(const std::vector<double>& r, const std::vector<double>& s) {
  const size_t n = r.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(r[i]);
    my += std::log(s[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(r[i]) - mx;
    sxy += dx * (std::log(s[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

ScalingReport branch_scaling_probe(int L, const ep::EPRecord& rec, const std::vector<double>& radii) {
  if (radii.size() < 2) throw Error(ErrorKind::InvalidConfig, "scaling fit needs at least two radii");
  ScalingReport rep;
  for (double r : radii) {
    const cplx g = rec.gamma_ep + std::polar(r, std::numbers::pi / 4.0);
    const auto spec = chain::ChainSpec::make(L, g);
    auto xs = chain::boundary_roots(spec, rec.mode);
    std::sort(xs.begin(), xs.end(), [&](cplx a, cplx b) { return std::abs(a - rec.x_ep) < std::abs(b - rec.x_ep); });
    rep.radii.push_back(r);
    rep.splittings.push_back(std::abs(chain::epsilon_of_x(spec, xs[0]) - chain::epsilon_of_x(spec, xs[1])));
  }
  rep.exponent = fit_slope(rep.radii, rep.splittings);
  return rep;
}

ScalingReport crossing_scaling_probe(int L, const std::vector<double>& radii) {
  if (radii.size() < 2) throw Error(ErrorKind::InvalidConfig, "scaling fit needs at least two radii");
  ScalingReport rep;
  for (double r : radii) {
    const auto qs = chain::quasi_energies(chain::ChainSpec::make(L, cplx{r, 0.0}));
    const auto& top1 = qs.points.front();
    const auto& top2 = qs.points[static_cast<size_t>(L / 2)];
    rep.radii.push_back(r);
    rep.splittings.push_back(std::abs(top1.epsilon - top2.epsilon));
  }
  rep.exponent = fit_slope(rep.radii, rep.splittings);
  return rep;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 0; k < 8; ++k) r.push_back(1e-3 * std::ldexp(1.0, -k));
  return r;
}

}  // namespace xyep::topology
