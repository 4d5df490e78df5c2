#pragma once

#include <utility>
#include <vector>

#include "xyep/chain.hpp"
#include "xyep/ep.hpp"

namespace xyep::topology {

cplx phase_rigidity(const CVec& v);

struct GammaGrid {
  double re_min = 0.0, re_max = 1.0, im_min = 0.0, im_max = 1.0;
  int nx = 2, ny = 2;

  void validate() const;
  cplx at(int i, int j) const;  // i along Re, j along Im
};

// The Zero-sector pair that coalesces at ep; member picks one of the two.
struct Selector {
  ep::EPRecord ep;
  int member = 0;
};

// Nearest EP of either family to gamma.
Selector default_selector(int L, cplx gamma);

struct OverlapSample {
  cplx gamma{0.0};
  cplx overlap{0.0};
  double magnitude = 0.0;
  int member = 0;
  bool pole = false;
  cplx energy{0.0};
  cplx x_member{0.0};
  cplx x_partner{0.0};
  double residual = 0.0;  // ||H v - E v|| / ||v||
};

struct OverlapGrid {
  GammaGrid grid;
  std::vector<OverlapSample> samples;  // row-major: Im index outer, Re index inner
  int fallback_steps = 0;              // tracking steps resolved without bisection guarantee

  const OverlapSample& at(int i, int j) const { return samples[static_cast<size_t>(j * grid.nx + i)]; }
};

OverlapGrid overlap_grid(int L, const GammaGrid& grid, const Selector& selector, int threads = 1);

struct LoopSpec {
  cplx center{0.0};
  double radius = 0.05;
  int steps = 256;
  int orientation = 1;  // +1 counter-clockwise
  int turns = 1;
  double start_angle = 0.0;
};

struct LoopResult {
  std::vector<int> permutation;  // label i ends where label permutation[i] started
  std::vector<double> step_distances;
  int refinements = 0;
  bool closed = false;
};

// Continues the L quasi-energy labels (mode I branches then mode II).
LoopResult track_loop(int L, const LoopSpec& loop);
// Loops traversed one after the other; they must share the start point.
LoopResult track_loops(int L, const std::vector<LoopSpec>& loops);

// second o first: apply first, then second.
std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& second);
std::vector<int> inverse(const std::vector<int>& p);

// Follows ordered roots of one family from ga to gb with bisection on ambiguity.
std::vector<cplx> track_segment(int L, chain::Mode mode, cplx ga, cplx gb, const std::vector<cplx>& roots,
                                int& refinements, double* max_step = nullptr);

struct SeamCell {
  int i = 0, j = 0;  // swap between rows j and j+1 in column i
  cplx gamma{0.0};   // midpoint
};

struct SheetDataset {
  OverlapGrid sheet0, sheet1;
  std::vector<SeamCell> seam;
};

SheetDataset sheet_stitch(int L, const GammaGrid& grid, const Selector& selector, int threads = 1);

struct ScalingReport {
  std::vector<double> radii, splittings;
  double exponent = 0.0;
};

ScalingReport branch_scaling_probe(int L, const ep::EPRecord& rec, const std::vector<double>& radii);
// Control: the gamma = 0 crossing of the two families' top branches.
ScalingReport crossing_scaling_probe(int L, const std::vector<double>& radii);

std::vector<double> default_radii();

}  // namespace xyep::topology
