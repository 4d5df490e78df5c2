#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "xyep/topology.hpp"

using namespace xyep;
using topology::LoopSpec;

namespace {

ep::EPRecord ep_near(int L, cplx g) { return topology::default_selector(L, g).ep; }

}  // namespace

TEST_CASE("phase rigidity") {
  CVec real(3);
  real << 1.0, -2.0, 0.5;
  CHECK(std::abs(topology::phase_rigidity(real) - 1.0) < 1e-15);
  CVec null(2);
  null << 1.0, cplx(0.0, 1.0);
  CHECK(std::abs(topology::phase_rigidity(null)) < 1e-15);
  CHECK(test::error_kind([] { topology::phase_rigidity(CVec::Zero(3)); }) == ErrorKind::ZeroVector);
}

TEST_CASE("permutation algebra") {
  const std::vector<int> a{1, 2, 0}, b{0, 2, 1};
  CHECK(topology::compose(a, topology::inverse(a)) == std::vector<int>{0, 1, 2});
  CHECK(topology::compose(a, b) != topology::compose(b, a));
}

TEST_CASE("grid validation") {
  CHECK(test::error_kind([] { topology::GammaGrid{0, 1, 0, 1, 1, 4}.validate(); }) == ErrorKind::InvalidConfig);
  CHECK(test::error_kind([] { topology::GammaGrid{1, 0, 0, 1, 3, 3}.validate(); }) == ErrorKind::InvalidConfig);
  const topology::GammaGrid g{0.0, 1.0, -1.0, 1.0, 3, 5};
  CHECK(g.at(2, 4) == cplx(1.0, 1.0));
  CHECK(g.at(0, 2) == cplx(0.0, 0.0));
}

TEST_CASE("loop around the L = 4 EP exchanges the coalescing labels") {
  const auto once = topology::track_loop(4, {cplx(0.6, 0.8), 0.05, 256, 1, 1, 0.0});
  CHECK(once.closed);
  CHECK(once.permutation == std::vector<int>{0, 1, 3, 2});
  const auto twice = topology::track_loop(4, {cplx(0.6, 0.8), 0.05, 256, 1, 2, 0.0});
  CHECK(twice.permutation == std::vector<int>{0, 1, 2, 3});
  const auto mirror = topology::track_loop(4, {cplx(-0.6, 0.8), 0.05, 256, -1, 1, 1.0});
  CHECK(mirror.permutation == std::vector<int>{1, 0, 2, 3});
  const auto empty = topology::track_loop(6, {cplx(1.5, 1.5), 0.1, 128, 1, 1, 0.0});
  CHECK(empty.permutation == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("loops too close to singular points are rejected") {
  CHECK(test::error_kind([] { topology::track_loop(4, {cplx(0.6, 0.75), 0.05, 256, 1, 1, 0.0}); }) ==
        ErrorKind::InvalidConfig);
  CHECK(test::error_kind([] { topology::track_loop(4, {cplx(1.0, 0.05), 0.05, 256, 1, 1, 0.0}); }) ==
        ErrorKind::InvalidConfig);
  CHECK(test::error_kind([] {
          topology::track_loops(4, {{cplx(0.6, 0.8), 0.05, 256, 1, 1, 0.0}, {cplx(1.5, 1.5), 0.05, 256, 1, 1, 0.0}});
        }) == ErrorKind::InvalidConfig);
}

TEST_CASE("overlap grid vanishes only at the EP") {
  const auto rec = ep_near(4, cplx(0.6, 0.8));
  const topology::GammaGrid grid{0.5, 0.7, 0.7, 0.9, 3, 3};
  const auto g = topology::overlap_grid(4, grid, {rec, 0});
  REQUIRE(g.samples.size() == 9);
  CHECK(g.at(1, 1).magnitude < 1e-6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) CHECK(g.at(i, j).magnitude > 0.05);
  // the tracked member is a true eigenpair of H away from the EP
  CHECK(g.at(0, 0).residual < 1e-8);
  const auto other = topology::overlap_grid(4, grid, {rec, 1});
  CHECK(std::abs(other.at(0, 0).energy - g.at(0, 0).energy) > 1e-3);
}

TEST_CASE("pole cells are marked") {
  const auto rec = ep_near(4, cplx(0.6, 0.8));
  const auto g = topology::overlap_grid(4, {0.9, 1.1, -0.1, 0.1, 3, 3}, {rec, 0});
  CHECK(g.at(1, 1).pole);
  CHECK(std::isnan(g.at(1, 1).magnitude));
  CHECK_FALSE(g.at(0, 0).pole);
}

TEST_CASE("sheet seam crosses the branch cut only") {
  const auto rec = ep_near(4, cplx(0.6, 0.8));
  const auto around = topology::sheet_stitch(4, {0.4, 0.8, 0.6, 1.0, 21, 21}, {rec, 0});
  CHECK_FALSE(around.seam.empty());
  const auto away = topology::sheet_stitch(4, {1.3, 1.6, 1.3, 1.6, 11, 11}, {rec, 0});
  CHECK(away.seam.empty());
}

TEST_CASE("square-root branch scaling") {
  const auto radii = topology::default_radii();
  CHECK(radii.size() == 8);
  const auto rep = topology::branch_scaling_probe(4, ep_near(4, cplx(0.6, 0.8)), radii);
  CHECK(std::abs(rep.exponent - 0.5) < 0.01);
  const auto ctrl = topology::crossing_scaling_probe(4, radii);
  CHECK(std::abs(ctrl.exponent - 1.0) < 0.01);
}
