#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "isowalk/rng.hpp"
#include "isowalk/spaces.hpp"

using namespace isowalk;

namespace {

SpacePoint random_point(const Space& s, RngStream& rs) {
  switch (s.kind()) {
    case SpaceKind::Circle: return SpacePoint::circle(rs.uniform());
    case SpaceKind::Torus: {
      std::vector<double> c(static_cast<std::size_t>(s.dim()));
      for (auto& v : c) v = rs.uniform();
      return SpacePoint::torus(c);
    }
    case SpaceKind::Sphere2: {
      double z = rs.uniform(-1.0, 1.0), th = rs.uniform(0.0, 2.0 * M_PI);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return SpacePoint::sphere(r * std::cos(th), r * std::sin(th), z);
    }
    default: return SpacePoint::finite(rs.uniform_int(s.finite_size()));
  }
}

IsometryElement random_isometry(const Space& s, RngStream& rs) {
  switch (s.kind()) {
    case SpaceKind::Circle: return CircleRotation{rs.uniform()};
    case SpaceKind::Torus: {
      std::vector<double> c(static_cast<std::size_t>(s.dim()));
      for (auto& v : c) v = rs.uniform();
      return TorusTranslation{c};
    }
    case SpaceKind::Sphere2:
      return SphereRotation{Quat::from_axis_angle(rs.uniform(-1, 1), rs.uniform(-1, 1),
                                                  rs.uniform(-1, 1), rs.uniform(0, 6.0))};
    case SpaceKind::FiniteGroup: return GroupShift{rs.uniform_int(s.finite_size())};
    default: {
      // the example metric below is preserved exactly by the flip 0<->2
      return MetricPermutation{{2, 1, 0}};
    }
  }
}

Space example_metric_space() {
  return Space::finite_metric({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}});
}

}  // namespace

TEST_CASE("circle distance wraps at the half turn") {
  auto s = Space::circle();
  CHECK(distance(s, SpacePoint::circle(0.0), SpacePoint::circle(0.25)) == doctest::Approx(0.25));
  CHECK(distance(s, SpacePoint::circle(0.1), SpacePoint::circle(0.9)) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(distance(s, SpacePoint::circle(0.0), SpacePoint::circle(0.5)) == doctest::Approx(0.5));
  CHECK(s.diameter() == doctest::Approx(0.5));
  CHECK(distance(s, SpacePoint::circle(0.77), SpacePoint::circle(0.77)) == 0.0);
}

TEST_CASE("torus uses the max of per-axis circle distances") {
  auto s = Space::torus(3);
  auto a = SpacePoint::torus({0.1, 0.5, 0.9});
  auto b = SpacePoint::torus({0.2, 0.5, 0.1});
  CHECK(distance(s, a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(s.diameter() == doctest::Approx(0.5));
  CHECK(s.dim() == 3);
}

TEST_CASE("sphere distance is the geodesic angle") {
  auto s = Space::sphere2();
  auto north = SpacePoint::sphere(0, 0, 1);
  auto east = SpacePoint::sphere(1, 0, 0);
  auto south = SpacePoint::sphere(0, 0, -1);
  CHECK(distance(s, north, east) == doctest::Approx(M_PI / 2));
  CHECK(distance(s, north, south) == doctest::Approx(M_PI));
  CHECK(s.diameter() == doctest::Approx(M_PI));
  // atan2 keeps accuracy for nearly-identical points
  auto near = SpacePoint::sphere(std::sin(1e-9), 0, std::cos(1e-9));
  CHECK(distance(s, north, near) == doctest::Approx(1e-9).epsilon(1e-3));
}

TEST_CASE("finite kinds take distances from the table") {
  auto g = Space::finite_group(FiniteGroupTable::symmetric(3));
  CHECK(distance(g, SpacePoint::finite(0), SpacePoint::finite(2)) == 1.0);
  CHECK(distance(g, SpacePoint::finite(4), SpacePoint::finite(4)) == 0.0);
  CHECK(g.diameter() == 1.0);

  auto m = example_metric_space();
  CHECK(distance(m, SpacePoint::finite(0), SpacePoint::finite(2)) == 2.0);
  CHECK(m.diameter() == 2.0);
  CHECK(m.finite_size() == 3);
}

TEST_CASE("invalid metric matrices are rejected") {
  // triangle inequality violated: d(0,2)=5 > d(0,1)+d(1,2)=2
  CHECK_THROWS(Space::finite_metric({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}));
  // asymmetric
  CHECK_THROWS(Space::finite_metric({{0, 1}, {2, 0}}));
  // zero off-diagonal
  CHECK_THROWS(Space::finite_metric({{0, 0}, {0, 0}}));
}

TEST_CASE("apply and compose follow the right-factor-first convention") {
  auto rs = RngStream::derive(31, {1});
  std::vector<Space> spaces = {Space::circle(), Space::torus(2), Space::sphere2(),
                               Space::finite_group(FiniteGroupTable::dihedral(4)),
                               example_metric_space()};
  for (const auto& s : spaces) {
    for (int t = 0; t < 50; ++t) {
      auto g = random_isometry(s, rs);
      auto h = random_isometry(s, rs);
      auto p = random_point(s, rs);
      auto composed = apply(s, compose(s, g, h), p);
      auto nested = apply(s, g, apply(s, h, p));
      CHECK(distance(s, composed, nested) <= 1e-12);
    }
  }
}

TEST_CASE("isometries preserve distances and invert cleanly") {
  auto rs = RngStream::derive(32, {1});
  std::vector<Space> spaces = {Space::circle(), Space::torus(2), Space::sphere2(),
                               Space::finite_group(FiniteGroupTable::symmetric(4)),
                               example_metric_space()};
  for (const auto& s : spaces) {
    for (int t = 0; t < 50; ++t) {
      auto g = random_isometry(s, rs);
      auto a = random_point(s, rs);
      auto b = random_point(s, rs);
      CHECK(std::abs(distance(s, apply(s, g, a), apply(s, g, b)) - distance(s, a, b)) <= 1e-9);
      auto gi = inverse(s, g);
      CHECK(distance(s, apply(s, gi, apply(s, g, a)), a) <= 1e-9);
      CHECK(isometries_equal(s, compose(s, g, gi), identity_isometry(s)));
    }
  }
}

TEST_CASE("group shifts act by left multiplication") {
  auto table = FiniteGroupTable::symmetric(3);
  auto s = Space::finite_group(table);
  // (12) applied to (13) is the product (12)(13) = (132)
  auto moved = apply(s, GroupShift{2}, SpacePoint::finite(5));
  CHECK(moved.index == 4);
}

TEST_CASE("metric permutations must preserve the table") {
  auto m = example_metric_space();
  CHECK_NOTHROW(check_isometry(m, MetricPermutation{{2, 1, 0}}));
  // swapping 0 and 1 changes d(*,2): not an isometry of this space
  CHECK_THROWS(check_isometry(m, MetricPermutation{{1, 0, 2}}));
}

TEST_CASE("point equality respects the wrap seam") {
  auto s = Space::circle();
  CHECK(points_equal(s, SpacePoint::circle(1e-13), SpacePoint::circle(1.0 - 1e-13)));
  CHECK(!points_equal(s, SpacePoint::circle(0.0), SpacePoint::circle(0.5)));
  auto t = Space::torus(2);
  CHECK(points_equal(t, SpacePoint::torus({1e-13, 0.5}), SpacePoint::torus({1.0 - 1e-13, 0.5})));

  auto sp = Space::sphere2();
  // antipodal quaternions are the same rotation
  Quat q = Quat::from_axis_angle(1, 2, 3, 0.8);
  Quat nq{-q.w, -q.x, -q.y, -q.z};
  CHECK(isometries_equal(sp, SphereRotation{q}, SphereRotation{nq}));
}

TEST_CASE("quaternion composition matches applying rotations in order") {
  auto s = Space::sphere2();
  Quat a = Quat::from_axis_angle(0, 0, 1, M_PI / 2);
  auto east = apply(s, SphereRotation{a}, SpacePoint::sphere(1, 0, 0));
  CHECK(east.coords[1] == doctest::Approx(1.0));  // x-axis rotates to y-axis
  CHECK(std::abs(east.coords[0]) < 1e-12);

  Quat b = Quat::from_axis_angle(1, 0, 0, M_PI / 2);
  auto g = compose(s, SphereRotation{b}, SphereRotation{a});
  auto p = apply(s, g, SpacePoint::sphere(1, 0, 0));
  // a first: (1,0,0) -> (0,1,0); then b about x: (0,1,0) -> (0,0,1)
  CHECK(p.coords[2] == doctest::Approx(1.0));
}

TEST_CASE("sup distance closed forms") {
  auto c = Space::circle();
  auto r = sup_distance(c, CircleRotation{0.1}, CircleRotation{0.35});
  CHECK(r.value == doctest::Approx(0.25));
  CHECK(r.net_covering_radius == 0.0);

  auto g = Space::finite_group(FiniteGroupTable::symmetric(3));
  CHECK(sup_distance(g, GroupShift{0}, GroupShift{2}).value == 1.0);
  CHECK(sup_distance(g, GroupShift{3}, GroupShift{3}).value == 0.0);

  auto sp = Space::sphere2();
  Quat qa = Quat::from_axis_angle(0, 0, 1, 0.9);
  Quat qb = Quat::from_axis_angle(0, 0, 1, 0.4);
  auto rs = sup_distance(sp, SphereRotation{qa}, SphereRotation{qb});
  // same axis: every equator point moves by the angle difference
  CHECK(std::abs(rs.value - 0.5) <= rs.net_covering_radius * 2 + 1e-9);
  CHECK(relative_rotation_angle(qa, qb) == doctest::Approx(0.5));
}

TEST_CASE("reference nets meet the requested covering radius") {
  for (double eps : {0.3, 0.1, 0.05}) {
    for (const auto& s : {Space::circle(), Space::torus(2), Space::sphere2()}) {
      auto net = reference_net(s, eps);
      CHECK(net.covering_radius <= eps);
      CHECK(!net.points.empty());
    }
  }
  auto fin = reference_net(Space::finite_group(FiniteGroupTable::cyclic(5)), 0.5);
  CHECK(fin.points.size() == 5);
  CHECK(fin.covering_radius == 0.0);
}

TEST_CASE("circle reference net is the uniform grid") {
  auto net = reference_net(Space::circle(), 0.1);
  REQUIRE(net.points.size() >= 5);
  double spacing = 1.0 / static_cast<double>(net.points.size());
  for (std::size_t i = 0; i < net.points.size(); ++i)
    CHECK(net.points[i].coords[0] ==
          doctest::Approx(spacing * static_cast<double>(i)).epsilon(1e-12));
  CHECK(net.covering_radius == doctest::Approx(spacing / 2));
}

TEST_CASE("reference measure atoms are uniform and complete on finite kinds") {
  auto s = Space::finite_group(FiniteGroupTable::symmetric(3));
  auto atoms = reference_measure_atoms(s, 2);  // n is ignored on finite kinds
  REQUIRE(atoms.points.size() == 6);
  for (double w : atoms.weights) CHECK(w == doctest::Approx(1.0 / 6));

  auto c = reference_measure_atoms(Space::circle(), 8);
  REQUIRE(c.points.size() == 8);
  for (double w : c.weights) CHECK(w == doctest::Approx(0.125));
}

TEST_CASE("fibonacci sphere points are unit and spread out") {
  auto pts = fibonacci_sphere(200);
  REQUIRE(pts.size() == 200);
  auto s = Space::sphere2();
  double min_pair = M_PI;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double n2 = pts[i].coords[0] * pts[i].coords[0] + pts[i].coords[1] * pts[i].coords[1] +
                pts[i].coords[2] * pts[i].coords[2];
    CHECK(n2 == doctest::Approx(1.0));
    for (std::size_t j = i + 1; j < std::min(pts.size(), i + 8); ++j)
      min_pair = std::min(min_pair, distance(s, pts[i], pts[j]));
  }
  CHECK(min_pair > 0.01);  // no near-duplicates
}

TEST_CASE("measured covering radius matches hand values") {
  auto s = Space::circle();
  std::vector<SpacePoint> net = {SpacePoint::circle(0.0), SpacePoint::circle(0.25),
                                 SpacePoint::circle(0.5), SpacePoint::circle(0.75)};
  auto probe = reference_net(s, 0.01).points;
  double r = measured_covering_radius(s, net, probe);
  CHECK(r == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("all_finite_points and torus_grid enumerate completely") {
  auto g = Space::finite_group(FiniteGroupTable::dihedral(3));
  auto pts = all_finite_points(g);
  REQUIRE(pts.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(pts[static_cast<std::size_t>(i)].index == i);

  auto grid = torus_grid(2, 5);
  CHECK(grid.size() == 25);
  for (const auto& p : grid) {
    CHECK(p.coords.size() == 2);
    for (double c : p.coords) {
      CHECK(c >= 0.0);
      CHECK(c < 1.0);
    }
  }
}

TEST_CASE("malformed points and isometries are rejected") {
  auto c = Space::circle();
  CHECK_THROWS(check_point(c, SpacePoint{{1.5}, -1}));  // factory would wrap; raw value rejected
  CHECK_THROWS(check_point(c, SpacePoint::finite(0)));
  CHECK_THROWS(SpacePoint::circle(std::nan("")));
  CHECK(SpacePoint::circle(1.5).coords[0] == doctest::Approx(0.5));
  CHECK_THROWS(check_isometry(c, GroupShift{0}));
  auto g = Space::finite_group(FiniteGroupTable::cyclic(3));
  CHECK_THROWS(check_point(g, SpacePoint::finite(3)));
  CHECK_THROWS(check_point(g, SpacePoint::finite(-1)));
  auto sp = Space::sphere2();
  CHECK_THROWS(check_point(sp, SpacePoint{{0.0, 0.0, 0.0}, -1}));
}

TEST_CASE("same_space distinguishes structures") {
  CHECK(Space::circle().same_space(Space::circle()));
  CHECK(!Space::circle().same_space(Space::torus(1)));
  CHECK(!Space::torus(2).same_space(Space::torus(3)));
  CHECK(Space::finite_group(FiniteGroupTable::cyclic(4))
            .same_space(Space::finite_group(FiniteGroupTable::cyclic(4))));
  CHECK(!Space::finite_group(FiniteGroupTable::cyclic(4))
             .same_space(Space::finite_group(FiniteGroupTable::cyclic(5))));
}
