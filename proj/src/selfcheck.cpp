#include "isowalk/selfcheck.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isowalk/experiments.hpp"
#include "isowalk/groups.hpp"
#include "isowalk/kernels.hpp"
#include "isowalk/measures.hpp"
#include "isowalk/rng.hpp"
#include "isowalk/setdyn.hpp"
#include "isowalk/spaces.hpp"
#include "isowalk/transport.hpp"

namespace isowalk {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_rng(std::uint64_t seed) {
  auto a = RngStream::derive(seed, {1, 2, 3});
  auto b = RngStream::derive(seed, {1, 2, 3});
  for (int i = 0; i < 64; ++i)
    require(a.next_u64() == b.next_u64(), "identical labels must replay the same stream");
  auto c = RngStream::derive(seed, {3, 2, 1});
  auto d = RngStream::derive(seed, {1, 2, 3});
  int same = 0;
  for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
  require(same < 4, "label order must change the stream");
  auto e = RngStream::derive(seed, {7});
  for (int i = 0; i < 1000; ++i) {
    double u = e.uniform();
    require(u >= 0.0 && u < 1.0, "uniform() left [0,1)");
  }
  for (int i = 0; i < 1000; ++i) {
    int k = e.uniform_int(7);
    require(k >= 0 && k < 7, "uniform_int(7) out of range");
  }
}

void check_kernels(std::uint64_t seed) {
  auto rs = RngStream::derive(seed, {0x6b65726eULL});
  const std::size_t n = 1037;  // odd size exercises the vector tail
  std::vector<double> xs(n), x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rs.uniform();
    double zz = rs.uniform(-1.0, 1.0), th = rs.uniform(0.0, 6.283185307179586);
    double r = std::sqrt(std::max(0.0, 1.0 - zz * zz));
    x[i] = r * std::cos(th);
    y[i] = r * std::sin(th);
    z[i] = zz;
  }
  double t = rs.uniform();
  auto xs2 = xs;
  kernels::wrap01_add(xs.data(), n, t);
  kernels::detail::wrap01_add_scalar(xs2.data(), n, t);
  require(std::memcmp(xs.data(), xs2.data(), n * sizeof(double)) == 0,
          "wrap01_add differs between backends");

  double q = rs.uniform();
  require(kernels::circle_min_dist(xs.data(), n, q) ==
              kernels::detail::circle_min_dist_scalar(xs.data(), n, q),
          "circle_min_dist differs between backends");

  double r9[9];
  Quat::from_axis_angle(0.3, -0.5, 0.81, 1.3).to_matrix(r9);
  auto x2 = x, y2 = y, z2 = z;
  kernels::rotate3(x.data(), y.data(), z.data(), n, r9);
  kernels::detail::rotate3_scalar(x2.data(), y2.data(), z2.data(), n, r9);
  require(std::memcmp(x.data(), x2.data(), n * sizeof(double)) == 0 &&
              std::memcmp(y.data(), y2.data(), n * sizeof(double)) == 0 &&
              std::memcmp(z.data(), z2.data(), n * sizeof(double)) == 0,
          "rotate3 differs between backends");

  require(kernels::dot3_max(x.data(), y.data(), z.data(), n, 0.1, -0.4, 0.9) ==
              kernels::detail::dot3_max_scalar(x.data(), y.data(), z.data(), n, 0.1, -0.4, 0.9),
          "dot3_max differs between backends");
  require(kernels::count_dot3_ge(x.data(), y.data(), z.data(), n, 0.0, 0.0, 1.0, 0.25) ==
              kernels::detail::count_dot3_ge_scalar(x.data(), y.data(), z.data(), n, 0.0, 0.0,
                                                    1.0, 0.25),
          "count_dot3_ge differs between backends");
}

void check_group_tables(std::uint64_t) {
  for (const auto& g : {FiniteGroupTable::cyclic(6), FiniteGroupTable::dihedral(4),
                        FiniteGroupTable::symmetric(4)}) {
    const int n = g.order();
    for (int a = 0; a < n; ++a) {
      require(g.mul(a, g.inverse(a)) == g.identity(), "a * a^-1 != e");
      require(g.mul(g.identity(), a) == a && g.mul(a, g.identity()) == a, "identity law");
      auto p = g.left_shift_perm(a);
      std::set<int> seen(p.begin(), p.end());
      require(static_cast<int>(seen.size()) == n, "left shift is not a permutation");
      for (int b = 0; b < n; ++b) require(p[b] == g.mul(a, b), "left shift disagrees with mul");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; c += 2)
          require(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)), "associativity");
  }
}

void check_classification(std::uint64_t seed) {
  auto z6 = FiniteGroupTable::cyclic(6);
  const int one[] = {1};
  require(is_adapted(z6, one), "shift 1 generates Z/6");
  require(!is_coset_aperiodic(z6, one), "a singleton support always sits in a coset");
  const int id_and_one[] = {0, 1};
  require(is_coset_aperiodic(z6, id_and_one), "support {0,1} has trivial coset trap");
  require(is_strictly_aperiodic(z6, id_and_one), "abelian: strict matches coset version");
  const int evens[] = {0, 2, 4};
  require(!is_adapted(z6, evens), "even shifts generate a proper subgroup");

  // coset trap <=> the deterministic-image scan finds a witness, checked on
  // random supports via the left action on group elements
  auto rs = RngStream::derive(seed, {0x636c6173ULL});
  for (const auto& g : {FiniteGroupTable::cyclic(8), FiniteGroupTable::symmetric(3),
                        FiniteGroupTable::dihedral(5)}) {
    for (int t = 0; t < 12; ++t) {
      std::set<int> sup;
      int k = 1 + rs.uniform_int(3);
      for (int i = 0; i < k; ++i) sup.insert(rs.uniform_int(g.order()));
      std::vector<int> support(sup.begin(), sup.end());
      std::vector<std::vector<int>> perms;
      for (int s : support) perms.push_back(g.left_shift_perm(s));
      auto scan = deterministic_image_witnesses(g.order(), perms);
      bool trapped = coset_trap(g, support).has_value();
      require(trapped == (scan.candidate_count > 0),
              "coset trap and image-witness scan disagree");
    }
  }
}

SpacePoint random_point_on(const Space& s, RngStream& rs) {
  switch (s.kind()) {
    case SpaceKind::Circle: return SpacePoint::circle(rs.uniform());
    case SpaceKind::Torus: {
      std::vector<double> c(static_cast<std::size_t>(s.dim()));
      for (auto& v : c) v = rs.uniform();
      return SpacePoint::torus(c);
    }
    case SpaceKind::Sphere2: {
      double z = rs.uniform(-1.0, 1.0), th = rs.uniform(0.0, 6.283185307179586);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return SpacePoint::sphere(r * std::cos(th), r * std::sin(th), z);
    }
    default: return SpacePoint::finite(rs.uniform_int(s.finite_size()));
  }
}

IsometryElement random_isometry_on(const Space& s, RngStream& rs) {
  switch (s.kind()) {
    case SpaceKind::Circle: return CircleRotation{rs.uniform()};
    case SpaceKind::Torus: {
      std::vector<double> c(static_cast<std::size_t>(s.dim()));
      for (auto& v : c) v = rs.uniform();
      return TorusTranslation{c};
    }
    case SpaceKind::Sphere2:
      return SphereRotation{Quat::from_axis_angle(rs.uniform(-1, 1), rs.uniform(-1, 1),
                                                  rs.uniform(-1, 1), rs.uniform(0, 3.0))};
    case SpaceKind::FiniteGroup: return GroupShift{rs.uniform_int(s.finite_size())};
    default: {
      auto list = full_isometry_list(s);
      return list[static_cast<std::size_t>(rs.uniform_int(static_cast<int>(list.size())))];
    }
  }
}

void check_metric_axioms(std::uint64_t seed) {
  auto rs = RngStream::derive(seed, {0x6d657472ULL});
  std::vector<Space> spaces = {
      Space::circle(), Space::torus(2), Space::sphere2(),
      Space::finite_group(FiniteGroupTable::symmetric(3)),
      Space::finite_metric({{0, 1, 2}, {1, 0, 1.5}, {2, 1.5, 0}})};
  for (const auto& s : spaces) {
    for (int t = 0; t < 40; ++t) {
      auto a = random_point_on(s, rs), b = random_point_on(s, rs), c = random_point_on(s, rs);
      double ab = distance(s, a, b), ba = distance(s, b, a);
      require(std::abs(ab - ba) <= 1e-12, "metric symmetry failed on " + kind_name(s.kind()));
      require(distance(s, a, a) <= 1e-12, "d(x,x) != 0 on " + kind_name(s.kind()));
      require(ab <= distance(s, a, c) + distance(s, c, b) + 1e-9,
              "triangle inequality failed on " + kind_name(s.kind()));
      require(ab <= s.diameter() + 1e-12, "distance above diameter on " + kind_name(s.kind()));
      auto g = random_isometry_on(s, rs);
      double moved = distance(s, apply(s, g, a), apply(s, g, b));
      require(std::abs(moved - ab) <= 1e-9,
              "isometry changed a distance on " + kind_name(s.kind()) + " by " +
                  fmt(moved - ab));
      auto gi = inverse(s, g);
      require(points_equal(s, apply(s, gi, apply(s, g, a)), a) ||
                  distance(s, apply(s, gi, apply(s, g, a)), a) <= 1e-9,
              "g^-1 g x != x on " + kind_name(s.kind()));
    }
  }
}

void check_convolution(std::uint64_t seed) {
  auto rs = RngStream::derive(seed, {0x636f6e76ULL});
  auto s = Space::finite_group(FiniteGroupTable::symmetric(4));
  auto random_iso_measure = [&] {
    std::vector<IsoMeasure::Atom> atoms;
    int k = 1 + rs.uniform_int(4);
    for (int i = 0; i < k; ++i) atoms.push_back({GroupShift{rs.uniform_int(24)}, 1.0});
    return IsoMeasure::normalized(s, atoms);
  };
  for (int t = 0; t < 10; ++t) {
    auto m1 = random_iso_measure();
    auto m2 = random_iso_measure();
    std::vector<PointMeasure::Atom> pa;
    int k = 1 + rs.uniform_int(4);
    for (int i = 0; i < k; ++i) pa.push_back({SpacePoint::finite(rs.uniform_int(24)), 1.0});
    auto nu = PointMeasure::normalized(s, pa);
    auto lhs = convolve(convolve(m1, m2), nu);
    auto rhs = convolve(m1, convolve(m2, nu));
    require(measures_equal(lhs, rhs, 1e-12), "convolution is not associative");
    auto e = dirac_iso(s, identity_isometry(s));
    require(measures_equal(convolve(e, nu), nu, 1e-12), "dirac at identity is not neutral");
    double mass = 0;
    for (const auto& atom : convolve(m1, nu).atoms()) mass += atom.weight;
    require(std::abs(mass - 1.0) <= 1e-12, "convolution lost mass");
  }
}

void check_transport(std::uint64_t seed) {
  auto rs = RngStream::derive(seed, {0x7472616eULL});
  auto s = Space::circle();
  auto random_measure = [&](int kmax) {
    std::vector<PointMeasure::Atom> atoms;
    int k = 1 + rs.uniform_int(kmax);
    for (int i = 0; i < k; ++i) atoms.push_back({SpacePoint::circle(rs.uniform()), rs.uniform(0.1, 1.0)});
    return PointMeasure::normalized(s, atoms);
  };
  for (int t = 0; t < 60; ++t) {
    auto a = random_measure(5);
    auto b = random_measure(5);
    auto plan = w1_exact(a, b);
    require(plan.certified, "simplex plan not certified");
    double oracle = w1_oracle(a, b);
    require(std::abs(plan.cost - oracle) <= 1e-9,
            "W1 disagrees with the enumeration oracle by " + fmt(plan.cost - oracle));
    require(std::abs(w1_exact(b, a).cost - plan.cost) <= 1e-9, "W1 is not symmetric");
    require(w1_exact(a, a).cost <= 1e-12, "W1(a,a) != 0");
    auto c = random_measure(5);
    require(plan.cost <= w1_distance(a, c) + w1_distance(c, b) + 1e-9,
            "W1 triangle inequality failed");
  }
  auto fg = Space::finite_group(FiniteGroupTable::cyclic(7));
  auto random_finite = [&] {
    std::vector<PointMeasure::Atom> atoms;
    int k = 1 + rs.uniform_int(5);
    for (int i = 0; i < k; ++i) atoms.push_back({SpacePoint::finite(rs.uniform_int(7)), rs.uniform(0.1, 1.0)});
    return PointMeasure::normalized(fg, atoms);
  };
  for (int t = 0; t < 40; ++t) {
    auto a = random_finite();
    auto b = random_finite();
    double tv = tv_distance(a, b);
    require(tv >= -1e-15 && tv <= 1.0 + 1e-12, "TV left [0,1]");
    require(std::abs(tv - tv_distance(b, a)) <= 1e-12, "TV is not symmetric");
    require(tv_distance(a, a) <= 1e-15, "TV(a,a) != 0");
    require(w1_distance(a, b) <= fg.diameter() * tv + 1e-9, "W1 > diam * TV");
  }
  bool threw = false;
  try {
    auto a = random_measure(3);
    tv_distance(a, a);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  require(threw, "TV on a continuous carrier must be rejected");
}

void check_setdyn(std::uint64_t seed) {
  // worked example: Z/4, steps by {0,1}, A0 = {0,1,2} shrinks to empty
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto net = net_all_points(s);
  NetSet a0(net, {0, 1, 2});
  MeasureFamily fam;
  fam.schedule = Schedule::Cyclic;
  fam.members.push_back(IsoMeasure(s, {{GroupShift{0}, 0.5}, {GroupShift{1}, 0.5}}));
  auto elements = full_isometry_list(s);
  auto probe = separation_probe(a0, fam, 6, elements, 0.9, RngStream::derive(seed, {11}));
  require(probe.sizes.size() == 2 && probe.sizes[0] == 2 && probe.sizes[1] == 1,
          "t_mu sequence sizes should be 2,1 before dying");
  require(probe.first_empty_step == 3, "t_mu should die at step 3");

  auto rs = RngStream::derive(seed, {0x73657464ULL});
  auto grid = net_circle_grid(Space::circle(), 40);
  auto random_set = [&] {
    std::set<int> m;
    int k = 1 + rs.uniform_int(12);
    for (int i = 0; i < k; ++i) m.insert(rs.uniform_int(40));
    return NetSet(grid, std::vector<int>(m.begin(), m.end()));
  };
  for (int t = 0; t < 40; ++t) {
    auto a = random_set(), b = random_set(), c = random_set();
    double h = hausdorff(a, b);
    require(std::abs(h - hausdorff(b, a)) <= 1e-15, "Hausdorff not symmetric");
    require(hausdorff(a, a) <= 1e-15, "Hausdorff(a,a) != 0");
    require(h <= hausdorff(a, c) + hausdorff(c, b) + 1e-12, "Hausdorff triangle failed");
    require(asym_D(a, b) <= h + 1e-15 && asym_D(b, a) <= h + 1e-15,
            "asymmetric D exceeds Hausdorff");
  }
}

void check_partition(std::uint64_t) {
  auto grid = net_circle_grid(Space::circle(), 120);  // covering radius 1/240
  auto part = eps_wide_partition(grid, 0.05);         // construction self-verifies
  std::set<int> covered;
  for (const auto& cell : part.cells)
    for (int m : cell.members()) require(covered.insert(m).second, "partition cells overlap");
  require(static_cast<int>(covered.size()) == 120, "partition misses net points");
  for (std::size_t i = 0; i < part.centers.size(); ++i)
    for (std::size_t j = i + 1; j < part.centers.size(); ++j) {
      const auto& pts = grid->points;
      require(distance(grid->space, pts[static_cast<std::size_t>(part.centers[i])],
                       pts[static_cast<std::size_t>(part.centers[j])]) >= 0.05 - 1e-12,
              "partition centers are not eps-separated");
    }
}

void check_stromberg(std::uint64_t) {
  auto rep = run_stromberg(24, 10);
  require(!rep.convergent, "the alternating walk must not converge");
  require(std::abs(rep.oscillation - 1.0) <= 1e-12, "successive TV should peak at 1");
  for (std::size_t i = 0; i + 1 < rep.tv_to_haar.size(); ++i)
    require(std::abs(rep.tv_to_haar[i] - 2.0 / 3.0) <= 1e-12,
            "TV to the invariant measure should stay 2/3");
  for (std::size_t i = 2; i < rep.supports.size(); ++i)
    require(rep.supports[i] == rep.supports[i - 2], "supports should have period 2");
}

void check_census(std::uint64_t seed) {
  auto rep = run_ito_kawada_census(8, 2, seed, 300, 60);
  require(!rep.rows.empty(), "census produced no rows");
  require(rep.violations == 0, "census found a convergence-criterion violation");
  require(rep.witness_mismatches == 0, "census witness scan mismatch");
}

void check_ergodic(std::uint64_t seed) {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(5));
  WalkConfig cfg;
  cfg.family.schedule = Schedule::Cyclic;
  cfg.family.members.push_back(
      IsoMeasure(s, {{GroupShift{0}, 0.5}, {GroupShift{1}, 0.5}}));
  cfg.seed = seed;
  cfg.trials = 8;
  cfg.horizon = 400;
  cfg.observable_id = "indicator:0";
  const int cps[] = {400};
  auto rep = run_ergodic(cfg, cps);
  require(std::abs(rep.reference_integral - 0.2) <= 1e-12, "uniform mass of one point in Z/5");
  for (const auto& trial : rep.averages)
    require(std::abs(trial.back() - 0.2) <= 0.15, "Birkhoff average far from the mean");
}

void check_sphere_words(std::uint64_t) {
  auto s = Space::sphere2();
  IsometryElement A = SphereRotation{Quat::from_axis_angle(1, 0, 0, 1.1)};
  IsometryElement B = SphereRotation{Quat::from_axis_angle(0, 1, 0, 0.7)};
  CapSpec cap;
  cap.cos_theta = 0.5;
  auto rep = run_sphere_equidistribution(s, A, B, SpacePoint::sphere(0, 0, 1), 10, cap);
  require(rep.points == 1024, "2^10 words expected");
  require(rep.share >= 0.0 && rep.share <= 1.0, "cap share must be a fraction");
  require(std::abs(rep.cap_area - 0.25) <= 1e-15, "hemisphere-half cap area");
}

}  // namespace

SelfCheckResult run_selfcheck(std::uint64_t seed) {
  struct Check {
    const char* name;
    std::function<void(std::uint64_t)> fn;
  };
  const std::vector<Check> checks = {
      {"rng-streams", check_rng},
      {"kernel-backends", check_kernels},
      {"group-tables", check_group_tables},
      {"group-classification", check_classification},
      {"metric-axioms", check_metric_axioms},
      {"convolution-algebra", check_convolution},
      {"transport-duality", check_transport},
      {"set-dynamics", check_setdyn},
      {"wide-partition", check_partition},
      {"alternating-walk", check_stromberg},
      {"group-census", check_census},
      {"ergodic-averages", check_ergodic},
      {"sphere-words", check_sphere_words},
  };
  SelfCheckResult r;
  for (const auto& c : checks) {
    try {
      c.fn(seed);
      ++r.passed;
    } catch (const std::exception& e) {
      ++r.failed;
      r.failures.push_back(std::string(c.name) + ": " + e.what());
    }
  }
  return r;
}

}  // namespace isowalk
