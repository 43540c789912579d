#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "isowalk/experiments.hpp"
#include "isowalk/groups.hpp"
#include "isowalk/measures.hpp"
#include "isowalk/observables.hpp"
#include "isowalk/rng.hpp"
#include "isowalk/spaces.hpp"
#include "isowalk/transport.hpp"

using namespace isowalk;

namespace {

IsoMeasure group_iso(const Space& s, std::vector<std::pair<int, double>> ew) {
  std::vector<IsoMeasure::Atom> atoms;
  for (auto [e, w] : ew) atoms.push_back({IsometryElement{GroupShift{e}}, w});
  return IsoMeasure(s, std::move(atoms));
}

MeasureFamily single(IsoMeasure mu) {
  MeasureFamily fam;
  fam.members.push_back(std::move(mu));
  return fam;
}

WalkConfig basic_config(MeasureFamily fam) {
  WalkConfig cfg;
  cfg.family = std::move(fam);
  return cfg;
}

}  // namespace

TEST_CASE("base points and invariant references") {
  CHECK(base_point(Space::circle()).coords[0] == 0.0);
  CHECK(base_point(Space::finite_group(FiniteGroupTable::symmetric(3))).index == 0);
  auto sp = base_point(Space::sphere2());
  CHECK(sp.coords[2] == doctest::Approx(1.0));

  auto ref = invariant_reference(Space::finite_group(FiniteGroupTable::cyclic(5)), 0);
  REQUIRE(ref.size() == 5);
  for (const auto& a : ref.atoms()) CHECK(a.weight == doctest::Approx(0.2));

  auto cref = invariant_reference(Space::circle(), 64);
  CHECK(cref.size() == 64);
}

TEST_CASE("built-in observables and their reference integrals") {
  auto c = Space::circle();
  auto one = make_observable(c, "one");
  CHECK(one.reference_integral == 1.0);
  CHECK(one.eval(SpacePoint::circle(0.3)) == 1.0);

  auto cos1 = make_observable(c, "cos1");
  CHECK(cos1.reference_integral == 0.0);
  CHECK(cos1.eval(SpacePoint::circle(0.0)) == doctest::Approx(1.0));
  CHECK(cos1.eval(SpacePoint::circle(0.25)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cos1.bound == doctest::Approx(1.0));

  auto g = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto ind = make_observable(g, "indicator:2");
  CHECK(ind.reference_integral == doctest::Approx(0.25));
  CHECK(ind.eval(SpacePoint::finite(2)) == 1.0);
  CHECK(ind.eval(SpacePoint::finite(1)) == 0.0);

  auto z = make_observable(Space::sphere2(), "sphere_z");
  CHECK(z.reference_integral == 0.0);
  CHECK(z.eval(SpacePoint::sphere(0, 0, -1)) == doctest::Approx(-1.0));

  CHECK_THROWS(make_observable(c, "indicator:0"));  // finite kinds only
  CHECK_THROWS(make_observable(c, "no-such"));
  CHECK_THROWS(make_observable(g, "indicator:9"));
}

TEST_CASE("exact convergence of a lazy shift walk") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(8));
  auto cfg = basic_config(single(group_iso(s, {{0, 0.5}, {1, 0.5}})));
  cfg.horizon = 250;
  cfg.checkpoint_every = 50;
  auto series = run_convergence(cfg);
  CHECK(series.metric == "tv");
  CHECK(series.reference_discretization == 0.0);
  REQUIRE(series.records.size() == 5);
  for (std::size_t i = 0; i < series.records.size(); ++i) {
    CHECK(series.records[i].step == 50 * static_cast<int>(i + 1));
    if (i > 0) CHECK(series.records[i].dist <= series.records[i - 1].dist + 1e-15);
    CHECK(series.records[i].subsample_size == 0);
  }
  CHECK(series.records.back().dist < 1e-6);
  CHECK(series.records.back().support_size == 8);
  CHECK(series.records.back().support_radius == 0.0);
}

TEST_CASE("identity kernel never converges and keeps its distance") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(8));
  auto cfg = basic_config(single(group_iso(s, {{0, 1.0}})));
  cfg.horizon = 20;
  cfg.checkpoint_every = 5;
  auto series = run_convergence(cfg);
  for (const auto& r : series.records) {
    CHECK(r.dist == doctest::Approx(1.0 - 1.0 / 8));
    CHECK(r.support_size == 1);
  }
}

TEST_CASE("a single deterministic rotation keeps constant transport distance") {
  auto c = Space::circle();
  MeasureFamily fam;
  fam.members.push_back(dirac_iso(c, CircleRotation{0.6180339887498949}));
  auto cfg = basic_config(std::move(fam));
  cfg.horizon = 12;
  cfg.checkpoint_every = 4;
  cfg.reference_points = 256;
  auto series = run_convergence(cfg);
  CHECK(series.metric == "w1");
  CHECK(series.reference_discretization == doctest::Approx(0.5 / 256));
  REQUIRE(series.records.size() == 3);
  // W1 from a point mass to the uniform reference is about a quarter turn
  for (const auto& r : series.records) CHECK(r.dist == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("exact mode prunes when asked and tracks support size") {
  auto c = Space::circle();
  MeasureFamily fam;
  std::vector<IsoMeasure::Atom> atoms = {{IsometryElement{CircleRotation{0.6180339887498949}}, 0.9},
                                         {IsometryElement{CircleRotation{0.3141592653589793}}, 0.1}};
  fam.members.push_back(IsoMeasure(c, atoms));
  auto cfg = basic_config(std::move(fam));
  cfg.horizon = 30;
  cfg.checkpoint_every = 30;
  cfg.prune_wmin = 1e-4;
  auto series = run_convergence(cfg);
  REQUIRE(series.records.size() == 1);
  // commuting rotations merge paths by their minority-step count, and the
  // prune threshold then truncates the binomial tail
  CHECK(series.records[0].support_size >= 8);
  CHECK(series.records[0].support_size <= 40);
}

TEST_CASE("particle mode approaches the invariant measure") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(8));
  auto cfg = basic_config(single(group_iso(s, {{0, 0.5}, {1, 0.5}})));
  cfg.mode = RunMode::Particles;
  cfg.particles = 10000;
  cfg.horizon = 60;
  cfg.checkpoint_every = 60;
  cfg.seed = 2718;
  auto series = run_convergence(cfg);
  REQUIRE(series.records.size() == 1);
  CHECK(series.records[0].dist < 0.08);
  CHECK(series.records[0].support_size == 8);
}

TEST_CASE("particle mode subsamples large continuous clouds") {
  // two non-commuting sphere rotations keep all particle trajectories distinct,
  // so the checkpoint cloud genuinely has 2000 support points before capping
  auto s = Space::sphere2();
  const double ang = std::acos(3.0 / 5.0);
  MeasureFamily fam;
  std::vector<IsoMeasure::Atom> atoms = {
      {IsometryElement{SphereRotation{Quat::from_axis_angle(1, 0, 0, ang)}}, 0.5},
      {IsometryElement{SphereRotation{Quat::from_axis_angle(0, 1, 0, ang)}}, 0.5}};
  fam.members.push_back(IsoMeasure(s, atoms));
  auto cfg = basic_config(std::move(fam));
  cfg.mode = RunMode::Particles;
  cfg.particles = 2000;
  cfg.horizon = 30;
  cfg.checkpoint_every = 30;
  cfg.subsample_cap = 500;
  cfg.seed = 11;
  auto series = run_convergence(cfg);
  REQUIRE(series.records.size() == 1);
  CHECK(series.records[0].subsample_size == 500);
  CHECK(series.records[0].support_size == 500);
}

TEST_CASE("config validation rejects out-of-range settings") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto good = basic_config(single(group_iso(s, {{1, 1.0}})));
  CHECK_NOTHROW(good.validate());

  auto bad = good;
  bad.horizon = 0;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.particles = 50;
  bad.mode = RunMode::Particles;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.epsilon = 0.0;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.prune_wmin = 1.0;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.checkpoint_every = 0;
  CHECK_THROWS(bad.validate());
  bad = good;
  bad.start = dirac_point(Space::circle(), SpacePoint::circle(0.0));
  CHECK_THROWS(bad.validate());  // start on a different space
}

TEST_CASE("window probe finds a contracting horizon for a mixing family") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(8));
  auto fam = single(group_iso(s, {{0, 0.5}, {1, 0.5}}));
  auto probe = probe_standing_assumption(fam, 0.5, 16, 424242, 64);
  CHECK(probe.satisfied);
  CHECK(probe.m >= 1);
  CHECK(probe.m <= 64);
  CHECK(probe.worst < 0.5);
  CHECK(probe.cap == 64);
  CHECK(static_cast<int>(probe.worst_by_m.size()) == probe.m);

  double fresh = revalidate_standing_assumption(fam, probe.m, 60, 7);
  CHECK(fresh < 0.5);
}

TEST_CASE("window probe reports failure for a rigid rotation family") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(8));
  auto fam = single(group_iso(s, {{1, 1.0}}));  // deterministic shift: TV never contracts
  auto probe = probe_standing_assumption(fam, 0.5, 8, 5, 16);
  CHECK(!probe.satisfied);
  CHECK(probe.worst >= 0.5);
  CHECK(probe.worst_by_m.size() == 16);
}

TEST_CASE("birkhoff averages of a deterministic cycle hit the exact ratio") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto cfg = basic_config(single(group_iso(s, {{1, 1.0}})));
  cfg.observable_id = "indicator:0";
  cfg.trials = 3;
  cfg.horizon = 402;
  std::vector<int> checkpoints = {4, 400, 402};
  auto rep = run_ergodic(cfg, checkpoints);
  CHECK(rep.reference_integral == doctest::Approx(0.25));
  REQUIRE(rep.averages.size() == 3);
  for (const auto& tr : rep.averages) {
    REQUIRE(tr.size() == 3);
    // y_k visits 0,1,2,3 cyclically from the identity
    CHECK(tr[0] == doctest::Approx(0.25));
    CHECK(tr[1] == doctest::Approx(0.25));
    CHECK(tr[2] == doctest::Approx(101.0 / 402));
  }
}

TEST_CASE("birkhoff averages along an irrational rotation settle fast") {
  auto c = Space::circle();
  MeasureFamily fam;
  fam.members.push_back(dirac_iso(c, CircleRotation{0.6180339887498949}));
  auto cfg = basic_config(std::move(fam));
  cfg.observable_id = "cos1";
  cfg.trials = 1;
  cfg.horizon = 1000;
  std::vector<int> checkpoints = {1000};
  auto rep = run_ergodic(cfg, checkpoints);
  CHECK(rep.reference_integral == 0.0);
  CHECK(std::abs(rep.averages[0][0]) < 0.01);
}

TEST_CASE("random walk averages concentrate near the reference integral") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(5));
  auto cfg = basic_config(single(group_iso(s, {{0, 0.5}, {1, 0.5}})));
  cfg.observable_id = "indicator:0";
  cfg.trials = 8;
  cfg.horizon = 400;
  cfg.seed = 31415;
  std::vector<int> checkpoints = {100, 400};
  auto rep = run_ergodic(cfg, checkpoints);
  CHECK(rep.reference_integral == doctest::Approx(0.2));
  double worst = 0;
  for (const auto& tr : rep.averages) worst = std::max(worst, std::abs(tr[1] - 0.2));
  CHECK(worst < 0.2);
  double mean = 0;
  for (const auto& tr : rep.averages) mean += tr[1];
  mean /= static_cast<double>(rep.averages.size());
  CHECK(std::abs(mean - 0.2) < 0.1);
}

TEST_CASE("ergodic runs validate their checkpoint grids") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto cfg = basic_config(single(group_iso(s, {{1, 1.0}})));
  cfg.observable_id = "one";
  std::vector<int> empty;
  CHECK_THROWS(run_ergodic(cfg, empty));
  std::vector<int> unsorted = {10, 5};
  CHECK_THROWS(run_ergodic(cfg, unsorted));
  std::vector<int> zero = {0, 5};
  CHECK_THROWS(run_ergodic(cfg, zero));
}

TEST_CASE("large deviation runs demand enough trials and a grid") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto cfg = basic_config(single(group_iso(s, {{0, 0.5}, {1, 0.5}})));
  cfg.observable_id = "indicator:0";
  cfg.trials = 200;
  cfg.n_grid = {10, 20};
  CHECK_THROWS(run_large_deviations(cfg));
  cfg.trials = 1000;
  cfg.n_grid = {};
  CHECK_THROWS(run_large_deviations(cfg));
}

TEST_CASE("exceedance probabilities fall along the grid") {
  auto s = Space::finite_group(FiniteGroupTable::cyclic(4));
  auto cfg = basic_config(single(group_iso(s, {{0, 0.5}, {1, 0.5}})));
  cfg.observable_id = "indicator:0";
  cfg.epsilon = 0.2;
  cfg.trials = 1000;
  cfg.seed = 99;
  cfg.n_grid = {5, 40, 160};
  auto rep = run_large_deviations(cfg);
  CHECK(rep.trials == 1000);
  CHECK(rep.n_grid == std::vector<int>{5, 40, 160});
  REQUIRE(rep.p_hat.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rep.p_hat[i] == doctest::Approx(rep.exceed_counts[i] / 1000.0));
    CHECK(rep.p_hat[i] >= 0.0);
    CHECK(rep.p_hat[i] <= 1.0);
  }
  CHECK(rep.p_hat[2] <= rep.p_hat[0]);
  if (!rep.degenerate) {
    CHECK(rep.slope < 0.0);
    CHECK(rep.r2 >= 0.0);
  }
}

TEST_CASE("word shares match a direct enumeration for short words") {
  auto s = Space::sphere2();
  IsometryElement A{SphereRotation{Quat::from_axis_angle(1, 0, 0, 0.9272952180016122)}};
  IsometryElement B{SphereRotation{Quat::from_axis_angle(0, 1, 0, 0.9272952180016122)}};
  auto x = SpacePoint::sphere(0, 0, 1);
  CapSpec cap;
  cap.ax = 0;
  cap.ay = 0;
  cap.az = 1;
  cap.cos_theta = 0.4;
  for (int n : {1, 3, 6}) {
    auto rep = run_sphere_equidistribution(s, A, B, x, n, cap);
    CHECK(rep.points == (std::uint64_t{1} << n));
    CHECK(rep.cap_area == doctest::Approx(0.3));

    std::uint64_t inside = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t word = 0; word < total; ++word) {
      auto p = x;
      for (int level = 0; level < n; ++level)
        p = apply(s, ((word >> level) & 1) ? B : A, p);
      double dot = p.coords[2];
      CHECK(std::abs(dot - cap.cos_theta) > 1e-9);  // boundary-safe comparison
      if (dot >= cap.cos_theta) ++inside;
    }
    CHECK(rep.share == doctest::Approx(static_cast<double>(inside) / static_cast<double>(total)));
  }
  CHECK_THROWS(run_sphere_equidistribution(s, A, B, x, 0, cap));
  CHECK_THROWS(run_sphere_equidistribution(s, A, B, x, 23, cap));
  CHECK_THROWS(run_sphere_equidistribution(Space::circle(), A, B, x, 3, cap));
}

TEST_CASE("alternating kernels oscillate without converging") {
  auto rep = run_stromberg(40, 20);
  REQUIRE(rep.supports.size() == 40);
  REQUIRE(rep.tv_to_haar.size() == 40);
  for (std::size_t k = 0; k < rep.supports.size(); ++k) {
    if (k % 2 == 0)
      CHECK(rep.supports[k] == std::vector<int>{1, 3});  // after odd steps
    else
      CHECK(rep.supports[k] == std::vector<int>{0, 5});  // after even steps
    CHECK(rep.tv_to_haar[k] == doctest::Approx(2.0 / 3));
  }
  for (std::size_t k = 1; k < rep.tv_successive.size(); ++k)
    CHECK(rep.tv_successive[k] == doctest::Approx(1.0));
  CHECK(rep.haar_gap == doctest::Approx(0.0));
  CHECK(rep.oscillation == doctest::Approx(1.0));
  CHECK(!rep.convergent);
  CHECK_THROWS(run_stromberg(1));
}

TEST_CASE("census rows match direct classification and the convergence verdict") {
  auto rep = run_ito_kawada_census(6, 2, 1234, 300, 60);
  CHECK(rep.violations == 0);
  CHECK(rep.witness_mismatches == 0);
  // groups of order <= 6: Z/1..Z/6, D2, D3, S3
  CHECK(rep.rows.size() == 9 * 2);

  std::map<std::string, FiniteGroupTable> by_name;
  for (auto& [name, table] : built_in_groups(6)) by_name.emplace(name, std::move(table));

  for (const auto& row : rep.rows) {
    REQUIRE(by_name.count(row.group) == 1);
    const auto& g = by_name.at(row.group);
    CHECK(row.order == g.order());
    CHECK(row.adapted == is_adapted(g, row.support));
    CHECK(row.coset_aperiodic == is_coset_aperiodic(g, row.support));
    CHECK(row.strictly_aperiodic == is_strictly_aperiodic(g, row.support));
    CHECK(row.converged == (row.tv_final < 1e-6));
    CHECK(row.ok == (row.converged == (row.adapted && row.strictly_aperiodic)));
    CHECK(row.ok);
    if (row.witness_count >= 0)
      CHECK((row.witness_count == 0) == row.coset_aperiodic);
  }
}

TEST_CASE("built-in group list covers cyclic, dihedral, and symmetric orders") {
  auto groups = built_in_groups(12);
  CHECK(groups.size() == 18);
  int cyclics = 0, dihedrals = 0, symmetrics = 0;
  for (const auto& [name, table] : groups) {
    CHECK(table.order() <= 12);
    if (name[0] == 'Z') ++cyclics;
    if (name[0] == 'D') ++dihedrals;
    if (name[0] == 'S') ++symmetrics;
  }
  CHECK(cyclics == 12);
  CHECK(dihedrals == 5);
  CHECK(symmetrics == 1);
}

TEST_CASE("random support measures are equal-weight subsets") {
  auto s = Space::finite_group(FiniteGroupTable::symmetric(3));
  auto rs = RngStream::derive(8, {8});
  for (int t = 0; t < 50; ++t) {
    auto mu = random_support_measure(s, rs);
    REQUIRE(mu.size() >= 1);
    REQUIRE(mu.size() <= 6);
    for (const auto& a : mu.atoms())
      CHECK(a.weight == doctest::Approx(1.0 / static_cast<double>(mu.size())));
  }
  CHECK_THROWS(random_support_measure(Space::circle(), rs));
}

TEST_CASE("support of iterated kernels fills the group exactly when unobstructed") {
  for (auto table : {FiniteGroupTable::cyclic(8), FiniteGroupTable::symmetric(3)}) {
    auto s = Space::finite_group(table);
    const int order = table.order();
    auto rs = RngStream::derive(21, {static_cast<std::uint64_t>(order)});
    for (int t = 0; t < 20; ++t) {
      auto mu = random_support_measure(s, rs);
      auto supp = support_indices(mu);
      bool adapted = is_adapted(table, supp);
      bool strict = is_strictly_aperiodic(table, supp);

      auto power = mu;
      bool reached_full = false;
      for (int n = 1; n <= 64 && !reached_full; ++n) {
        if (static_cast<int>(power.size()) == order) reached_full = true;
        if (n < 64) power = convolve(mu, power);
      }
      if (adapted && strict) {
        CHECK(reached_full);
      } else {
        CHECK(!reached_full);  // a trap confines every power's support
      }
    }
  }
}
