#include "isowalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "isowalk/kernels.hpp"
#include "isowalk/setdyn.hpp"

namespace isowalk {

namespace {
constexpr std::uint64_t kTagSchedule = 0x7363686564ULL;
constexpr std::uint64_t kTagInit = 0x696e6974ULL;
constexpr std::uint64_t kTagParticle = 0x70617274ULL;
constexpr std::uint64_t kTagSubsample = 0x737562ULL;
constexpr std::uint64_t kTagErgodic = 0x657267ULL;
constexpr std::uint64_t kTagLd = 0x6c64ULL;
constexpr std::uint64_t kTagProbePair = 0x7070ULL;
constexpr std::uint64_t kTagProbeWin = 0x7077ULL;
constexpr std::uint64_t kTagReval = 0x726576ULL;
constexpr std::uint64_t kTagCensus = 0x63656e73ULL;

int schedule_member(const MeasureFamily& family, int step, std::uint64_t seed) {
  RngStream rs = RngStream::derive(seed, {kTagSchedule, static_cast<std::uint64_t>(step)});
  return family.member_index(step, rs);
}

std::vector<double> member_weights(const IsoMeasure& mu) {
  std::vector<double> w;
  w.reserve(mu.size());
  for (const auto& a : mu.atoms()) w.push_back(a.weight);
  return w;
}

SpacePoint random_point(const Space& s, RngStream& rs) {
  switch (s.kind()) {
    case SpaceKind::Circle: return SpacePoint::circle(rs.uniform());
    case SpaceKind::Torus: {
      std::vector<double> c(static_cast<std::size_t>(s.dim()));
      for (auto& x : c) x = rs.uniform();
      return SpacePoint::torus(std::move(c));
    }
    case SpaceKind::Sphere2: {
      double z = rs.uniform(-1.0, 1.0);
      double t = rs.uniform(0.0, 2.0 * 3.14159265358979323846);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return SpacePoint::sphere(r * std::cos(t), r * std::sin(t), z);
    }
    default: return SpacePoint::finite(rs.uniform_int(s.finite_size()));
  }
}
}  // namespace

SpacePoint base_point(const Space& s) {
  switch (s.kind()) {
    case SpaceKind::Circle: return SpacePoint::circle(0.0);
    case SpaceKind::Torus:
      return SpacePoint::torus(std::vector<double>(static_cast<std::size_t>(s.dim()), 0.0));
    case SpaceKind::Sphere2: return SpacePoint::sphere(0.0, 0.0, 1.0);
    case SpaceKind::FiniteGroup: return SpacePoint::finite(s.group().identity());
    default: return SpacePoint::finite(0);
  }
}

PointMeasure invariant_reference(const Space& s, int reference_points) {
  if (s.is_finite()) {
    std::vector<PointMeasure::Atom> atoms;
    const int n = s.finite_size();
    for (int i = 0; i < n; ++i) atoms.push_back({SpacePoint::finite(i), 1.0 / n});
    return PointMeasure::normalized(s, std::move(atoms));
  }
  return reference_measure(s, reference_points);
}

void WalkConfig::validate() const {
  family.validate();
  if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (mode == RunMode::Particles && particles < 100)
    throw std::invalid_argument("config: particle count must be >= 100");
  if (checkpoint_every < 1) throw std::invalid_argument("config: checkpoint_every must be >= 1");
  if (reference_points < 1)
    throw std::invalid_argument("config: reference_points must be >= 1");
  if (!(epsilon > 0)) throw std::invalid_argument("config: epsilon must be positive");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (prune_wmin < 0 || prune_wmin >= 1)
    throw std::invalid_argument("config: prune_wmin must lie in [0,1)");
  if (subsample_cap < 10) throw std::invalid_argument("config: subsample_cap must be >= 10");
  if (start && !start->space().same_space(space()))
    throw std::invalid_argument("config: start measure is on a different space");
  for (int n : n_grid)
    if (n < 1) throw std::invalid_argument("config: n_grid entries must be >= 1");
}

namespace {
double series_distance(const PointMeasure& nu, const PointMeasure& ref, bool finite) {
  return finite ? tv_distance(nu, ref) : w1_distance(nu, ref);
}

double support_radius(const Space& s, const PointMeasure& nu,
                      const std::vector<SpacePoint>& probe) {
  std::vector<SpacePoint> pts;
  pts.reserve(nu.size());
  for (const auto& a : nu.atoms()) pts.push_back(a.element);
  return is_eps_dense(s, pts, probe, 0.0).covering_radius;
}

double reference_discretization(const Space& s, int n) {
  switch (s.kind()) {
    case SpaceKind::Circle: return 0.5 / n;
    case SpaceKind::Torus: return 0.5 / n;
    case SpaceKind::Sphere2: {
      auto pts = fibonacci_sphere(n);
      auto probe = fibonacci_sphere(4 * n + 1);
      return measured_covering_radius(s, pts, probe);
    }
    default: return 0.0;
  }
}
}  // namespace

ConvergenceSeries run_convergence(const WalkConfig& cfg) {
  cfg.validate();
  const Space& s = cfg.space();
  const bool finite = s.is_finite();
  const PointMeasure ref = invariant_reference(s, cfg.reference_points);
  std::vector<SpacePoint> probe;
  probe.reserve(ref.size());
  for (const auto& a : ref.atoms()) probe.push_back(a.element);

  ConvergenceSeries series;
  series.metric = finite ? "tv" : "w1";
  series.reference_discretization =
      finite ? 0.0 : reference_discretization(s, cfg.reference_points);

  const PointMeasure start = cfg.start ? *cfg.start : dirac_point(s, base_point(s));

  if (cfg.mode == RunMode::ExactConvolution) {
    PointMeasure nu = start;
    for (int k = 1; k <= cfg.horizon; ++k) {
      const IsoMeasure& mu = cfg.family.members[schedule_member(cfg.family, k, cfg.seed)];
      nu = convolve(mu, nu);
      if (cfg.prune_wmin > 0) nu = prune(nu, cfg.prune_wmin);
      if (k % cfg.checkpoint_every != 0 && k != cfg.horizon) continue;
      if (!finite && nu.size() > 5000)
        throw std::runtime_error(
            "run_convergence: exact support too large for W1; use particle mode or prune");
      ConvergenceRecord rec;
      rec.step = k;
      rec.dist = series_distance(nu, ref, finite);
      rec.support_radius = support_radius(s, nu, probe);
      rec.support_size = static_cast<int>(nu.size());
      series.records.push_back(rec);
    }
    return series;
  }

  RngStream init = RngStream::derive(cfg.seed, {kTagInit});
  ParticleCloud cloud = ParticleCloud::sample(start, cfg.particles, init);
  for (int k = 1; k <= cfg.horizon; ++k) {
    const IsoMeasure& mu = cfg.family.members[schedule_member(cfg.family, k, cfg.seed)];
    RngStream step = RngStream::derive(cfg.seed, {kTagParticle, static_cast<std::uint64_t>(k)});
    particle_step(cloud, mu, step);
    if (k % cfg.checkpoint_every != 0 && k != cfg.horizon) continue;
    ConvergenceRecord rec;
    rec.step = k;
    if (finite || cloud.size() <= cfg.subsample_cap) {
      PointMeasure emp = empirical_measure(cloud);
      rec.dist = series_distance(emp, ref, finite);
      rec.support_radius = support_radius(s, emp, probe);
      rec.support_size = static_cast<int>(emp.size());
    } else {
      RngStream sub = RngStream::derive(cfg.seed, {kTagSubsample, static_cast<std::uint64_t>(k)});
      PointMeasure emp = subsample_measure(cloud, cfg.subsample_cap, sub);
      rec.dist = series_distance(emp, ref, finite);
      rec.support_radius = support_radius(s, emp, probe);
      rec.support_size = static_cast<int>(emp.size());
      rec.subsample_size = static_cast<int>(emp.size());
    }
    series.records.push_back(rec);
  }
  return series;
}

namespace {
PointMeasure random_start_measure(const Space& s, RngStream& rs, bool dirac) {
  if (dirac) return dirac_point(s, random_point(s, rs));
  if (s.is_finite()) {
    const int n = s.finite_size();
    std::vector<int> picked;
    for (int i = 0; i < n; ++i)
      if (rs.uniform() < 0.5) picked.push_back(i);
    if (picked.empty()) picked.push_back(rs.uniform_int(n));
    std::vector<PointMeasure::Atom> atoms;
    for (int i : picked)
      atoms.push_back({SpacePoint::finite(i), 1.0 / static_cast<double>(picked.size())});
    return PointMeasure(s, std::move(atoms));
  }
  const int k = 1 + rs.uniform_int(4);
  std::vector<PointMeasure::Atom> atoms;
  for (int i = 0; i < k; ++i) atoms.push_back({random_point(s, rs), 1.0});
  return PointMeasure::normalized(s, std::move(atoms));
}

// the member-index sequences of every length-m schedule window
std::vector<std::vector<int>> schedule_windows(const MeasureFamily& family, int m,
                                               int sampled, std::uint64_t seed,
                                               std::uint64_t tag) {
  const int M = static_cast<int>(family.members.size());
  std::vector<std::vector<int>> wins;
  auto cyclic_like = [&](int period, auto index_at) {
    for (int o = 0; o < period; ++o) {
      std::vector<int> w(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) w[j] = index_at(o + j);
      wins.push_back(std::move(w));
    }
  };
  switch (family.schedule) {
    case Schedule::Cyclic:
      cyclic_like(M, [&](int t) { return t % M; });
      break;
    case Schedule::Scripted: {
      const int L = static_cast<int>(family.script.size());
      cyclic_like(L, [&](int t) { return family.script[t % L]; });
      break;
    }
    case Schedule::IidUniformOverFamily: {
      for (int c = 0; c < M; ++c) wins.push_back(std::vector<int>(static_cast<std::size_t>(m), c));
      for (int t = 0; t < sampled; ++t) {
        RngStream rs = RngStream::derive(
            seed, {tag, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)});
        std::vector<int> w(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) w[j] = rs.uniform_int(M);
        wins.push_back(std::move(w));
      }
      break;
    }
  }
  return wins;
}

IsoMeasure compose_window(const MeasureFamily& family, const std::vector<int>& w) {
  IsoMeasure acc = family.members[w[0]];
  for (std::size_t j = 1; j < w.size(); ++j) acc = convolve(family.members[w[j]], acc);
  return acc;
}

double pair_distance(const Space& s, const PointMeasure& a, const PointMeasure& b) {
  return s.is_finite() ? tv_distance(a, b) : w1_distance(a, b);
}
}  // namespace

StandingAssumptionProbe probe_standing_assumption(const MeasureFamily& family, double delta,
                                                  int trial_pairs, std::uint64_t seed,
                                                  int m_cap) {
  family.validate();
  if (!(delta > 0)) throw std::invalid_argument("probe: delta must be positive");
  if (trial_pairs < 1) throw std::invalid_argument("probe: need at least one trial pair");
  const Space& s = family.members[0].space();

  // the pair objective is jointly convex in (nu, nu2), so on finite spaces the
  // sup over all start pairs is attained at dirac pairs; enumerating those makes
  // the measured max exact and the returned m safe to revalidate on fresh draws
  std::vector<std::pair<PointMeasure, PointMeasure>> dirac_pairs;
  if (s.is_finite()) {
    const int n = s.finite_size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        dirac_pairs.emplace_back(dirac_point(s, SpacePoint::finite(i)),
                                 dirac_point(s, SpacePoint::finite(j)));
  }

  StandingAssumptionProbe out;
  out.cap = m_cap;
  for (int m = 1; m <= m_cap; ++m) {
    auto wins = schedule_windows(family, m, trial_pairs, seed, kTagProbeWin);
    std::vector<IsoMeasure> composed;
    composed.reserve(wins.size());
    for (const auto& w : wins) composed.push_back(compose_window(family, w));

    double worst = 0;
    if (s.is_finite()) {
      for (const auto& [nu, nu2] : dirac_pairs)
        for (const auto& w : composed)
          worst = std::max(worst, pair_distance(s, convolve(w, nu), convolve(w, nu2)));
    } else {
      for (int t = 0; t < trial_pairs; ++t) {
        RngStream rs = RngStream::derive(
            seed, {kTagProbePair, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)});
        bool dirac = (t % 2) == 0;
        PointMeasure nu = random_start_measure(s, rs, dirac);
        PointMeasure nu2 = random_start_measure(s, rs, dirac);
        for (const auto& w : composed)
          worst = std::max(worst, pair_distance(s, convolve(w, nu), convolve(w, nu2)));
      }
    }
    out.worst_by_m.push_back(worst);
    if (worst < delta) {
      out.m = m;
      out.worst = worst;
      out.satisfied = true;
      return out;
    }
    out.worst = worst;
  }
  out.m = m_cap;
  return out;
}

double revalidate_standing_assumption(const MeasureFamily& family, int m, int draws,
                                      std::uint64_t seed) {
  family.validate();
  if (m < 1) throw std::invalid_argument("revalidate: m must be >= 1");
  const Space& s = family.members[0].space();
  const int M = static_cast<int>(family.members.size());
  double worst = 0;
  for (int d = 0; d < draws; ++d) {
    RngStream rs = RngStream::derive(seed, {kTagReval, static_cast<std::uint64_t>(d)});
    std::vector<int> w(static_cast<std::size_t>(m));
    switch (family.schedule) {
      case Schedule::Cyclic: {
        int o = rs.uniform_int(M);
        for (int j = 0; j < m; ++j) w[j] = (o + j) % M;
        break;
      }
      case Schedule::Scripted: {
        const int L = static_cast<int>(family.script.size());
        int o = rs.uniform_int(L);
        for (int j = 0; j < m; ++j) w[j] = family.script[(o + j) % L];
        break;
      }
      case Schedule::IidUniformOverFamily:
        for (int j = 0; j < m; ++j) w[j] = rs.uniform_int(M);
        break;
    }
    IsoMeasure window = compose_window(family, w);
    PointMeasure nu = random_start_measure(s, rs, (d % 2) == 0);
    PointMeasure nu2 = random_start_measure(s, rs, (d % 2) == 0);
    worst = std::max(worst, pair_distance(s, convolve(window, nu), convolve(window, nu2)));
  }
  return worst;
}

namespace {
struct TrajectoryRunner {
  const WalkConfig& cfg;
  const Observable obs;
  std::vector<std::vector<double>> weights;  // per member

  explicit TrajectoryRunner(const WalkConfig& c)
      : cfg(c), obs(make_observable(c.space(), c.observable_id)) {
    for (const auto& mu : cfg.family.members) weights.push_back(member_weights(mu));
  }

  // Birkhoff sums of the observable along one trajectory, recorded at the
  // checkpoints; checkpoint value = (1/n) * sum_{k=0}^{n-1} phi(y_k)
  std::vector<double> run(int trial, std::span<const int> checkpoints,
                          std::uint64_t tag) const {
    const Space& s = cfg.space();
    SpacePoint y = base_point(s);
    if (cfg.start) {
      RngStream rs = RngStream::derive(cfg.seed, {tag, static_cast<std::uint64_t>(trial),
                                                  0xffffffffULL});
      std::vector<double> sw;
      for (const auto& a : cfg.start->atoms()) sw.push_back(a.weight);
      y = cfg.start->atoms()[rs.sample_index(sw)].element;
    }
    const int n_max = checkpoints.back();
    std::vector<double> out;
    out.reserve(checkpoints.size());
    double sum = obs.eval(y);
    std::size_t next = 0;
    for (int k = 1; k <= n_max; ++k) {
      if (checkpoints[next] == k) {
        out.push_back(sum / k);
        ++next;
        if (next == checkpoints.size()) break;
      }
      RngStream rs = RngStream::derive(
          cfg.seed, {tag, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(k)});
      int mi = cfg.family.member_index(k, rs);
      const IsoMeasure& mu = cfg.family.members[mi];
      y = apply(s, mu.atoms()[rs.sample_index(weights[mi])].element, y);
      sum += obs.eval(y);
    }
    return out;
  }
};
}  // namespace

ErgodicReport run_ergodic(const WalkConfig& cfg, std::span<const int> checkpoints) {
  cfg.validate();
  if (checkpoints.empty()) throw std::invalid_argument("run_ergodic: no checkpoints");
  for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i)
    if (checkpoints[i] >= checkpoints[i + 1])
      throw std::invalid_argument("run_ergodic: checkpoints must increase");
  if (checkpoints.front() < 1) throw std::invalid_argument("run_ergodic: checkpoints >= 1");

  TrajectoryRunner runner(cfg);
  ErgodicReport rep;
  rep.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  rep.reference_integral = runner.obs.reference_integral;
  rep.averages.reserve(static_cast<std::size_t>(cfg.trials));
  for (int t = 0; t < cfg.trials; ++t)
    rep.averages.push_back(runner.run(t, checkpoints, kTagErgodic));
  return rep;
}

LdReport run_large_deviations(const WalkConfig& cfg) {
  cfg.validate();
  if (cfg.trials < 1000)
    throw std::invalid_argument("run_large_deviations: at least 1000 trials required");
  if (cfg.n_grid.empty()) throw std::invalid_argument("run_large_deviations: empty n grid");
  std::vector<int> grid = cfg.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  TrajectoryRunner runner(cfg);
  LdReport rep;
  rep.epsilon = cfg.epsilon;
  rep.n_grid = grid;
  rep.trials = cfg.trials;
  rep.exceed_counts.assign(grid.size(), 0);
  const double ref = runner.obs.reference_integral;
  for (int t = 0; t < cfg.trials; ++t) {
    std::vector<double> avgs = runner.run(t, grid, kTagLd);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::fabs(avgs[i] - ref) > cfg.epsilon) ++rep.exceed_counts[i];
  }
  rep.p_hat.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    rep.p_hat[i] = static_cast<double>(rep.exceed_counts[i]) / cfg.trials;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (rep.exceed_counts[i] > 0) {
      xs.push_back(grid[i]);
      ys.push_back(std::log(rep.p_hat[i]));
    }
  if (xs.size() < 3) {
    rep.degenerate = true;
    return rep;
  }
  const std::size_t k = xs.size();
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  double rss = 0, tss = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double e = ys[i] - (rep.intercept + rep.slope * xs[i]);
    rss += e * e;
    tss += (ys[i] - my) * (ys[i] - my);
  }
  rep.slope_stderr = std::sqrt(rss / (k - 2) / sxx);
  rep.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
  return rep;
}

SphereShareReport run_sphere_equidistribution(const Space& s, const IsometryElement& A,
                                              const IsometryElement& B, const SpacePoint& x,
                                              int n, const CapSpec& cap) {
  if (s.kind() != SpaceKind::Sphere2)
    throw std::invalid_argument("sphere equidistribution: sphere space required");
  if (n < 1 || n > 22) throw std::invalid_argument("sphere equidistribution: n must be in [1,22]");
  check_isometry(s, A);
  check_isometry(s, B);
  check_point(s, x);
  double an = std::sqrt(cap.ax * cap.ax + cap.ay * cap.ay + cap.az * cap.az);
  if (!(an > 0)) throw std::invalid_argument("sphere equidistribution: zero cap axis");
  if (std::fabs(cap.cos_theta) > 1)
    throw std::invalid_argument("sphere equidistribution: cos_theta outside [-1,1]");

  double ra[9], rb[9];
  std::get<SphereRotation>(A).q.to_matrix(ra);
  std::get<SphereRotation>(B).q.to_matrix(rb);

  const std::size_t total = std::size_t{1} << n;
  std::vector<double> xs(total), ys(total), zs(total);
  xs[0] = x.coords[0];
  ys[0] = x.coords[1];
  zs[0] = x.coords[2];
  std::size_t count = 1;
  for (int level = 0; level < n; ++level) {
    std::copy_n(xs.begin(), count, xs.begin() + count);
    std::copy_n(ys.begin(), count, ys.begin() + count);
    std::copy_n(zs.begin(), count, zs.begin() + count);
    kernels::rotate3(xs.data(), ys.data(), zs.data(), count, ra);
    kernels::rotate3(xs.data() + count, ys.data() + count, zs.data() + count, count, rb);
    count *= 2;
  }

  SphereShareReport rep;
  rep.points = total;
  rep.cap_area = cap.area();
  std::size_t inside = kernels::count_dot3_ge(xs.data(), ys.data(), zs.data(), total,
                                              cap.ax / an, cap.ay / an, cap.az / an,
                                              cap.cos_theta);
  rep.share = static_cast<double>(inside) / static_cast<double>(total);
  return rep;
}

StrombergReport run_stromberg(int horizon, int window) {
  if (horizon < 2) throw std::invalid_argument("run_stromberg: horizon must be >= 2");
  Space s = Space::finite_group(FiniteGroupTable::symmetric(3));
  // lex one-line index order: identity 0, (23) 1, (12) 2, (123) 3, (132) 4, (13) 5
  IsoMeasure mu1(s, {{GroupShift{1}, 0.5}, {GroupShift{3}, 0.5}});
  IsoMeasure mu2(s, {{GroupShift{1}, 0.5}, {GroupShift{4}, 0.5}});

  PointMeasure haar = invariant_reference(s, 0);
  StrombergReport rep;
  PointMeasure nu = dirac_point(s, SpacePoint::finite(0));
  PointMeasure prev = nu;
  for (int k = 1; k <= horizon; ++k) {
    nu = convolve(k % 2 == 1 ? mu1 : mu2, nu);
    rep.supports.push_back(support_indices(nu));
    rep.tv_to_haar.push_back(tv_distance(nu, haar));
    rep.tv_successive.push_back(tv_distance(nu, prev));
    prev = nu;
  }
  const int w = std::min(window, horizon);
  double lo = rep.tv_to_haar.back(), hi = rep.tv_to_haar.back(), osc = 0;
  for (int k = horizon - w; k < horizon; ++k) {
    lo = std::min(lo, rep.tv_to_haar[k]);
    hi = std::max(hi, rep.tv_to_haar[k]);
    osc = std::max(osc, rep.tv_successive[k]);
  }
  rep.haar_gap = hi - lo;
  rep.oscillation = osc;
  rep.convergent = rep.tv_to_haar.back() < 1e-6;
  return rep;
}

std::vector<std::pair<std::string, FiniteGroupTable>> built_in_groups(int max_order) {
  std::vector<std::pair<std::string, FiniteGroupTable>> out;
  for (int n = 1; n <= max_order; ++n)
    out.push_back({"Z/" + std::to_string(n), FiniteGroupTable::cyclic(n)});
  for (int n = 2; 2 * n <= max_order && n <= 12; ++n)
    out.push_back({"D" + std::to_string(n), FiniteGroupTable::dihedral(n)});
  for (int n = 3, f = 6; n <= 5; ++n, f *= n)
    if (f <= max_order)
      out.push_back({"S" + std::to_string(n), FiniteGroupTable::symmetric(n)});
  return out;
}

IsoMeasure random_support_measure(const Space& s, RngStream& rs) {
  if (s.kind() != SpaceKind::FiniteGroup)
    throw std::invalid_argument("random_support_measure: finite group space required");
  const int n = s.group().order();
  std::vector<int> picked;
  for (int i = 0; i < n; ++i)
    if (rs.uniform() < 0.5) picked.push_back(i);
  if (picked.empty()) picked.push_back(rs.uniform_int(n));
  std::vector<IsoMeasure::Atom> atoms;
  for (int g : picked)
    atoms.push_back({GroupShift{g}, 1.0 / static_cast<double>(picked.size())});
  return IsoMeasure(s, std::move(atoms));
}

CensusReport run_ito_kawada_census(int max_order, int measures_per_group, std::uint64_t seed,
                                   int horizon, int window) {
  if (max_order < 1 || measures_per_group < 1 || horizon < window || window < 1)
    throw std::invalid_argument("census: bad arguments");
  CensusReport rep;
  auto groups = built_in_groups(max_order);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& [name, table] = groups[gi];
    Space s = Space::finite_group(table);
    PointMeasure haar = invariant_reference(s, 0);
    for (int mi = 0; mi < measures_per_group; ++mi) {
      RngStream rs = RngStream::derive(
          seed, {kTagCensus, static_cast<std::uint64_t>(gi), static_cast<std::uint64_t>(mi)});
      IsoMeasure mu = random_support_measure(s, rs);
      CensusRow row;
      row.group = name;
      row.order = table.order();
      row.measure_index = mi;
      row.support = support_indices(mu);
      row.adapted = is_adapted(table, row.support);
      row.coset_aperiodic = is_coset_aperiodic(table, row.support);
      row.strictly_aperiodic = is_strictly_aperiodic(table, row.support);

      PointMeasure nu = dirac_point(s, SpacePoint::finite(table.identity()));
      PointMeasure prev = nu;
      double osc = 0;
      for (int k = 1; k <= horizon; ++k) {
        nu = convolve(mu, nu);
        if (k > horizon - window) osc = std::max(osc, tv_distance(nu, prev));
        prev = nu;
      }
      row.tv_final = tv_distance(nu, haar);
      row.oscillation = osc;
      row.converged = row.tv_final < 1e-6;
      row.ok = row.converged == (row.adapted && row.strictly_aperiodic);

      if (table.order() <= 20) {
        std::vector<std::vector<int>> perms;
        for (int g : row.support) perms.push_back(table.left_shift_perm(g));
        WitnessScan scan = deterministic_image_witnesses(table.order(), perms);
        row.witness_count = static_cast<long>(scan.candidate_count);
        row.witness_ok = (row.witness_count == 0) == row.coset_aperiodic;
      }
      if (!row.ok) ++rep.violations;
      if (!row.witness_ok) ++rep.witness_mismatches;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace isowalk
