#include "isowalk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include "isowalk/kernels.hpp"

namespace isowalk {

namespace {
constexpr double kEqTol = 1e-12;
constexpr double kKeyWindow = 5e-12;
constexpr std::size_t kAtomCap = 1000000;
constexpr std::size_t kPairCap = 2000000;

// Neumaier-compensated accumulator. Mass checks stay at 1e-12 even for clouds
// of 10^5 equal-weight atoms, where a naive sum drifts past that.
struct WeightSum {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// primary sort keys for the window merge of continuous atoms

double point_key(const SpacePoint& p) { return p.coords[0]; }

bool point_lex_less(const SpacePoint& a, const SpacePoint& b) { return a.coords < b.coords; }

Quat canonical_sign(const Quat& q) {
  double vals[4] = {q.w, q.x, q.y, q.z};
  int arg = 0;
  for (int i = 1; i < 4; ++i)
    if (std::fabs(vals[i]) > std::fabs(vals[arg])) arg = i;
  if (vals[arg] < 0) return {-q.w, -q.x, -q.y, -q.z};
  return q;
}

IsometryElement canonical_iso(const IsometryElement& g) {
  if (const auto* r = std::get_if<SphereRotation>(&g))
    return SphereRotation{canonical_sign(r->q)};
  return g;
}

double iso_key(const IsometryElement& g) {
  if (const auto* c = std::get_if<CircleRotation>(&g)) return c->angle;
  if (const auto* t = std::get_if<TorusTranslation>(&g)) return t->shift[0];
  return std::get<SphereRotation>(g).q.w;
}

bool iso_lex_less(const IsometryElement& a, const IsometryElement& b) {
  if (const auto* c = std::get_if<CircleRotation>(&a))
    return c->angle < std::get<CircleRotation>(b).angle;
  if (const auto* t = std::get_if<TorusTranslation>(&a))
    return t->shift < std::get<TorusTranslation>(b).shift;
  const Quat& p = std::get<SphereRotation>(a).q;
  const Quat& q = std::get<SphereRotation>(b).q;
  return std::tie(p.w, p.x, p.y, p.z) < std::tie(q.w, q.x, q.y, q.z);
}

// whether the primary key lives on the circle (wrap pass needed)
bool key_wraps(SpaceKind k, bool is_point) {
  if (k == SpaceKind::Circle || k == SpaceKind::Torus) return true;
  (void)is_point;
  return false;
}

template <class T, class KeyFn, class EqFn, class LexFn>
std::vector<typename DiscreteMeasure<T>::Atom> merge_continuous(
    std::vector<typename DiscreteMeasure<T>::Atom> atoms, KeyFn key, EqFn eq, LexFn lex_less,
    bool wrap) {
  struct Tagged {
    double k;
    std::size_t i;
  };
  std::vector<Tagged> order(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) order[i] = {key(atoms[i].element), i};
  std::sort(order.begin(), order.end(), [&](const Tagged& a, const Tagged& b) {
    if (a.k != b.k) return a.k < b.k;
    if (lex_less(atoms[a.i].element, atoms[b.i].element)) return true;
    if (lex_less(atoms[b.i].element, atoms[a.i].element)) return false;
    return a.i < b.i;
  });

  struct Cluster {
    T rep;
    WeightSum weight;
    double k;
  };
  std::vector<Cluster> clusters;
  std::deque<std::size_t> open;  // indices into clusters, keys within the window
  for (const Tagged& t : order) {
    while (!open.empty() && t.k - clusters[open.front()].k > kKeyWindow) open.pop_front();
    bool merged = false;
    for (std::size_t ci : open) {
      if (eq(clusters[ci].rep, atoms[t.i].element)) {
        clusters[ci].weight.add(atoms[t.i].weight);
        merged = true;
        break;
      }
    }
    if (!merged) {
      WeightSum w;
      w.add(atoms[t.i].weight);
      clusters.push_back({atoms[t.i].element, w, t.k});
      open.push_back(clusters.size() - 1);
    }
  }

  if (wrap && clusters.size() > 1) {
    // clusters with keys on the two sides of the 0/1 seam can still be equal
    std::vector<std::size_t> low, high;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i].k <= 3e-12) low.push_back(i);
      if (clusters[i].k >= 1.0 - 3e-12) high.push_back(i);
    }
    std::vector<char> dead(clusters.size(), 0);
    for (std::size_t hi : high)
      for (std::size_t lo : low)
        if (!dead[hi] && eq(clusters[lo].rep, clusters[hi].rep)) {
          clusters[lo].weight.add(clusters[hi].weight.value());
          dead[hi] = 1;
        }
    std::vector<Cluster> kept;
    kept.reserve(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i)
      if (!dead[i]) kept.push_back(std::move(clusters[i]));
    clusters = std::move(kept);
  }

  std::vector<typename DiscreteMeasure<T>::Atom> out;
  out.reserve(clusters.size());
  for (auto& c : clusters) out.push_back({std::move(c.rep), c.weight.value()});
  return out;
}

std::vector<PointMeasure::Atom> merge_atoms(const Space& s,
                                            std::vector<PointMeasure::Atom> atoms) {
  if (s.is_finite()) {
    std::vector<WeightSum> acc(static_cast<std::size_t>(s.finite_size()));
    for (const auto& a : atoms) acc[a.element.index].add(a.weight);
    std::vector<PointMeasure::Atom> out;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (acc[i].value() != 0.0)
        out.push_back({SpacePoint::finite(static_cast<int>(i)), acc[i].value()});
    return out;
  }
  auto eq = [&s](const SpacePoint& a, const SpacePoint& b) { return points_equal(s, a, b); };
  return merge_continuous<SpacePoint>(std::move(atoms), point_key, eq, point_lex_less,
                                      key_wraps(s.kind(), true));
}

std::vector<IsoMeasure::Atom> merge_atoms(const Space& s, std::vector<IsoMeasure::Atom> atoms) {
  if (s.kind() == SpaceKind::FiniteGroup) {
    std::vector<WeightSum> acc(static_cast<std::size_t>(s.group().order()));
    for (const auto& a : atoms) acc[std::get<GroupShift>(a.element).element].add(a.weight);
    std::vector<IsoMeasure::Atom> out;
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (acc[i].value() != 0.0) out.push_back({GroupShift{static_cast<int>(i)}, acc[i].value()});
    return out;
  }
  if (s.kind() == SpaceKind::FiniteMetric) {
    std::map<std::vector<int>, WeightSum> acc;
    for (const auto& a : atoms) acc[std::get<MetricPermutation>(a.element).perm].add(a.weight);
    std::vector<IsoMeasure::Atom> out;
    for (auto& [perm, w] : acc) out.push_back({MetricPermutation{perm}, w.value()});
    return out;
  }
  for (auto& a : atoms) a.element = canonical_iso(a.element);
  auto eq = [&s](const IsometryElement& a, const IsometryElement& b) {
    return isometries_equal(s, a, b);
  };
  return merge_continuous<IsometryElement>(std::move(atoms), iso_key, eq, iso_lex_less,
                                           key_wraps(s.kind(), false));
}

void check_element(const Space& s, const SpacePoint& p) { check_point(s, p); }
void check_element(const Space& s, const IsometryElement& g) { check_isometry(s, g); }
}  // namespace

template <class T>
DiscreteMeasure<T>::DiscreteMeasure(Space space, std::vector<Atom> atoms)
    : space_(std::move(space)) {
  if (atoms.empty()) throw std::invalid_argument("measure: no atoms");
  if (atoms.size() > kAtomCap) throw std::runtime_error("measure: atom cap exceeded");
  for (const auto& a : atoms) {
    check_element(space_, a.element);
    if (!(a.weight > 0)) throw std::invalid_argument("measure: weights must be positive");
  }
  atoms_ = merge_atoms(space_, std::move(atoms));
  WeightSum sum;
  for (const auto& a : atoms_) sum.add(a.weight);
  if (std::fabs(sum.value() - 1.0) > 1e-12)
    throw std::invalid_argument("measure: weights must sum to 1");
}

template <class T>
DiscreteMeasure<T> DiscreteMeasure<T>::normalized(Space space, std::vector<Atom> atoms) {
  WeightSum sum;
  for (const auto& a : atoms) {
    if (!(a.weight > 0)) throw std::invalid_argument("measure: weights must be positive");
    sum.add(a.weight);
  }
  double total = sum.value();
  if (!(total > 0)) throw std::invalid_argument("measure: zero total mass");
  for (auto& a : atoms) a.weight /= total;
  return DiscreteMeasure<T>(std::move(space), std::move(atoms));
}

template class DiscreteMeasure<SpacePoint>;
template class DiscreteMeasure<IsometryElement>;

PointMeasure dirac_point(const Space& s, const SpacePoint& p) {
  return PointMeasure(s, {{p, 1.0}});
}

IsoMeasure dirac_iso(const Space& s, const IsometryElement& g) {
  return IsoMeasure(s, {{g, 1.0}});
}

PointMeasure pushforward(const IsometryElement& g, const PointMeasure& nu) {
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(nu.size());
  for (const auto& a : nu.atoms()) atoms.push_back({apply(nu.space(), g, a.element), a.weight});
  return PointMeasure(nu.space(), std::move(atoms));
}

PointMeasure convolve(const IsoMeasure& mu, const PointMeasure& nu) {
  if (!mu.space().same_space(nu.space()))
    throw std::invalid_argument("convolve: measures on different spaces");
  const Space& s = nu.space();
  if (!s.is_finite() && mu.size() * nu.size() > kPairCap)
    throw std::runtime_error("convolve: support product exceeds the atom cap");
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(mu.size() * nu.size());
  for (const auto& g : mu.atoms())
    for (const auto& x : nu.atoms())
      atoms.push_back({apply(s, g.element, x.element), g.weight * x.weight});
  // normalized() guards the tiny drift that accumulates over long chains
  return PointMeasure::normalized(s, std::move(atoms));
}

IsoMeasure convolve(const IsoMeasure& mu, const IsoMeasure& nu) {
  if (!mu.space().same_space(nu.space()))
    throw std::invalid_argument("convolve: measures on different spaces");
  const Space& s = mu.space();
  if (!s.is_finite() && mu.size() * nu.size() > kPairCap)
    throw std::runtime_error("convolve: support product exceeds the atom cap");
  std::vector<IsoMeasure::Atom> atoms;
  atoms.reserve(mu.size() * nu.size());
  for (const auto& g : mu.atoms())
    for (const auto& h : nu.atoms())
      atoms.push_back({compose(s, g.element, h.element), g.weight * h.weight});
  return IsoMeasure::normalized(s, std::move(atoms));
}

PointMeasure reference_measure(const Space& s, int n) {
  ReferenceAtoms ref = reference_measure_atoms(s, n);
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(ref.points.size());
  for (std::size_t i = 0; i < ref.points.size(); ++i)
    atoms.push_back({std::move(ref.points[i]), ref.weights[i]});
  return PointMeasure::normalized(s, std::move(atoms));
}

PointMeasure iso_to_point_measure(const IsoMeasure& mu) {
  if (mu.space().kind() != SpaceKind::FiniteGroup)
    throw std::invalid_argument("iso_to_point_measure: finite group space required");
  std::vector<PointMeasure::Atom> atoms;
  for (const auto& a : mu.atoms())
    atoms.push_back({SpacePoint::finite(std::get<GroupShift>(a.element).element), a.weight});
  return PointMeasure(mu.space(), std::move(atoms));
}

IsoMeasure point_to_iso_measure(const PointMeasure& nu) {
  if (nu.space().kind() != SpaceKind::FiniteGroup)
    throw std::invalid_argument("point_to_iso_measure: finite group space required");
  std::vector<IsoMeasure::Atom> atoms;
  for (const auto& a : nu.atoms()) atoms.push_back({GroupShift{a.element.index}, a.weight});
  return IsoMeasure(nu.space(), std::move(atoms));
}

std::vector<int> support_indices(const PointMeasure& nu) {
  if (!nu.space().is_finite())
    throw std::invalid_argument("support_indices: finite space required");
  std::vector<int> out;
  out.reserve(nu.size());
  for (const auto& a : nu.atoms()) out.push_back(a.element.index);
  return out;
}

std::vector<int> support_indices(const IsoMeasure& mu) {
  if (mu.space().kind() != SpaceKind::FiniteGroup)
    throw std::invalid_argument("support_indices: finite group space required");
  std::vector<int> out;
  out.reserve(mu.size());
  for (const auto& a : mu.atoms()) out.push_back(std::get<GroupShift>(a.element).element);
  return out;
}

template <class T>
DiscreteMeasure<T> prune(const DiscreteMeasure<T>& m, double w_min, PruneReport* report) {
  if (!(w_min >= 0)) throw std::invalid_argument("prune: w_min must be >= 0");
  std::vector<typename DiscreteMeasure<T>::Atom> kept;
  double dropped = 0;
  int dropped_atoms = 0;
  for (const auto& a : m.atoms()) {
    if (a.weight < w_min) {
      dropped += a.weight;
      ++dropped_atoms;
    } else {
      kept.push_back(a);
    }
  }
  if (kept.empty()) throw std::runtime_error("prune: all atoms below threshold");
  if (report) {
    report->dropped_mass = dropped;
    report->tv_bound = dropped / (1.0 - dropped);
    report->dropped_atoms = dropped_atoms;
  }
  return DiscreteMeasure<T>::normalized(m.space(), std::move(kept));
}

template PointMeasure prune<SpacePoint>(const PointMeasure&, double, PruneReport*);
template IsoMeasure prune<IsometryElement>(const IsoMeasure&, double, PruneReport*);

namespace {
template <class T, class EqFn>
bool measures_equal_impl(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b,
                         double weight_tol, EqFn eq) {
  if (!a.space().same_space(b.space())) return false;
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a.atoms()) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (eq(x.element, b.atoms()[j].element)) {
        if (std::fabs(x.weight - b.atoms()[j].weight) > weight_tol) return false;
        used[j] = 1;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}
}  // namespace

bool measures_equal(const PointMeasure& a, const PointMeasure& b, double weight_tol) {
  return measures_equal_impl(a, b, weight_tol, [&](const SpacePoint& x, const SpacePoint& y) {
    return points_equal(a.space(), x, y);
  });
}

bool measures_equal(const IsoMeasure& a, const IsoMeasure& b, double weight_tol) {
  return measures_equal_impl(
      a, b, weight_tol,
      [&](const IsometryElement& x, const IsometryElement& y) {
        return isometries_equal(a.space(), x, y);
      });
}

int MeasureFamily::member_index(int step, RngStream& rs) const {
  if (step < 1) throw std::invalid_argument("member_index: steps are 1-based");
  switch (schedule) {
    case Schedule::Cyclic: return (step - 1) % static_cast<int>(members.size());
    case Schedule::IidUniformOverFamily: return rs.uniform_int(static_cast<int>(members.size()));
    case Schedule::Scripted: return script[(step - 1) % script.size()];
  }
  throw std::logic_error("member_index");
}

void MeasureFamily::validate() const {
  if (members.empty()) throw std::invalid_argument("family: no members");
  for (const auto& m : members)
    if (!m.space().same_space(members[0].space()))
      throw std::invalid_argument("family: members on different spaces");
  if (schedule == Schedule::Scripted) {
    if (script.empty()) throw std::invalid_argument("family: scripted schedule without script");
    for (int i : script)
      if (i < 0 || i >= static_cast<int>(members.size()))
        throw std::invalid_argument("family: script index out of range");
  }
}

ParticleCloud ParticleCloud::from_point(const Space& s, const SpacePoint& p, int n) {
  if (n < 1) throw std::invalid_argument("particle cloud: n must be >= 1");
  check_point(s, p);
  ParticleCloud c(s, n);
  if (s.is_finite()) {
    c.idx_.assign(static_cast<std::size_t>(n), p.index);
  } else {
    c.coords_.resize(p.coords.size());
    for (std::size_t d = 0; d < p.coords.size(); ++d)
      c.coords_[d].assign(static_cast<std::size_t>(n), p.coords[d]);
  }
  return c;
}

ParticleCloud ParticleCloud::sample(const PointMeasure& nu, int n, RngStream& rs) {
  if (n < 1) throw std::invalid_argument("particle cloud: n must be >= 1");
  const Space& s = nu.space();
  std::vector<double> w;
  w.reserve(nu.size());
  for (const auto& a : nu.atoms()) w.push_back(a.weight);
  ParticleCloud c(s, n);
  if (s.is_finite())
    c.idx_.resize(static_cast<std::size_t>(n));
  else
    c.coords_.assign(nu.atoms()[0].element.coords.size(),
                     std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const SpacePoint& p = nu.atoms()[rs.sample_index(w)].element;
    if (s.is_finite())
      c.idx_[i] = p.index;
    else
      for (std::size_t d = 0; d < p.coords.size(); ++d) c.coords_[d][i] = p.coords[d];
  }
  return c;
}

SpacePoint ParticleCloud::point_at(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("particle index");
  if (space_.is_finite()) return SpacePoint::finite(idx_[i]);
  SpacePoint p;
  p.coords.resize(coords_.size());
  for (std::size_t d = 0; d < coords_.size(); ++d) p.coords[d] = coords_[d][i];
  return p;
}

void particle_step(ParticleCloud& cloud, const IsoMeasure& mu, RngStream& rs) {
  if (!cloud.space().same_space(mu.space()))
    throw std::invalid_argument("particle_step: measure on a different space");
  const Space& s = cloud.space();
  const int n = cloud.size();
  std::vector<double> w;
  w.reserve(mu.size());
  for (const auto& a : mu.atoms()) w.push_back(a.weight);
  std::vector<int> choice(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) choice[i] = rs.sample_index(w);

  if (s.is_finite()) {
    auto& idx = cloud.indices();
    if (s.kind() == SpaceKind::FiniteGroup) {
      const FiniteGroupTable& t = s.group();
      for (int i = 0; i < n; ++i)
        idx[i] = t.mul(std::get<GroupShift>(mu.atoms()[choice[i]].element).element, idx[i]);
    } else {
      for (int i = 0; i < n; ++i)
        idx[i] = std::get<MetricPermutation>(mu.atoms()[choice[i]].element).perm[idx[i]];
    }
    return;
  }

  // continuous kinds: group particles by choice and run the batch kernels
  std::vector<std::vector<int>> buckets(mu.size());
  for (int i = 0; i < n; ++i) buckets[choice[i]].push_back(i);
  auto& coords = cloud.coords();
  std::vector<double> bx, by, bz;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const auto& members = buckets[a];
    if (members.empty()) continue;
    const IsometryElement& g = mu.atoms()[a].element;
    if (s.kind() == SpaceKind::Sphere2) {
      double r[9];
      std::get<SphereRotation>(g).q.to_matrix(r);
      bx.resize(members.size());
      by.resize(members.size());
      bz.resize(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        bx[k] = coords[0][members[k]];
        by[k] = coords[1][members[k]];
        bz[k] = coords[2][members[k]];
      }
      kernels::rotate3(bx.data(), by.data(), bz.data(), members.size(), r);
      for (std::size_t k = 0; k < members.size(); ++k) {
        double norm = std::sqrt(bx[k] * bx[k] + by[k] * by[k] + bz[k] * bz[k]);
        coords[0][members[k]] = bx[k] / norm;
        coords[1][members[k]] = by[k] / norm;
        coords[2][members[k]] = bz[k] / norm;
      }
    } else {
      const double* shift = s.kind() == SpaceKind::Circle
                                ? &std::get<CircleRotation>(g).angle
                                : std::get<TorusTranslation>(g).shift.data();
      bx.resize(members.size());
      for (std::size_t d = 0; d < coords.size(); ++d) {
        for (std::size_t k = 0; k < members.size(); ++k) bx[k] = coords[d][members[k]];
        kernels::wrap01_add(bx.data(), members.size(), shift[d]);
        for (std::size_t k = 0; k < members.size(); ++k) coords[d][members[k]] = bx[k];
      }
    }
  }
}

PointMeasure empirical_measure(const ParticleCloud& cloud) {
  std::vector<PointMeasure::Atom> atoms;
  const double w = 1.0 / cloud.size();
  atoms.reserve(static_cast<std::size_t>(cloud.size()));
  for (int i = 0; i < cloud.size(); ++i) atoms.push_back({cloud.point_at(i), w});
  return PointMeasure::normalized(cloud.space(), std::move(atoms));
}

PointMeasure subsample_measure(const ParticleCloud& cloud, int k, RngStream& rs) {
  if (k < 1) throw std::invalid_argument("subsample: k must be >= 1");
  const int n = cloud.size();
  if (k >= n) return empirical_measure(cloud);
  // partial fisher-yates over the index range
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<PointMeasure::Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(k));
  const double w = 1.0 / k;
  for (int i = 0; i < k; ++i) {
    int j = i + rs.uniform_int(n - i);
    std::swap(idx[i], idx[j]);
    atoms.push_back({cloud.point_at(idx[i]), w});
  }
  return PointMeasure::normalized(cloud.space(), std::move(atoms));
}

}  // namespace isowalk
