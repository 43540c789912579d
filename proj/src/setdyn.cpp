#include "isowalk/setdyn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "isowalk/rng.hpp"

namespace isowalk {

namespace {
std::uint64_t bits_of(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

std::uint64_t net_hash(const Space& s, const std::vector<SpacePoint>& pts, double radius) {
  std::uint64_t h = hash_combine(0x6e657400ULL, static_cast<std::uint64_t>(s.kind()));
  h = hash_combine(h, pts.size());
  h = hash_combine(h, bits_of(radius));
  for (const auto& p : pts) {
    if (p.index >= 0) h = hash_combine(h, static_cast<std::uint64_t>(p.index));
    for (double c : p.coords) h = hash_combine(h, bits_of(c));
  }
  return h;
}

int nearest_net_index(const Net& net, const SpacePoint& p, double* err) {
  int best = 0;
  double bd = distance(net.space, net.points[0], p);
  for (int i = 1; i < static_cast<int>(net.points.size()); ++i) {
    double d = distance(net.space, net.points[i], p);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  if (err) *err = bd;
  return best;
}

int exact_net_index(const Net& net, const SpacePoint& p) {
  for (int i = 0; i < static_cast<int>(net.points.size()); ++i)
    if (points_equal(net.space, net.points[i], p)) return i;
  return -1;
}

double member_min_dist(const Net& net, const std::vector<int>& members, const SpacePoint& p) {
  double best = distance(net.space, net.points[members[0]], p);
  for (std::size_t k = 1; k < members.size(); ++k)
    best = std::min(best, distance(net.space, net.points[members[k]], p));
  return best;
}
}  // namespace

std::shared_ptr<const Net> make_net(const Space& s, std::vector<SpacePoint> points,
                                    double covering_radius) {
  if (points.empty()) throw std::invalid_argument("net: no points");
  if (covering_radius < 0) throw std::invalid_argument("net: negative covering radius");
  for (const auto& p : points) check_point(s, p);
  auto net = std::make_shared<Net>(Net{s, std::move(points), covering_radius, 0});
  net->id = net_hash(s, net->points, covering_radius);
  return net;
}

std::shared_ptr<const Net> net_from_reference(const Space& s, double eps) {
  ReferenceNet rn = reference_net(s, eps);
  return make_net(s, std::move(rn.points), rn.covering_radius);
}

std::shared_ptr<const Net> net_all_points(const Space& s) {
  if (!s.is_finite()) throw std::invalid_argument("net_all_points: finite space required");
  return make_net(s, all_finite_points(s), 0.0);
}

std::shared_ptr<const Net> net_circle_grid(const Space& s, int n) {
  if (s.kind() != SpaceKind::Circle) throw std::invalid_argument("net_circle_grid: circle required");
  if (n < 1) throw std::invalid_argument("net_circle_grid: n must be >= 1");
  std::vector<SpacePoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pts.push_back(SpacePoint::circle(static_cast<double>(k) / n));
  return make_net(s, std::move(pts), 0.5 / n);
}

std::shared_ptr<const Net> net_torus_grid(const Space& s, int per_axis) {
  if (s.kind() != SpaceKind::Torus) throw std::invalid_argument("net_torus_grid: torus required");
  if (per_axis < 1) throw std::invalid_argument("net_torus_grid: per_axis must be >= 1");
  std::vector<SpacePoint> pts = torus_grid(s.dim(), per_axis);
  return make_net(s, std::move(pts), 0.5 / per_axis);
}

NetSet::NetSet(std::shared_ptr<const Net> net, std::vector<int> members)
    : net_(std::move(net)), members_(std::move(members)) {
  if (!net_) throw std::invalid_argument("net set: null net");
  if (members_.empty()) throw std::invalid_argument("net set: empty member list");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.front() < 0 || members_.back() >= static_cast<int>(net_->points.size()))
    throw std::invalid_argument("net set: member index out of range");
}

bool NetSet::contains(int idx) const {
  return std::binary_search(members_.begin(), members_.end(), idx);
}

bool same_net(const NetSet& a, const NetSet& b) {
  return a.net_ptr() == b.net_ptr() || a.net().id == b.net().id;
}

std::optional<NetSet> complement_of(const NetSet& a) {
  std::vector<int> rest;
  const int n = static_cast<int>(a.net().points.size());
  rest.reserve(static_cast<std::size_t>(n) - a.members().size());
  for (int i = 0; i < n; ++i)
    if (!a.contains(i)) rest.push_back(i);
  if (rest.empty()) return std::nullopt;
  return NetSet(a.net_ptr(), std::move(rest));
}

double asym_D(const NetSet& a, const NetSet& b) {
  if (!same_net(a, b)) throw std::invalid_argument("asym_D: sets on different nets");
  const Net& net = a.net();
  double worst = 0;
  for (int bi : b.members())
    worst = std::max(worst, member_min_dist(net, a.members(), net.points[bi]));
  return worst;
}

double hausdorff(const NetSet& a, const NetSet& b) {
  return std::max(asym_D(a, b), asym_D(b, a));
}

namespace {
// image of a net set under one isometry with nearest-point re-projection
std::vector<int> projected_image(const NetSet& a, const IsometryElement& g, double* proj_err) {
  const Net& net = a.net();
  std::vector<int> img;
  img.reserve(a.members().size());
  for (int ai : a.members()) {
    double err = 0;
    img.push_back(nearest_net_index(net, apply(net.space, g, net.points[ai]), &err));
    if (proj_err) *proj_err = std::max(*proj_err, err);
  }
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

double asym_D_members(const Net& net, const std::vector<int>& a, const std::vector<int>& b) {
  double worst = 0;
  for (int bi : b) worst = std::max(worst, member_min_dist(net, a, net.points[bi]));
  return worst;
}
}  // namespace

PseudoHResult pseudo_H(const NetSet& a, const NetSet& b,
                       std::span<const IsometryElement> group_elements) {
  if (!same_net(a, b)) throw std::invalid_argument("pseudo_H: sets on different nets");
  if (group_elements.empty()) throw std::invalid_argument("pseudo_H: empty group list");
  const Space& s = a.net().space;
  bool has_id = false;
  for (const auto& g : group_elements) {
    if (isometries_equal(s, g, identity_isometry(s))) has_id = true;
    IsometryElement gi = inverse(s, g);
    bool inv_listed = false;
    for (const auto& h : group_elements)
      if (isometries_equal(s, gi, h)) {
        inv_listed = true;
        break;
      }
    if (!inv_listed) throw std::invalid_argument("pseudo_H: group list not inverse-closed");
  }
  if (!has_id) throw std::invalid_argument("pseudo_H: group list must contain the identity");

  PseudoHResult res;
  const Net& net = a.net();
  double fwd = std::numeric_limits<double>::infinity();
  double bwd = std::numeric_limits<double>::infinity();
  for (const auto& g : group_elements) {
    fwd = std::min(fwd, asym_D_members(net, projected_image(a, g, &res.projection_error),
                                       b.members()));
    bwd = std::min(bwd, asym_D_members(net, projected_image(b, g, &res.projection_error),
                                       a.members()));
  }
  res.value = std::max(fwd, bwd);
  return res;
}

std::optional<NetSet> t_mu(const NetSet& a, std::span<const IsometryElement> supp) {
  if (supp.empty()) throw std::invalid_argument("t_mu: empty support");
  const Net& net = a.net();
  std::vector<int> acc;
  bool first = true;
  for (const auto& g : supp) {
    check_isometry(net.space, g);
    std::vector<int> img;
    img.reserve(a.members().size());
    for (int ai : a.members()) {
      int j = exact_net_index(net, apply(net.space, g, net.points[ai]));
      if (j < 0)
        throw std::invalid_argument("t_mu: isometry does not map the net into itself");
      img.push_back(j);
    }
    std::sort(img.begin(), img.end());
    if (first) {
      acc = std::move(img);
      first = false;
    } else {
      std::vector<int> next;
      std::set_intersection(acc.begin(), acc.end(), img.begin(), img.end(),
                            std::back_inserter(next));
      acc = std::move(next);
    }
    if (acc.empty()) return std::nullopt;
  }
  return NetSet(a.net_ptr(), std::move(acc));
}

WidePartition eps_wide_partition(const std::shared_ptr<const Net>& net, double eps) {
  if (!net) throw std::invalid_argument("eps_wide_partition: null net");
  if (!(eps > 0)) throw std::invalid_argument("eps_wide_partition: eps must be positive");
  if (net->covering_radius > eps / 6)
    throw std::invalid_argument("eps_wide_partition: net covering radius exceeds eps/6");
  const Space& s = net->space;
  const int n = static_cast<int>(net->points.size());

  // maximal eps-separated center set, then nearest-center cells; every cell
  // sits inside ball(center, eps) and swallows the eps/3 net-ball around its center
  std::vector<int> centers;
  for (int i = 0; i < n; ++i) {
    bool separated = true;
    for (int c : centers)
      if (distance(s, net->points[i], net->points[c]) < eps) {
        separated = false;
        break;
      }
    if (separated) centers.push_back(i);
  }

  // Exact distance ties are ordered by forward-wrap displacement so symmetric
  // grids split into equal half-open cells (e.g. four length-eps circle arcs)
  // instead of leaking a boundary point to one side.
  auto forward_disp = [&](const SpacePoint& p, const SpacePoint& c) {
    std::vector<double> out;
    if (s.kind() == SpaceKind::Circle || s.kind() == SpaceKind::Torus) {
      out.reserve(p.coords.size());
      for (std::size_t a = 0; a < p.coords.size(); ++a) {
        double d = c.coords[a] - p.coords[a];
        d -= std::floor(d);
        out.push_back(d);
      }
    }
    return out;
  };

  std::vector<std::vector<int>> cells(centers.size());
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bd = distance(s, net->points[i], net->points[centers[0]]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
      double d = distance(s, net->points[i], net->points[centers[c]]);
      if (d < bd || (d == bd && forward_disp(net->points[i], net->points[centers[c]]) <
                                    forward_disp(net->points[i], net->points[centers[best]]))) {
        bd = d;
        best = static_cast<int>(c);
      }
    }
    cells[best].push_back(i);
  }

  WidePartition part;
  part.eps = eps;
  part.centers = centers;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const SpacePoint& center = net->points[centers[c]];
    for (int i : cells[c])
      if (distance(s, net->points[i], center) > eps)
        throw std::runtime_error("eps_wide_partition: cell " + std::to_string(c) +
                                 " leaks outside its eps ball");
    for (int i = 0; i < n; ++i)
      if (distance(s, net->points[i], center) <= eps / 3 &&
          !std::binary_search(cells[c].begin(), cells[c].end(), i))
        throw std::runtime_error("eps_wide_partition: cell " + std::to_string(c) +
                                 " misses its eps/3 net ball");
    part.cells.emplace_back(net, std::move(cells[c]));
  }
  return part;
}

DensityResult is_eps_dense(const NetSet& s, double eps) {
  DensityResult res;
  const Net& net = s.net();
  for (const auto& p : net.points)
    res.covering_radius = std::max(res.covering_radius, member_min_dist(net, s.members(), p));
  res.dense = res.covering_radius <= eps;
  return res;
}

DensityResult is_eps_dense(const Space& s, std::span<const SpacePoint> members,
                           std::span<const SpacePoint> probe, double eps) {
  if (members.empty()) throw std::invalid_argument("is_eps_dense: empty set");
  DensityResult res;
  for (const auto& p : probe) {
    double best = distance(s, members[0], p);
    for (std::size_t k = 1; k < members.size(); ++k)
      best = std::min(best, distance(s, members[k], p));
    res.covering_radius = std::max(res.covering_radius, best);
  }
  res.dense = res.covering_radius <= eps;
  return res;
}

bool contains_net_ball(const NetSet& s, double eps) {
  const Net& net = s.net();
  const int n = static_cast<int>(net.points.size());
  for (int c : s.members()) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (distance(net.space, net.points[i], net.points[c]) <= eps && !s.contains(i)) ok = false;
    if (ok) return true;
  }
  return false;
}

namespace {
bool in_eps_class(const NetSet& a, double eps) {
  if (!contains_net_ball(a, eps)) return false;
  std::optional<NetSet> rest = complement_of(a);
  return rest && contains_net_ball(*rest, eps);
}
}  // namespace

SeparationProbe separation_probe(const NetSet& a0, const MeasureFamily& family, int steps,
                                 std::span<const IsometryElement> group_elements, double eps,
                                 RngStream rs) {
  family.validate();
  if (steps < 1) throw std::invalid_argument("separation_probe: steps must be >= 1");
  SeparationProbe probe;
  NetSet cur = a0;
  for (int k = 1; k <= steps; ++k) {
    const IsoMeasure& mu = family.members[family.member_index(k, rs)];
    std::vector<IsometryElement> supp;
    supp.reserve(mu.size());
    for (const auto& atom : mu.atoms()) supp.push_back(atom.element);
    std::optional<NetSet> next = t_mu(cur, supp);
    if (!next) {
      probe.first_empty_step = k;
      break;
    }
    probe.h_values.push_back(pseudo_H(*next, cur, group_elements).value);
    probe.sizes.push_back(next->size());
    if (probe.first_exit_step < 0 && !in_eps_class(*next, eps)) probe.first_exit_step = k;
    cur = *next;
  }
  return probe;
}

std::vector<IsometryElement> full_isometry_list(const Space& s) {
  std::vector<IsometryElement> out;
  if (s.kind() == SpaceKind::FiniteGroup) {
    for (int g = 0; g < s.group().order(); ++g) out.push_back(GroupShift{g});
    return out;
  }
  if (s.kind() == SpaceKind::FiniteMetric) {
    const int n = s.finite_size();
    if (n > 10) throw std::invalid_argument("full_isometry_list: metric space too large");
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto dist = [&](int i, int j) {
      return distance(s, SpacePoint::finite(i), SpacePoint::finite(j));
    };
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == n) {
        out.push_back(MetricPermutation{perm});
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (used[v]) continue;
        bool ok = true;
        for (int j = 0; j < pos && ok; ++j)
          if (dist(perm[j], v) != dist(j, pos)) ok = false;
        if (!ok) continue;
        used[v] = 1;
        perm[pos] = v;
        self(self, pos + 1);
        used[v] = 0;
      }
    };
    rec(rec, 0);
    return out;
  }
  throw std::invalid_argument("full_isometry_list: finite kinds only");
}

std::vector<IsometryElement> grid_rotations(int n) {
  if (n < 1) throw std::invalid_argument("grid_rotations: n must be >= 1");
  std::vector<IsometryElement> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(CircleRotation{static_cast<double>(k) / n});
  return out;
}

std::vector<IsometryElement> grid_translations(int per_axis, int dim) {
  if (per_axis < 1 || dim < 1) throw std::invalid_argument("grid_translations: bad arguments");
  double total = std::pow(static_cast<double>(per_axis), dim);
  if (total > 200000) throw std::invalid_argument("grid_translations: too many elements");
  std::vector<IsometryElement> out;
  std::vector<int> digits(static_cast<std::size_t>(dim), 0);
  while (true) {
    std::vector<double> shift(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) shift[d] = static_cast<double>(digits[d]) / per_axis;
    out.push_back(TorusTranslation{shift});
    int d = 0;
    while (d < dim && ++digits[d] == per_axis) digits[d++] = 0;
    if (d == dim) break;
  }
  return out;
}

}  // namespace isowalk
