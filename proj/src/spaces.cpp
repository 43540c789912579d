#include "isowalk/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isowalk/kernels.hpp"

namespace isowalk {

namespace {
constexpr double kEqTol = 1e-12;

double wrap01(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;
  return y;
}

double circle_dist(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}
}  // namespace

std::string kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Torus: return "torus";
    case SpaceKind::Sphere2: return "sphere2";
    case SpaceKind::FiniteGroup: return "finite_group";
    case SpaceKind::FiniteMetric: return "finite_metric";
  }
  return "?";
}

Quat Quat::normalized() const {
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (n < 1e-300) throw std::invalid_argument("quaternion: zero norm");
  return {w / n, x / n, y / n, z / n};
}

Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

void Quat::rotate(double& px, double& py, double& pz) const {
  // p' = p + 2 v x (v x p + w p), v = (x,y,z)
  double cx = y * pz - z * py + w * px;
  double cy = z * px - x * pz + w * py;
  double cz = x * py - y * px + w * pz;
  px += 2.0 * (y * cz - z * cy);
  py += 2.0 * (z * cx - x * cz);
  pz += 2.0 * (x * cy - y * cx);
}

void Quat::to_matrix(double r[9]) const {
  r[0] = 1 - 2 * (y * y + z * z);
  r[1] = 2 * (x * y - w * z);
  r[2] = 2 * (x * z + w * y);
  r[3] = 2 * (x * y + w * z);
  r[4] = 1 - 2 * (x * x + z * z);
  r[5] = 2 * (y * z - w * x);
  r[6] = 2 * (x * z - w * y);
  r[7] = 2 * (y * z + w * x);
  r[8] = 1 - 2 * (x * x + y * y);
}

Quat Quat::from_axis_angle(double ax, double ay, double az, double angle) {
  double n = std::sqrt(ax * ax + ay * ay + az * az);
  if (n < 1e-300) throw std::invalid_argument("from_axis_angle: zero axis");
  double s = std::sin(angle / 2) / n;
  return Quat{std::cos(angle / 2), ax * s, ay * s, az * s};
}

double Quat::angle() const {
  double v = std::sqrt(x * x + y * y + z * z);
  return 2.0 * std::atan2(v, std::fabs(w));
}

double relative_rotation_angle(const Quat& a, const Quat& b) {
  return (a.conjugate() * b).angle();
}

Space Space::circle() { return Space(SpaceKind::Circle, 1); }

Space Space::torus(int dim) {
  if (dim < 1) throw std::invalid_argument("torus: dimension must be >= 1");
  return Space(SpaceKind::Torus, dim);
}

Space Space::sphere2() { return Space(SpaceKind::Sphere2, 2); }

Space Space::finite_group(FiniteGroupTable table) {
  Space s(SpaceKind::FiniteGroup, 0);
  s.table_ = std::make_shared<const FiniteGroupTable>(std::move(table));
  return s;
}

Space Space::finite_metric(std::vector<std::vector<double>> dist) {
  int n = static_cast<int>(dist.size());
  if (n == 0) throw std::invalid_argument("finite_metric: empty matrix");
  if (n > 1024) throw std::invalid_argument("finite_metric: too many points");
  for (const auto& row : dist)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("finite_metric: matrix not square");
  for (int i = 0; i < n; ++i) {
    if (dist[i][i] != 0.0) throw std::invalid_argument("finite_metric: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (dist[i][j] < 0) throw std::invalid_argument("finite_metric: negative distance");
      if (dist[i][j] != dist[j][i]) throw std::invalid_argument("finite_metric: not symmetric");
      if (i != j && dist[i][j] == 0.0)
        throw std::invalid_argument("finite_metric: distinct points at distance 0");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (dist[i][j] > dist[i][k] + dist[k][j] + 1e-12)
          throw std::invalid_argument("finite_metric: triangle inequality fails");
  Space s(SpaceKind::FiniteMetric, 0);
  s.dist_ = std::make_shared<const std::vector<std::vector<double>>>(std::move(dist));
  return s;
}

int Space::finite_size() const {
  if (kind_ == SpaceKind::FiniteGroup) return table_->order();
  if (kind_ == SpaceKind::FiniteMetric) return static_cast<int>(dist_->size());
  throw std::invalid_argument("finite_size: continuous space");
}

double Space::diameter() const {
  switch (kind_) {
    case SpaceKind::Circle:
    case SpaceKind::Torus: return 0.5;
    case SpaceKind::Sphere2: return M_PI;
    case SpaceKind::FiniteGroup: return table_->order() > 1 ? 1.0 : 0.0;
    case SpaceKind::FiniteMetric: {
      double m = 0;
      for (const auto& row : *dist_)
        for (double v : row) m = std::max(m, v);
      return m;
    }
  }
  return 0;
}

const FiniteGroupTable& Space::group() const {
  if (kind_ != SpaceKind::FiniteGroup) throw std::invalid_argument("group(): wrong kind");
  return *table_;
}

const std::vector<std::vector<double>>& Space::metric_matrix() const {
  if (kind_ != SpaceKind::FiniteMetric)
    throw std::invalid_argument("metric_matrix(): wrong kind");
  return *dist_;
}

bool Space::same_space(const Space& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case SpaceKind::Circle:
    case SpaceKind::Sphere2: return true;
    case SpaceKind::Torus: return dim_ == other.dim_;
    case SpaceKind::FiniteGroup:
      return table_ == other.table_ || table_->rows() == other.table_->rows();
    case SpaceKind::FiniteMetric: return dist_ == other.dist_ || *dist_ == *other.dist_;
  }
  return false;
}

SpacePoint SpacePoint::circle(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("circle point: not finite");
  SpacePoint p;
  p.coords = {wrap01(x)};
  return p;
}

SpacePoint SpacePoint::torus(std::vector<double> xs) {
  SpacePoint p;
  p.coords = std::move(xs);
  for (double& c : p.coords) {
    if (!std::isfinite(c)) throw std::invalid_argument("torus point: not finite");
    c = wrap01(c);
  }
  return p;
}

SpacePoint SpacePoint::sphere(double x, double y, double z) {
  double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 1e-300) || !std::isfinite(n))
    throw std::invalid_argument("sphere point: not a direction");
  SpacePoint p;
  p.coords = {x / n, y / n, z / n};
  return p;
}

SpaceKind kind_of(const IsometryElement& g) {
  if (std::holds_alternative<CircleRotation>(g)) return SpaceKind::Circle;
  if (std::holds_alternative<TorusTranslation>(g)) return SpaceKind::Torus;
  if (std::holds_alternative<SphereRotation>(g)) return SpaceKind::Sphere2;
  if (std::holds_alternative<GroupShift>(g)) return SpaceKind::FiniteGroup;
  return SpaceKind::FiniteMetric;
}

void check_point(const Space& s, const SpacePoint& p) {
  switch (s.kind()) {
    case SpaceKind::Circle:
      if (p.coords.size() != 1) throw std::invalid_argument("point/space kind mismatch");
      if (p.coords[0] < 0 || p.coords[0] >= 1)
        throw std::invalid_argument("circle point outside [0,1)");
      return;
    case SpaceKind::Torus:
      if (static_cast<int>(p.coords.size()) != s.dim())
        throw std::invalid_argument("point/space kind mismatch");
      for (double c : p.coords)
        if (c < 0 || c >= 1) throw std::invalid_argument("torus point outside [0,1)^d");
      return;
    case SpaceKind::Sphere2: {
      if (p.coords.size() != 3) throw std::invalid_argument("point/space kind mismatch");
      double n2 = p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1] +
                  p.coords[2] * p.coords[2];
      if (std::fabs(n2 - 1.0) > 1e-9) throw std::invalid_argument("sphere point not unit");
      return;
    }
    case SpaceKind::FiniteGroup:
    case SpaceKind::FiniteMetric:
      if (p.index < 0 || p.index >= s.finite_size())
        throw std::invalid_argument("finite point index out of range");
      return;
  }
}

void check_isometry(const Space& s, const IsometryElement& g) {
  if (kind_of(g) != s.kind()) throw std::invalid_argument("isometry/space kind mismatch");
  switch (s.kind()) {
    case SpaceKind::Circle: {
      double a = std::get<CircleRotation>(g).angle;
      if (!(a >= 0 && a < 1)) throw std::invalid_argument("circle rotation outside [0,1)");
      return;
    }
    case SpaceKind::Torus: {
      const auto& t = std::get<TorusTranslation>(g);
      if (static_cast<int>(t.shift.size()) != s.dim())
        throw std::invalid_argument("torus translation dimension mismatch");
      for (double c : t.shift)
        if (!(c >= 0 && c < 1)) throw std::invalid_argument("torus shift outside [0,1)");
      return;
    }
    case SpaceKind::Sphere2: {
      const Quat& q = std::get<SphereRotation>(g).q;
      double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
      if (std::fabs(n2 - 1.0) > 1e-9) throw std::invalid_argument("rotation not unit quaternion");
      return;
    }
    case SpaceKind::FiniteGroup: {
      int e = std::get<GroupShift>(g).element;
      if (e < 0 || e >= s.group().order())
        throw std::invalid_argument("group shift element out of range");
      return;
    }
    case SpaceKind::FiniteMetric: {
      const auto& perm = std::get<MetricPermutation>(g).perm;
      int n = s.finite_size();
      if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permutation size mismatch");
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      for (int v : perm) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("not a permutation");
        seen[v] = 1;
      }
      const auto& d = s.metric_matrix();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (d[perm[i]][perm[j]] != d[i][j])
            throw std::invalid_argument("permutation does not preserve the metric");
      return;
    }
  }
}

double distance(const Space& s, const SpacePoint& a, const SpacePoint& b) {
  check_point(s, a);
  check_point(s, b);
  switch (s.kind()) {
    case SpaceKind::Circle: return circle_dist(a.coords[0], b.coords[0]);
    case SpaceKind::Torus: {
      double m = 0;
      for (int i = 0; i < s.dim(); ++i)
        m = std::max(m, circle_dist(a.coords[i], b.coords[i]));
      return m;
    }
    case SpaceKind::Sphere2: {
      double dot = a.coords[0] * b.coords[0] + a.coords[1] * b.coords[1] +
                   a.coords[2] * b.coords[2];
      double cx = a.coords[1] * b.coords[2] - a.coords[2] * b.coords[1];
      double cy = a.coords[2] * b.coords[0] - a.coords[0] * b.coords[2];
      double cz = a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0];
      return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
    }
    case SpaceKind::FiniteGroup: return a.index == b.index ? 0.0 : 1.0;
    case SpaceKind::FiniteMetric: return s.metric_matrix()[a.index][b.index];
  }
  return 0;
}

SpacePoint apply(const Space& s, const IsometryElement& g, const SpacePoint& p) {
  check_isometry(s, g);
  check_point(s, p);
  switch (s.kind()) {
    case SpaceKind::Circle:
      return SpacePoint::circle(wrap01(p.coords[0] + std::get<CircleRotation>(g).angle));
    case SpaceKind::Torus: {
      const auto& t = std::get<TorusTranslation>(g).shift;
      std::vector<double> c(p.coords.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = wrap01(p.coords[i] + t[i]);
      return SpacePoint::torus(std::move(c));
    }
    case SpaceKind::Sphere2: {
      double x = p.coords[0], y = p.coords[1], z = p.coords[2];
      std::get<SphereRotation>(g).q.rotate(x, y, z);
      return SpacePoint::sphere(x, y, z);  // renormalizes
    }
    case SpaceKind::FiniteGroup:
      return SpacePoint::finite(s.group().mul(std::get<GroupShift>(g).element, p.index));
    case SpaceKind::FiniteMetric:
      return SpacePoint::finite(std::get<MetricPermutation>(g).perm[p.index]);
  }
  return p;
}

IsometryElement compose(const Space& s, const IsometryElement& g, const IsometryElement& h) {
  check_isometry(s, g);
  check_isometry(s, h);
  switch (s.kind()) {
    case SpaceKind::Circle:
      return CircleRotation{
          wrap01(std::get<CircleRotation>(g).angle + std::get<CircleRotation>(h).angle)};
    case SpaceKind::Torus: {
      const auto& a = std::get<TorusTranslation>(g).shift;
      const auto& b = std::get<TorusTranslation>(h).shift;
      std::vector<double> c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[i] = wrap01(a[i] + b[i]);
      return TorusTranslation{std::move(c)};
    }
    case SpaceKind::Sphere2:
      return SphereRotation{
          (std::get<SphereRotation>(g).q * std::get<SphereRotation>(h).q).normalized()};
    case SpaceKind::FiniteGroup:
      return GroupShift{
          s.group().mul(std::get<GroupShift>(g).element, std::get<GroupShift>(h).element)};
    case SpaceKind::FiniteMetric: {
      const auto& a = std::get<MetricPermutation>(g).perm;
      const auto& b = std::get<MetricPermutation>(h).perm;
      std::vector<int> c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
      return MetricPermutation{std::move(c)};
    }
  }
  return g;
}

IsometryElement inverse(const Space& s, const IsometryElement& g) {
  check_isometry(s, g);
  switch (s.kind()) {
    case SpaceKind::Circle:
      return CircleRotation{wrap01(-std::get<CircleRotation>(g).angle)};
    case SpaceKind::Torus: {
      const auto& a = std::get<TorusTranslation>(g).shift;
      std::vector<double> c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[i] = wrap01(-a[i]);
      return TorusTranslation{std::move(c)};
    }
    case SpaceKind::Sphere2:
      return SphereRotation{std::get<SphereRotation>(g).q.conjugate()};
    case SpaceKind::FiniteGroup:
      return GroupShift{s.group().inverse(std::get<GroupShift>(g).element)};
    case SpaceKind::FiniteMetric: {
      const auto& a = std::get<MetricPermutation>(g).perm;
      std::vector<int> c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
      return MetricPermutation{std::move(c)};
    }
  }
  return g;
}

IsometryElement identity_isometry(const Space& s) {
  switch (s.kind()) {
    case SpaceKind::Circle: return CircleRotation{0.0};
    case SpaceKind::Torus:
      return TorusTranslation{std::vector<double>(static_cast<std::size_t>(s.dim()), 0.0)};
    case SpaceKind::Sphere2: return SphereRotation{Quat{1, 0, 0, 0}};
    case SpaceKind::FiniteGroup: return GroupShift{s.group().identity()};
    case SpaceKind::FiniteMetric: {
      std::vector<int> p(static_cast<std::size_t>(s.finite_size()));
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
      return MetricPermutation{std::move(p)};
    }
  }
  throw std::logic_error("identity_isometry");
}

bool points_equal(const Space& s, const SpacePoint& a, const SpacePoint& b) {
  if (s.is_finite()) return a.index == b.index;
  return distance(s, a, b) <= kEqTol;
}

bool isometries_equal(const Space& s, const IsometryElement& a, const IsometryElement& b) {
  check_isometry(s, a);
  check_isometry(s, b);
  switch (s.kind()) {
    case SpaceKind::Circle:
      return circle_dist(std::get<CircleRotation>(a).angle,
                         std::get<CircleRotation>(b).angle) <= kEqTol;
    case SpaceKind::Torus: {
      const auto& u = std::get<TorusTranslation>(a).shift;
      const auto& v = std::get<TorusTranslation>(b).shift;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (circle_dist(u[i], v[i]) > kEqTol) return false;
      return true;
    }
    case SpaceKind::Sphere2: {
      const Quat& p = std::get<SphereRotation>(a).q;
      const Quat& q = std::get<SphereRotation>(b).q;
      double dm = std::max({std::fabs(p.w - q.w), std::fabs(p.x - q.x), std::fabs(p.y - q.y),
                            std::fabs(p.z - q.z)});
      double dp = std::max({std::fabs(p.w + q.w), std::fabs(p.x + q.x), std::fabs(p.y + q.y),
                            std::fabs(p.z + q.z)});
      return std::min(dm, dp) <= kEqTol;  // q and -q are the same rotation
    }
    case SpaceKind::FiniteGroup:
      return std::get<GroupShift>(a).element == std::get<GroupShift>(b).element;
    case SpaceKind::FiniteMetric:
      return std::get<MetricPermutation>(a).perm == std::get<MetricPermutation>(b).perm;
  }
  return false;
}

std::vector<SpacePoint> fibonacci_sphere(int n) {
  if (n < 1) throw std::invalid_argument("fibonacci_sphere: n must be >= 1");
  std::vector<SpacePoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = ga * i;
    pts.push_back(SpacePoint::sphere(r * std::cos(th), r * std::sin(th), z));
  }
  return pts;
}

namespace {
struct SphereSoA {
  std::vector<double> x, y, z;
  explicit SphereSoA(std::span<const SpacePoint> pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    z.reserve(pts.size());
    for (const auto& p : pts) {
      x.push_back(p.coords[0]);
      y.push_back(p.coords[1]);
      z.push_back(p.coords[2]);
    }
  }
};
}  // namespace

double measured_covering_radius(const Space& s, std::span<const SpacePoint> net,
                                std::span<const SpacePoint> probe) {
  if (net.empty()) throw std::invalid_argument("covering radius of empty net");
  switch (s.kind()) {
    case SpaceKind::Circle: {
      std::vector<double> xs;
      xs.reserve(net.size());
      for (const auto& p : net) xs.push_back(p.coords[0]);
      double worst = 0;
      for (const auto& q : probe)
        worst = std::max(worst, kernels::circle_min_dist(xs.data(), xs.size(), q.coords[0]));
      return worst;
    }
    case SpaceKind::Sphere2: {
      SphereSoA soa(net);
      double min_dot = 1.0;
      for (const auto& q : probe) {
        double d = kernels::dot3_max(soa.x.data(), soa.y.data(), soa.z.data(), soa.x.size(),
                                     q.coords[0], q.coords[1], q.coords[2]);
        min_dot = std::min(min_dot, d);
      }
      return std::acos(std::clamp(min_dot, -1.0, 1.0));
    }
    default: {
      double worst = 0;
      for (const auto& q : probe) {
        double best = s.diameter();
        for (const auto& p : net) best = std::min(best, distance(s, p, q));
        worst = std::max(worst, best);
      }
      return worst;
    }
  }
}

std::vector<SpacePoint> all_finite_points(const Space& s) {
  std::vector<SpacePoint> pts;
  int n = s.finite_size();
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(SpacePoint::finite(i));
  return pts;
}

std::vector<SpacePoint> torus_grid(int dim, int per_axis) {
  double total = std::pow(static_cast<double>(per_axis), dim);
  if (total > 1e6) throw std::invalid_argument("torus grid too large");
  int count = static_cast<int>(total + 0.5);
  std::vector<SpacePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  std::vector<int> digit(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k < count; ++k) {
    std::vector<double> c(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) c[i] = static_cast<double>(digit[i]) / per_axis;
    pts.push_back(SpacePoint::torus(std::move(c)));
    for (int i = dim - 1; i >= 0; --i) {
      if (++digit[i] < per_axis) break;
      digit[i] = 0;
    }
  }
  return pts;
}

namespace {
std::vector<SpacePoint> rotated_probe_lattice(int n) {
  auto pts = fibonacci_sphere(n);
  // fixed off-lattice rotation so the probe does not share structure with the net
  Quat q = Quat::from_axis_angle(1.0, 2.0, 3.0, 0.7391);
  for (auto& p : pts) {
    double x = p.coords[0], y = p.coords[1], z = p.coords[2];
    q.rotate(x, y, z);
    p = SpacePoint::sphere(x, y, z);
  }
  return pts;
}
}  // namespace

ReferenceNet reference_net(const Space& s, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("reference_net: eps must be positive");
  ReferenceNet net;
  switch (s.kind()) {
    case SpaceKind::Circle: {
      int n = std::max(1, static_cast<int>(std::ceil(1.0 / eps)));
      net.points.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k)
        net.points.push_back(SpacePoint::circle(static_cast<double>(k) / n));
      net.covering_radius = 0.5 / n;
      net.probe_resolution = 0;
      break;
    }
    case SpaceKind::Torus: {
      int m = std::max(1, static_cast<int>(std::ceil(1.0 / eps)));
      net.points = torus_grid(s.dim(), m);
      net.covering_radius = 0.5 / m;
      net.probe_resolution = 0;
      break;
    }
    case SpaceKind::Sphere2: {
      int n = std::max(8, static_cast<int>(std::ceil(25.0 / (eps * eps))));
      for (;;) {
        if (n > 3000000) throw std::runtime_error("reference_net: sphere net too large");
        auto pts = fibonacci_sphere(n);
        int probe_n = std::max(20000, 8 * n);
        auto probe = rotated_probe_lattice(probe_n);
        double r = measured_covering_radius(s, pts, probe);
        if (r <= eps) {
          net.points = std::move(pts);
          net.covering_radius = r;
          net.probe_resolution = std::sqrt(4.0 * M_PI / probe_n);
          break;
        }
        n = n * 13 / 10 + 1;
      }
      break;
    }
    case SpaceKind::FiniteGroup:
    case SpaceKind::FiniteMetric:
      net.points = all_finite_points(s);
      net.covering_radius = 0;
      net.probe_resolution = 0;
      break;
  }
  if (net.covering_radius > eps)
    throw std::logic_error("reference_net: covering radius exceeds eps");
  return net;
}

ReferenceAtoms reference_measure_atoms(const Space& s, int n) {
  if (n < 1 && !s.is_finite())
    throw std::invalid_argument("reference_measure: n must be >= 1");
  ReferenceAtoms out;
  switch (s.kind()) {
    case SpaceKind::Circle:
      for (int k = 0; k < n; ++k)
        out.points.push_back(SpacePoint::circle(static_cast<double>(k) / n));
      break;
    case SpaceKind::Torus: out.points = torus_grid(s.dim(), n); break;
    case SpaceKind::Sphere2: out.points = fibonacci_sphere(n); break;
    case SpaceKind::FiniteGroup:
    case SpaceKind::FiniteMetric: out.points = all_finite_points(s); break;
  }
  out.weights.assign(out.points.size(), 1.0 / static_cast<double>(out.points.size()));
  return out;
}

namespace {
const ReferenceNet& default_sphere_net() {
  static const ReferenceNet net = [] {
    ReferenceNet n;
    n.points = fibonacci_sphere(1024);
    auto probe = rotated_probe_lattice(16384);
    n.covering_radius = measured_covering_radius(Space::sphere2(), n.points, probe);
    n.probe_resolution = std::sqrt(4.0 * M_PI / 16384.0);
    return n;
  }();
  return net;
}
}  // namespace

SupDistanceResult sup_distance(const Space& s, const IsometryElement& g,
                               const IsometryElement& h) {
  check_isometry(s, g);
  check_isometry(s, h);
  switch (s.kind()) {
    case SpaceKind::Circle:
      // translation invariance: d(x+a, x+b) is constant in x
      return {circle_dist(std::get<CircleRotation>(g).angle,
                          std::get<CircleRotation>(h).angle),
              0.0};
    case SpaceKind::Torus: {
      const auto& a = std::get<TorusTranslation>(g).shift;
      const auto& b = std::get<TorusTranslation>(h).shift;
      double m = 0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, circle_dist(a[i], b[i]));
      return {m, 0.0};
    }
    case SpaceKind::Sphere2: {
      const ReferenceNet& net = default_sphere_net();
      double worst = 0;
      for (const auto& p : net.points)
        worst = std::max(worst, distance(s, apply(s, g, p), apply(s, h, p)));
      return {worst, net.covering_radius};
    }
    case SpaceKind::FiniteGroup:
      // cancellation: g != h means g(x) != h(x) for every x
      return {std::get<GroupShift>(g).element == std::get<GroupShift>(h).element ? 0.0 : 1.0,
              0.0};
    case SpaceKind::FiniteMetric: {
      const auto& pg = std::get<MetricPermutation>(g).perm;
      const auto& ph = std::get<MetricPermutation>(h).perm;
      const auto& d = s.metric_matrix();
      double m = 0;
      for (std::size_t i = 0; i < pg.size(); ++i) m = std::max(m, d[pg[i]][ph[i]]);
      return {m, 0.0};
    }
  }
  throw std::logic_error("sup_distance");
}

}  // namespace isowalk
