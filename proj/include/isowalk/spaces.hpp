#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isowalk/groups.hpp"

namespace isowalk {

enum class SpaceKind { Circle, Torus, Sphere2, FiniteGroup, FiniteMetric };

std::string kind_name(SpaceKind k);

// Unit quaternion; represents a rotation of the 2-sphere.
struct Quat {
  double w = 1, x = 0, y = 0, z = 0;

  Quat normalized() const;
  Quat conjugate() const { return {w, -x, -y, -z}; }
  // Hamilton product; (a*b) rotates by b first, then a.
  friend Quat operator*(const Quat& a, const Quat& b);
  void rotate(double& px, double& py, double& pz) const;
  void to_matrix(double r[9]) const;
  static Quat from_axis_angle(double ax, double ay, double az, double angle);
  // rotation angle in [0, pi]
  double angle() const;
};

// Compact homogeneous spaces this library works on:
//   Circle       points in [0,1), circumference-1 arc metric
//   Torus(d)     [0,1)^d with the max of coordinate arc metrics
//   Sphere2      unit vectors in R^3 with the great-circle metric
//   FiniteGroup  group elements, discrete metric, left-shift isometries
//   FiniteMetric points 0..n-1 with an explicit distance matrix
class Space {
 public:
  static Space circle();
  static Space torus(int dim);
  static Space sphere2();
  static Space finite_group(FiniteGroupTable table);
  static Space finite_metric(std::vector<std::vector<double>> dist);

  SpaceKind kind() const { return kind_; }
  bool is_finite() const {
    return kind_ == SpaceKind::FiniteGroup || kind_ == SpaceKind::FiniteMetric;
  }
  int finite_size() const;
  int dim() const { return dim_; }  // torus dimension
  double diameter() const;
  const FiniteGroupTable& group() const;
  const std::vector<std::vector<double>>& metric_matrix() const;
  bool same_space(const Space& other) const;

 private:
  Space(SpaceKind k, int dim) : kind_(k), dim_(dim) {}
  SpaceKind kind_;
  int dim_ = 1;
  std::shared_ptr<const FiniteGroupTable> table_;
  std::shared_ptr<const std::vector<std::vector<double>>> dist_;
};

// A point: coords for the continuous kinds (size 1, d, or 3), index for the
// finite kinds.
struct SpacePoint {
  std::vector<double> coords;
  int index = -1;

  static SpacePoint circle(double x);
  static SpacePoint torus(std::vector<double> xs);
  static SpacePoint sphere(double x, double y, double z);
  static SpacePoint finite(int i) {
    SpacePoint p;
    p.index = i;
    return p;
  }
};

struct CircleRotation {
  double angle;  // fraction of a full turn, in [0,1)
};
struct TorusTranslation {
  std::vector<double> shift;
};
struct SphereRotation {
  Quat q;
};
struct GroupShift {
  int element;
};
struct MetricPermutation {
  std::vector<int> perm;
};

using IsometryElement =
    std::variant<CircleRotation, TorusTranslation, SphereRotation, GroupShift, MetricPermutation>;

SpaceKind kind_of(const IsometryElement& g);

// point validity (coord count, unit norm, index range); throws on mismatch
void check_point(const Space& s, const SpacePoint& p);
void check_isometry(const Space& s, const IsometryElement& g);

double distance(const Space& s, const SpacePoint& a, const SpacePoint& b);
SpacePoint apply(const Space& s, const IsometryElement& g, const SpacePoint& p);
// compose(g,h) acts as g after h: apply(compose(g,h), p) == apply(g, apply(h, p))
IsometryElement compose(const Space& s, const IsometryElement& g, const IsometryElement& h);
IsometryElement inverse(const Space& s, const IsometryElement& g);
IsometryElement identity_isometry(const Space& s);

// equality up to the library-wide atom-merge tolerance (1e-12); exact for
// finite kinds
bool points_equal(const Space& s, const SpacePoint& a, const SpacePoint& b);
bool isometries_equal(const Space& s, const IsometryElement& a, const IsometryElement& b);

struct SupDistanceResult {
  double value;
  // 0 where the value is exact (closed form or exhaustive); for Sphere2 the
  // value is a max over a reference net and this reports the net's measured
  // covering radius
  double net_covering_radius;
};

// uniform distance sup_x d(g(x), h(x))
SupDistanceResult sup_distance(const Space& s, const IsometryElement& g,
                               const IsometryElement& h);

// closed-form oracle for Sphere2: the rotation angle of g^-1 h
double relative_rotation_angle(const Quat& a, const Quat& b);

struct ReferenceNet {
  std::vector<SpacePoint> points;
  double covering_radius;  // measured, <= the eps that was requested
  double probe_resolution;  // 0 for exact kinds; probe-lattice spacing used on the sphere
};

// Finite point set with covering radius <= eps. Circle/Torus: uniform grids
// (ceil(1/eps) per axis). Sphere2: Fibonacci lattice grown until the measured
// covering radius fits. Finite kinds: all points.
ReferenceNet reference_net(const Space& s, double eps);

std::vector<SpacePoint> all_finite_points(const Space& s);
std::vector<SpacePoint> torus_grid(int dim, int per_axis);

// n-point uniform approximation of the invariant measure: uniform grid
// weights on Circle/Torus (n per axis), Fibonacci lattice on Sphere2, exact
// uniform on finite kinds. Returned as atoms+weights for the measures module.
struct ReferenceAtoms {
  std::vector<SpacePoint> points;
  std::vector<double> weights;
};
ReferenceAtoms reference_measure_atoms(const Space& s, int n);

// covering radius of a point set, measured over a probe set (the net itself
// for finite kinds / grids, a finer lattice for the sphere)
double measured_covering_radius(const Space& s, std::span<const SpacePoint> net,
                                std::span<const SpacePoint> probe);

std::vector<SpacePoint> fibonacci_sphere(int n);

}  // namespace isowalk
