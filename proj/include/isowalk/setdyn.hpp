#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "isowalk/measures.hpp"
#include "isowalk/spaces.hpp"

namespace isowalk {

// a fixed finite net; all set dynamics happens on subsets of one net
struct Net {
  Space space;
  std::vector<SpacePoint> points;
  double covering_radius = 0;
  std::uint64_t id = 0;
};

std::shared_ptr<const Net> make_net(const Space& s, std::vector<SpacePoint> points,
                                    double covering_radius);
std::shared_ptr<const Net> net_from_reference(const Space& s, double eps);
std::shared_ptr<const Net> net_all_points(const Space& s);   // finite kinds
std::shared_ptr<const Net> net_circle_grid(const Space& s, int n);
std::shared_ptr<const Net> net_torus_grid(const Space& s, int per_axis);

class NetSet {
 public:
  NetSet(std::shared_ptr<const Net> net, std::vector<int> members);

  const Net& net() const { return *net_; }
  const std::shared_ptr<const Net>& net_ptr() const { return net_; }
  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int idx) const;

 private:
  std::shared_ptr<const Net> net_;
  std::vector<int> members_;  // sorted, unique, nonempty
};

bool same_net(const NetSet& a, const NetSet& b);
std::optional<NetSet> complement_of(const NetSet& a);

// smallest eps with B inside the eps-neighborhood of A
double asym_D(const NetSet& a, const NetSet& b);
double hausdorff(const NetSet& a, const NetSet& b);

struct PseudoHResult {
  double value = 0;
  double projection_error = 0;  // worst net re-projection of a moved point
};

// Hausdorff distance minimized over isometry alignments; the list must
// contain the identity and be closed under the listed inverses
PseudoHResult pseudo_H(const NetSet& a, const NetSet& b,
                       std::span<const IsometryElement> group_elements);

// intersection of the images of a under the support; empty is a result, not an error
std::optional<NetSet> t_mu(const NetSet& a, std::span<const IsometryElement> supp);

struct WidePartition {
  std::vector<NetSet> cells;
  std::vector<int> centers;  // net index of each cell's center
  double eps = 0;
};

WidePartition eps_wide_partition(const std::shared_ptr<const Net>& net, double eps);

struct DensityResult {
  bool dense = false;
  double covering_radius = 0;
};

DensityResult is_eps_dense(const NetSet& s, double eps);
DensityResult is_eps_dense(const Space& s, std::span<const SpacePoint> members,
                           std::span<const SpacePoint> probe, double eps);

// does the set contain a full net-ball of radius eps around one of its members
bool contains_net_ball(const NetSet& s, double eps);

struct SeparationProbe {
  std::vector<double> h_values;  // pseudo_H of each iterate against its predecessor
  std::vector<int> sizes;
  int first_empty_step = -1;  // 1-based; -1 if the iterate never vanishes
  int first_exit_step = -1;   // first step whose iterate or complement loses its eps ball
};

SeparationProbe separation_probe(const NetSet& a0, const MeasureFamily& family, int steps,
                                 std::span<const IsometryElement> group_elements, double eps,
                                 RngStream rs);

// every shift for FiniteGroup; every metric-preserving permutation for FiniteMetric (n <= 10)
std::vector<IsometryElement> full_isometry_list(const Space& s);
std::vector<IsometryElement> grid_rotations(int n);
std::vector<IsometryElement> grid_translations(int per_axis, int dim);

}  // namespace isowalk
