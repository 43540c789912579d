#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isowalk/rng.hpp"
#include "isowalk/spaces.hpp"

namespace isowalk {

// Finitely supported probability measure over points of a space or over its
// isometries. Atoms are distinct under the space equality predicate, weights
// are positive and sum to 1 within 1e-12.
template <class T>
class DiscreteMeasure {
 public:
  struct Atom {
    T element;
    double weight;
  };

  // validates and canonicalizes (merges equal atoms, sorts deterministically)
  DiscreteMeasure(Space space, std::vector<Atom> atoms);

  // same, but rescales weights to total 1 first (weights still must be > 0)
  static DiscreteMeasure normalized(Space space, std::vector<Atom> atoms);

  const Space& space() const { return space_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  Space space_;
  std::vector<Atom> atoms_;
};

using PointMeasure = DiscreteMeasure<SpacePoint>;
using IsoMeasure = DiscreteMeasure<IsometryElement>;

PointMeasure dirac_point(const Space& s, const SpacePoint& p);
IsoMeasure dirac_iso(const Space& s, const IsometryElement& g);

// image measure under a single isometry
PointMeasure pushforward(const IsometryElement& g, const PointMeasure& nu);

// action convolution: law of g(x), g ~ mu, x ~ nu
PointMeasure convolve(const IsoMeasure& mu, const PointMeasure& nu);
// group convolution: law of g*h, g ~ mu, h ~ nu
IsoMeasure convolve(const IsoMeasure& mu, const IsoMeasure& nu);

// uniform reference measure approximation (exact uniform on finite kinds)
PointMeasure reference_measure(const Space& s, int n);

// For a finite group space: the measure on points with the same masses as a
// measure on isometries (left shifts applied to the identity), and back.
PointMeasure iso_to_point_measure(const IsoMeasure& mu);
IsoMeasure point_to_iso_measure(const PointMeasure& nu);

std::vector<int> support_indices(const PointMeasure& nu);   // finite kinds
std::vector<int> support_indices(const IsoMeasure& mu);     // finite group

struct PruneReport {
  double dropped_mass = 0;   // before renormalization
  double tv_bound = 0;       // dropped/(1-dropped), bound on the tv change
  int dropped_atoms = 0;
};

template <class T>
DiscreteMeasure<T> prune(const DiscreteMeasure<T>& m, double w_min, PruneReport* report = nullptr);

bool measures_equal(const PointMeasure& a, const PointMeasure& b, double weight_tol = 1e-12);
bool measures_equal(const IsoMeasure& a, const IsoMeasure& b, double weight_tol = 1e-12);

// Family of step measures with a schedule over them.
enum class Schedule { Cyclic, IidUniformOverFamily, Scripted };

struct MeasureFamily {
  std::vector<IsoMeasure> members;
  Schedule schedule = Schedule::Cyclic;
  std::vector<int> script;  // used by Scripted; cycled past its end

  // member index driving step k (1-based step); rng used by the iid schedule
  int member_index(int step, RngStream& rs) const;
  void validate() const;
};

// N particles stored structure-of-arrays so steps can use the simd kernels.
class ParticleCloud {
 public:
  static ParticleCloud from_point(const Space& s, const SpacePoint& p, int n);
  static ParticleCloud sample(const PointMeasure& nu, int n, RngStream& rs);

  const Space& space() const { return space_; }
  int size() const { return n_; }
  SpacePoint point_at(int i) const;

  std::vector<std::vector<double>>& coords() { return coords_; }
  const std::vector<std::vector<double>>& coords() const { return coords_; }
  std::vector<int>& indices() { return idx_; }
  const std::vector<int>& indices() const { return idx_; }

 private:
  ParticleCloud(Space s, int n) : space_(std::move(s)), n_(n) {}
  Space space_;
  int n_;
  std::vector<std::vector<double>> coords_;  // [dim][n] for continuous kinds
  std::vector<int> idx_;                     // [n] for finite kinds
};

// One step of the random walk: each particle draws g ~ mu independently from
// the stream and moves to g(particle).
void particle_step(ParticleCloud& cloud, const IsoMeasure& mu, RngStream& rs);

// empirical distribution of the cloud (atoms merged)
PointMeasure empirical_measure(const ParticleCloud& cloud);

// k distinct particles drawn without replacement, as a uniform-weight measure
PointMeasure subsample_measure(const ParticleCloud& cloud, int k, RngStream& rs);

}  // namespace isowalk
