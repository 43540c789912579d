#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isowalk/groups.hpp"
#include "isowalk/measures.hpp"
#include "isowalk/observables.hpp"
#include "isowalk/transport.hpp"

namespace isowalk {

enum class RunMode { ExactConvolution, Particles };

struct WalkConfig {
  MeasureFamily family;                // carries the space
  std::optional<PointMeasure> start;   // default: dirac at the space's base point
  int horizon = 100;
  RunMode mode = RunMode::ExactConvolution;
  int particles = 10000;               // N in particle mode, >= 100
  std::uint64_t seed = 0;
  std::string observable_id;           // ergodic / large-deviation runs
  double epsilon = 0.1;                // large-deviation threshold
  int trials = 200;
  int checkpoint_every = 1;            // spacing of recorded convergence steps
  std::vector<int> n_grid;             // large-deviation grid
  int reference_points = 256;          // reference measure resolution on continuous kinds
  double prune_wmin = 0;               // exact-mode support pruning (0 = off)
  int subsample_cap = 2000;            // W1 side-size cap for particle comparisons

  const Space& space() const { return family.members.at(0).space(); }
  void validate() const;               // throws with the first violation
};

SpacePoint base_point(const Space& s);
PointMeasure invariant_reference(const Space& s, int reference_points);

struct ConvergenceRecord {
  int step = 0;
  double dist = 0;            // TV to uniform on finite kinds, W1 to reference otherwise
  double support_radius = 0;  // covering radius of the support over the reference probe
  int support_size = 0;
  int subsample_size = 0;     // 0 when the full support was compared
};

struct ConvergenceSeries {
  std::string metric;  // "tv" or "w1"
  std::vector<ConvergenceRecord> records;
  double reference_discretization = 0;  // covering radius of the reference used
};

ConvergenceSeries run_convergence(const WalkConfig& cfg);

struct StandingAssumptionProbe {
  int m = 0;           // smallest window length that contracted every tested pair
  double worst = 0;    // max distance over pairs and windows at that m
  bool satisfied = false;
  int cap = 0;
  std::vector<double> worst_by_m;  // diagnostic trail, worst_by_m[k-1] for window k
};

StandingAssumptionProbe probe_standing_assumption(const MeasureFamily& family, double delta,
                                                  int trial_pairs, std::uint64_t seed,
                                                  int m_cap = 64);

// fresh-draw revalidation of a probed window length
double revalidate_standing_assumption(const MeasureFamily& family, int m, int draws,
                                      std::uint64_t seed);

struct ErgodicReport {
  std::vector<int> checkpoints;
  std::vector<std::vector<double>> averages;  // [trial][checkpoint]
  double reference_integral = 0;
};

ErgodicReport run_ergodic(const WalkConfig& cfg, std::span<const int> checkpoints);

struct LdReport {
  double epsilon = 0;
  std::vector<int> n_grid;
  std::vector<int> exceed_counts;
  std::vector<double> p_hat;
  int trials = 0;
  bool degenerate = false;  // fewer than 3 nonzero cells: no fit
  double slope = 0, intercept = 0, slope_stderr = 0, r2 = 0;
};

LdReport run_large_deviations(const WalkConfig& cfg);

struct CapSpec {
  double ax = 0, ay = 0, az = 1;  // cap axis, normalized on use
  double cos_theta = 0;           // points with dot >= cos_theta are inside
  double area() const { return 0.5 * (1.0 - cos_theta); }
};

struct SphereShareReport {
  double share = 0;
  double cap_area = 0;
  std::uint64_t points = 0;
};

// all 2^n words in {A,B}^n applied to x; share landing in the cap
SphereShareReport run_sphere_equidistribution(const Space& s, const IsometryElement& A,
                                              const IsometryElement& B, const SpacePoint& x,
                                              int n, const CapSpec& cap);

struct StrombergReport {
  std::vector<std::vector<int>> supports;  // per-step support of the exact iterate
  std::vector<double> tv_to_haar;
  std::vector<double> tv_successive;       // TV(nu_n, nu_{n-1})
  double haar_gap = 0;        // window max-min of tv_to_haar
  double oscillation = 0;     // window max of tv_successive
  bool convergent = false;
};

StrombergReport run_stromberg(int horizon, int window = 100);

struct CensusRow {
  std::string group;
  int order = 0;
  int measure_index = 0;
  std::vector<int> support;
  bool adapted = false;
  bool coset_aperiodic = false;
  bool strictly_aperiodic = false;
  double tv_final = 0;
  double oscillation = 0;  // window max of successive TV
  bool converged = false;  // tv_final < 1e-6
  long witness_count = -1; // -1 when the scan was skipped (order > cap)
  bool ok = false;         // converged == (adapted && strictly aperiodic)
  bool witness_ok = true;  // (witness_count == 0) == coset_aperiodic
};

struct CensusReport {
  std::vector<CensusRow> rows;
  int violations = 0;
  int witness_mismatches = 0;
};

CensusReport run_ito_kawada_census(int max_order, int measures_per_group, std::uint64_t seed,
                                   int horizon = 500, int window = 100);

// built-in groups: Z/n, dihedral, symmetric, filtered by order
std::vector<std::pair<std::string, FiniteGroupTable>> built_in_groups(int max_order);

// equal weights on a uniformly drawn nonempty subset of G
IsoMeasure random_support_measure(const Space& s, RngStream& rs);

}  // namespace isowalk
