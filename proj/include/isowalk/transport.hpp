#pragma once

#include <vector>

#include "isowalk/measures.hpp"

namespace isowalk {

struct TransportEntry {
  int from = 0;  // atom index in the first measure
  int to = 0;    // atom index in the second measure
  double mass = 0;
};

struct TransportPlan {
  std::vector<TransportEntry> entries;  // strictly positive mass only
  double cost = 0;
  std::vector<double> source_potential;
  std::vector<double> sink_potential;
  double max_dual_violation = 0;  // max over all pairs of u_i + v_j - c_ij
  bool certified = false;
  int pivots = 0;
};

// exact W1 between two measures on the same space, network simplex
TransportPlan w1_exact(const PointMeasure& a, const PointMeasure& b);
double w1_distance(const PointMeasure& a, const PointMeasure& b);

// independent verifier: exhaustive enumeration of the spanning-tree basic
// feasible solutions of the transport polytope; supports of size <= 6 only
double w1_oracle(const PointMeasure& a, const PointMeasure& b);

// finite carriers only
double tv_distance(const PointMeasure& a, const PointMeasure& b);
double tv_distance(const IsoMeasure& a, const IsoMeasure& b);

}  // namespace isowalk
