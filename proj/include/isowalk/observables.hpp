#pragma once

#include <functional>
#include <string>

#include "isowalk/spaces.hpp"

namespace isowalk {

struct Observable {
  std::string id;
  std::function<double(const SpacePoint&)> eval;
  double reference_integral = 0;  // against the invariant reference measure
  double bound = 1;               // sup |phi|
};

// Built-in observables by id:
//   "one"            constant 1 (any kind), integral 1
//   "cos1" / "sin1"  cos/sin of 2*pi*first coordinate (Circle, Torus), integral 0
//   "sphere_z"       third coordinate (Sphere2), integral 0
//   "indicator:K"    indicator of point index K (finite kinds), integral 1/n
Observable make_observable(const Space& s, const std::string& id);

}  // namespace isowalk
