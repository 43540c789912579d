#include "isowalk/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isowalk {

Observable make_observable(const Space& s, const std::string& id) {
  Observable obs;
  obs.id = id;
  if (id == "one") {
    obs.eval = [](const SpacePoint&) { return 1.0; };
    obs.reference_integral = 1.0;
    obs.bound = 1.0;
    return obs;
  }
  if (id == "cos1" || id == "sin1") {
    if (s.kind() != SpaceKind::Circle && s.kind() != SpaceKind::Torus)
      throw std::invalid_argument("observable " + id + ": circle or torus required");
    bool cosine = id == "cos1";
    obs.eval = [cosine](const SpacePoint& p) {
      double t = 2.0 * std::numbers::pi * p.coords[0];
      return cosine ? std::cos(t) : std::sin(t);
    };
    obs.reference_integral = 0.0;
    obs.bound = 1.0;
    return obs;
  }
  if (id == "sphere_z") {
    if (s.kind() != SpaceKind::Sphere2)
      throw std::invalid_argument("observable sphere_z: sphere required");
    obs.eval = [](const SpacePoint& p) { return p.coords[2]; };
    obs.reference_integral = 0.0;
    obs.bound = 1.0;
    return obs;
  }
  if (id.rfind("indicator:", 0) == 0) {
    if (!s.is_finite())
      throw std::invalid_argument("observable " + id + ": finite kind required");
    int k;
    try {
      k = std::stoi(id.substr(10));
    } catch (const std::exception&) {
      throw std::invalid_argument("observable " + id + ": bad index");
    }
    if (k < 0 || k >= s.finite_size())
      throw std::invalid_argument("observable " + id + ": index out of range");
    obs.eval = [k](const SpacePoint& p) { return p.index == k ? 1.0 : 0.0; };
    obs.reference_integral = 1.0 / s.finite_size();
    obs.bound = 1.0;
    return obs;
  }
  throw std::invalid_argument("unknown observable id: " + id);
}

}  // namespace isowalk
