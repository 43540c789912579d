#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isowalk/experiments.hpp"
#include "isowalk/setdyn.hpp"
#include "isowalk/transport.hpp"

namespace isowalk {

using Json = nlohmann::ordered_json;

Json space_to_json(const Space& s);
Space space_from_json(const Json& j);

Json point_to_json(const Space& s, const SpacePoint& p);
SpacePoint point_from_json(const Space& s, const Json& j);

Json isometry_to_json(const Space& s, const IsometryElement& g);
IsometryElement isometry_from_json(const Space& s, const Json& j);

Json measure_to_json(const PointMeasure& nu);             // embeds the space
PointMeasure point_measure_from_json(const Json& j);
PointMeasure point_measure_from_json(const Space& s, const Json& atoms);

Json measure_to_json(const IsoMeasure& mu);
IsoMeasure iso_measure_from_json(const Json& j);
IsoMeasure iso_measure_from_json(const Space& s, const Json& atoms);

Json family_to_json(const MeasureFamily& f);              // space hoisted once
MeasureFamily family_from_json(const Json& j);
MeasureFamily family_from_json(const Space& s, const Json& j);

Json config_to_json(const WalkConfig& cfg);

struct ConfigValidation {
  std::optional<WalkConfig> config;
  std::vector<std::string> errors;  // every violation, not just the first
  bool seed_auto = false;           // seed was absent; caller fills and records it
};

ConfigValidation config_from_json(const Json& j);

Json plan_to_json(const TransportPlan& plan);
Json netset_to_json(const NetSet& a);
Json partition_to_json(const WidePartition& p);

Json series_to_json(const ConvergenceSeries& s);
Json record_to_json(const ConvergenceRecord& r);
Json probe_to_json(const StandingAssumptionProbe& p);
Json ergodic_to_json(const ErgodicReport& r);
Json ld_to_json(const LdReport& r);
Json sphere_share_to_json(const SphereShareReport& r);
Json stromberg_to_json(const StrombergReport& r);
Json census_row_to_json(const CensusRow& r);
Json census_to_json(const CensusReport& r);

}  // namespace isowalk
