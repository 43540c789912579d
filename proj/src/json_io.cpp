#include "isowalk/json_io.hpp"

#include <stdexcept>

namespace isowalk {

namespace {
std::string kind_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Torus: return "torus";
    case SpaceKind::Sphere2: return "sphere";
    case SpaceKind::FiniteGroup: return "finite_group";
    default: return "finite_metric";
  }
}
}  // namespace

Json space_to_json(const Space& s) {
  Json j;
  j["kind"] = kind_string(s.kind());
  switch (s.kind()) {
    case SpaceKind::Torus: j["dim"] = s.dim(); break;
    case SpaceKind::FiniteGroup:
      if (!s.group().name().empty()) j["name"] = s.group().name();
      j["table"] = s.group().rows();
      break;
    case SpaceKind::FiniteMetric: j["matrix"] = s.metric_matrix(); break;
    default: break;
  }
  return j;
}

Space space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("space: object with a \"kind\" string required");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "circle") return Space::circle();
  if (kind == "sphere") return Space::sphere2();
  if (kind == "torus") {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      throw std::invalid_argument("space: torus needs an integer \"dim\"");
    return Space::torus(j["dim"].get<int>());
  }
  if (kind == "finite_group") {
    if (j.contains("builtin")) {
      const std::string b = j["builtin"].get<std::string>();
      const int n = j.value("n", 0);
      if (b == "cyclic") return Space::finite_group(FiniteGroupTable::cyclic(n));
      if (b == "dihedral") return Space::finite_group(FiniteGroupTable::dihedral(n));
      if (b == "symmetric") return Space::finite_group(FiniteGroupTable::symmetric(n));
      throw std::invalid_argument("space: unknown builtin group \"" + b + "\"");
    }
    if (!j.contains("table") || !j["table"].is_array())
      throw std::invalid_argument("space: finite_group needs a \"table\" array");
    return Space::finite_group(FiniteGroupTable(
        j["table"].get<std::vector<std::vector<int>>>(), j.value("name", std::string())));
  }
  if (kind == "finite_metric") {
    if (!j.contains("matrix") || !j["matrix"].is_array())
      throw std::invalid_argument("space: finite_metric needs a \"matrix\" array");
    return Space::finite_metric(j["matrix"].get<std::vector<std::vector<double>>>());
  }
  throw std::invalid_argument("space: unknown kind \"" + kind + "\"");
}

Json point_to_json(const Space& s, const SpacePoint& p) {
  switch (s.kind()) {
    case SpaceKind::Circle: return Json(p.coords[0]);
    case SpaceKind::Torus:
    case SpaceKind::Sphere2: return Json(p.coords);
    default: return Json(p.index);
  }
}

SpacePoint point_from_json(const Space& s, const Json& j) {
  switch (s.kind()) {
    case SpaceKind::Circle:
      if (!j.is_number()) throw std::invalid_argument("point: circle point is a number");
      return SpacePoint::circle(j.get<double>());
    case SpaceKind::Torus:
      return SpacePoint::torus(j.get<std::vector<double>>());
    case SpaceKind::Sphere2: {
      auto v = j.get<std::vector<double>>();
      if (v.size() != 3) throw std::invalid_argument("point: sphere point is [x,y,z]");
      return SpacePoint::sphere(v[0], v[1], v[2]);
    }
    default:
      if (!j.is_number_integer())
        throw std::invalid_argument("point: finite point is an integer index");
      return SpacePoint::finite(j.get<int>());
  }
}

Json isometry_to_json(const Space& s, const IsometryElement& g) {
  switch (s.kind()) {
    case SpaceKind::Circle: return Json(std::get<CircleRotation>(g).angle);
    case SpaceKind::Torus: return Json(std::get<TorusTranslation>(g).shift);
    case SpaceKind::Sphere2: {
      const Quat& q = std::get<SphereRotation>(g).q;
      return Json(std::vector<double>{q.w, q.x, q.y, q.z});
    }
    case SpaceKind::FiniteGroup: return Json(std::get<GroupShift>(g).element);
    default: return Json(std::get<MetricPermutation>(g).perm);
  }
}

IsometryElement isometry_from_json(const Space& s, const Json& j) {
  switch (s.kind()) {
    case SpaceKind::Circle:
      if (!j.is_number()) throw std::invalid_argument("isometry: rotation is a number");
      return CircleRotation{j.get<double>()};
    case SpaceKind::Torus: return TorusTranslation{j.get<std::vector<double>>()};
    case SpaceKind::Sphere2: {
      auto v = j.get<std::vector<double>>();
      if (v.size() != 4) throw std::invalid_argument("isometry: rotation is [w,x,y,z]");
      return SphereRotation{Quat{v[0], v[1], v[2], v[3]}.normalized()};
    }
    case SpaceKind::FiniteGroup:
      if (!j.is_number_integer()) throw std::invalid_argument("isometry: shift is an integer");
      return GroupShift{j.get<int>()};
    default: return MetricPermutation{j.get<std::vector<int>>()};
  }
}

namespace {
template <class M, class ElemToJson>
Json atoms_to_json(const M& m, ElemToJson f) {
  Json a = Json::array();
  for (const auto& atom : m.atoms()) a.push_back(Json::array({f(atom.element), atom.weight}));
  return a;
}

template <class Atom, class ElemFromJson>
std::vector<Atom> atoms_from_json(const Json& arr, ElemFromJson f) {
  if (!arr.is_array() || arr.empty())
    throw std::invalid_argument("measure: nonempty atom array required");
  std::vector<Atom> atoms;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("measure: each atom is [element, weight]");
    atoms.push_back({f(e[0]), e[1].get<double>()});
  }
  return atoms;
}
}  // namespace

Json measure_to_json(const PointMeasure& nu) {
  Json j;
  j["space"] = space_to_json(nu.space());
  j["carrier"] = "points";
  j["atoms"] = atoms_to_json(nu, [&](const SpacePoint& p) {
    return point_to_json(nu.space(), p);
  });
  return j;
}

PointMeasure point_measure_from_json(const Space& s, const Json& atoms) {
  return PointMeasure(
      s, atoms_from_json<PointMeasure::Atom>(
             atoms, [&](const Json& e) { return point_from_json(s, e); }));
}

PointMeasure point_measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("atoms"))
    throw std::invalid_argument("measure: needs \"space\" and \"atoms\"");
  if (j.value("carrier", "points") != std::string("points"))
    throw std::invalid_argument("measure: carrier is not \"points\"");
  Space s = space_from_json(j["space"]);
  return point_measure_from_json(s, j["atoms"]);
}

Json measure_to_json(const IsoMeasure& mu) {
  Json j;
  j["space"] = space_to_json(mu.space());
  j["carrier"] = "isometries";
  j["atoms"] = atoms_to_json(mu, [&](const IsometryElement& g) {
    return isometry_to_json(mu.space(), g);
  });
  return j;
}

IsoMeasure iso_measure_from_json(const Space& s, const Json& atoms) {
  return IsoMeasure(
      s, atoms_from_json<IsoMeasure::Atom>(
             atoms, [&](const Json& e) { return isometry_from_json(s, e); }));
}

IsoMeasure iso_measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("atoms"))
    throw std::invalid_argument("measure: needs \"space\" and \"atoms\"");
  if (j.value("carrier", "isometries") != std::string("isometries"))
    throw std::invalid_argument("measure: carrier is not \"isometries\"");
  Space s = space_from_json(j["space"]);
  return iso_measure_from_json(s, j["atoms"]);
}

namespace {
std::string schedule_string(Schedule s) {
  switch (s) {
    case Schedule::Cyclic: return "cyclic";
    case Schedule::IidUniformOverFamily: return "iid";
    default: return "scripted";
  }
}

Schedule schedule_from_string(const std::string& s) {
  if (s == "cyclic") return Schedule::Cyclic;
  if (s == "iid") return Schedule::IidUniformOverFamily;
  if (s == "scripted") return Schedule::Scripted;
  throw std::invalid_argument("family: unknown schedule \"" + s + "\"");
}
}  // namespace

Json family_to_json(const MeasureFamily& f) {
  Json j;
  j["schedule"] = schedule_string(f.schedule);
  if (f.schedule == Schedule::Scripted) j["script"] = f.script;
  Json members = Json::array();
  for (const auto& m : f.members)
    members.push_back(atoms_to_json(
        m, [&](const IsometryElement& g) { return isometry_to_json(m.space(), g); }));
  j["members"] = members;
  return j;
}

MeasureFamily family_from_json(const Space& s, const Json& j) {
  if (!j.is_object() || !j.contains("members") || !j["members"].is_array())
    throw std::invalid_argument("family: needs a \"members\" array");
  MeasureFamily f;
  f.schedule = schedule_from_string(j.value("schedule", "cyclic"));
  if (j.contains("script")) f.script = j["script"].get<std::vector<int>>();
  for (const auto& m : j["members"]) f.members.push_back(iso_measure_from_json(s, m));
  f.validate();
  return f;
}

MeasureFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space"))
    throw std::invalid_argument("family: needs a \"space\"");
  return family_from_json(space_from_json(j["space"]), j);
}

Json config_to_json(const WalkConfig& cfg) {
  Json j;
  j["space"] = space_to_json(cfg.space());
  j["family"] = family_to_json(cfg.family);
  if (cfg.start)
    j["start"] = atoms_to_json(
        *cfg.start, [&](const SpacePoint& p) { return point_to_json(cfg.space(), p); });
  j["horizon"] = cfg.horizon;
  j["mode"] = cfg.mode == RunMode::ExactConvolution ? "exact" : "particles";
  j["particles"] = cfg.particles;
  j["seed"] = cfg.seed;
  if (!cfg.observable_id.empty()) j["observable"] = cfg.observable_id;
  j["epsilon"] = cfg.epsilon;
  j["trials"] = cfg.trials;
  j["checkpoint_every"] = cfg.checkpoint_every;
  if (!cfg.n_grid.empty()) j["n_grid"] = cfg.n_grid;
  j["reference_points"] = cfg.reference_points;
  j["prune_wmin"] = cfg.prune_wmin;
  j["subsample_cap"] = cfg.subsample_cap;
  return j;
}

ConfigValidation config_from_json(const Json& j) {
  ConfigValidation out;
  auto& errors = out.errors;
  if (!j.is_object()) {
    errors.push_back("config: top level must be an object");
    return out;
  }

  std::optional<Space> space;
  if (!j.contains("space")) {
    errors.push_back("config: missing \"space\"");
  } else {
    try {
      space = space_from_json(j["space"]);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }

  std::optional<MeasureFamily> family;
  if (!j.contains("family")) {
    errors.push_back("config: missing \"family\"");
  } else if (space) {
    try {
      family = family_from_json(*space, j["family"]);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }

  auto get_int = [&](const char* key, int dflt, int lo, const char* msg) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer()) {
      errors.push_back(std::string("config: \"") + key + "\" must be an integer");
      return dflt;
    }
    int v = j[key].get<int>();
    if (v < lo) errors.push_back(msg);
    return v;
  };

  int horizon = get_int("horizon", 100, 1, "config: horizon must be >= 1");
  int particles = get_int("particles", 10000, 100, "config: particle count must be >= 100");
  int trials = get_int("trials", 200, 1, "config: trials must be >= 1");
  int checkpoint_every =
      get_int("checkpoint_every", 1, 1, "config: checkpoint_every must be >= 1");
  int reference_points =
      get_int("reference_points", 256, 1, "config: reference_points must be >= 1");
  int subsample_cap = get_int("subsample_cap", 2000, 10, "config: subsample_cap must be >= 10");

  RunMode mode = RunMode::ExactConvolution;
  if (j.contains("mode")) {
    const std::string m = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (m == "exact")
      mode = RunMode::ExactConvolution;
    else if (m == "particles")
      mode = RunMode::Particles;
    else
      errors.push_back("config: mode must be \"exact\" or \"particles\"");
  }

  double epsilon = 0.1;
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number())
      errors.push_back("config: epsilon must be a number");
    else if ((epsilon = j["epsilon"].get<double>()) <= 0)
      errors.push_back("config: epsilon must be positive");
  }

  double prune_wmin = 0;
  if (j.contains("prune_wmin")) {
    if (!j["prune_wmin"].is_number())
      errors.push_back("config: prune_wmin must be a number");
    else if ((prune_wmin = j["prune_wmin"].get<double>()) < 0 || prune_wmin >= 1)
      errors.push_back("config: prune_wmin must lie in [0,1)");
  }

  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      errors.push_back("config: seed must be an integer");
    else
      seed = j["seed"].get<std::uint64_t>();
  } else {
    out.seed_auto = true;
  }

  std::vector<int> n_grid;
  if (j.contains("n_grid")) {
    if (!j["n_grid"].is_array()) {
      errors.push_back("config: n_grid must be an array of integers");
    } else {
      for (const auto& e : j["n_grid"]) {
        if (!e.is_number_integer() || e.get<int>() < 1) {
          errors.push_back("config: n_grid entries must be integers >= 1");
          break;
        }
        n_grid.push_back(e.get<int>());
      }
    }
  }

  std::string observable_id = j.value("observable", std::string());
  if (!observable_id.empty() && space) {
    try {
      make_observable(*space, observable_id);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }

  std::optional<PointMeasure> start;
  if (j.contains("start") && space) {
    try {
      start = point_measure_from_json(*space, j["start"]);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }

  if (!errors.empty() || !space || !family) return out;

  WalkConfig cfg;
  cfg.family = std::move(*family);
  cfg.start = std::move(start);
  cfg.horizon = horizon;
  cfg.mode = mode;
  cfg.particles = particles;
  cfg.seed = seed;
  cfg.observable_id = observable_id;
  cfg.epsilon = epsilon;
  cfg.trials = trials;
  cfg.checkpoint_every = checkpoint_every;
  cfg.n_grid = std::move(n_grid);
  cfg.reference_points = reference_points;
  cfg.prune_wmin = prune_wmin;
  cfg.subsample_cap = subsample_cap;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    errors.push_back(e.what());
    return out;
  }
  out.config = std::move(cfg);
  return out;
}

Json plan_to_json(const TransportPlan& plan) {
  Json j;
  Json entries = Json::array();
  for (const auto& e : plan.entries) entries.push_back(Json::array({e.from, e.to, e.mass}));
  j["entries"] = entries;
  j["cost"] = plan.cost;
  j["certified"] = plan.certified;
  j["max_dual_violation"] = plan.max_dual_violation;
  j["pivots"] = plan.pivots;
  return j;
}

Json netset_to_json(const NetSet& a) {
  Json j;
  j["net_hash"] = a.net().id;
  j["members"] = a.members();
  return j;
}

Json partition_to_json(const WidePartition& p) {
  Json j;
  j["eps"] = p.eps;
  j["centers"] = p.centers;
  Json cells = Json::array();
  for (const auto& c : p.cells) cells.push_back(netset_to_json(c));
  j["cells"] = cells;
  return j;
}

Json record_to_json(const ConvergenceRecord& r) {
  Json j;
  j["step"] = r.step;
  j["dist"] = r.dist;
  j["support_radius"] = r.support_radius;
  j["support_size"] = r.support_size;
  j["subsample_size"] = r.subsample_size;
  return j;
}

Json series_to_json(const ConvergenceSeries& s) {
  Json j;
  j["metric"] = s.metric;
  j["reference_discretization"] = s.reference_discretization;
  Json recs = Json::array();
  for (const auto& r : s.records) recs.push_back(record_to_json(r));
  j["records"] = recs;
  return j;
}

Json probe_to_json(const StandingAssumptionProbe& p) {
  Json j;
  j["m"] = p.m;
  j["worst"] = p.worst;
  j["satisfied"] = p.satisfied;
  j["cap"] = p.cap;
  j["worst_by_m"] = p.worst_by_m;
  return j;
}

Json ergodic_to_json(const ErgodicReport& r) {
  Json j;
  j["checkpoints"] = r.checkpoints;
  j["reference_integral"] = r.reference_integral;
  j["averages"] = r.averages;
  return j;
}

Json ld_to_json(const LdReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["n_grid"] = r.n_grid;
  j["exceed_counts"] = r.exceed_counts;
  j["p_hat"] = r.p_hat;
  j["trials"] = r.trials;
  j["degenerate"] = r.degenerate;
  if (!r.degenerate) {
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["slope_stderr"] = r.slope_stderr;
    j["r2"] = r.r2;
  }
  return j;
}

Json sphere_share_to_json(const SphereShareReport& r) {
  Json j;
  j["share"] = r.share;
  j["cap_area"] = r.cap_area;
  j["points"] = r.points;
  return j;
}

Json stromberg_to_json(const StrombergReport& r) {
  Json j;
  j["supports"] = r.supports;
  j["tv_to_haar"] = r.tv_to_haar;
  j["tv_successive"] = r.tv_successive;
  j["haar_gap"] = r.haar_gap;
  j["oscillation"] = r.oscillation;
  j["convergent"] = r.convergent;
  return j;
}

Json census_row_to_json(const CensusRow& r) {
  Json j;
  j["group"] = r.group;
  j["order"] = r.order;
  j["measure_index"] = r.measure_index;
  j["support"] = r.support;
  j["adapted"] = r.adapted;
  j["coset_aperiodic"] = r.coset_aperiodic;
  j["strictly_aperiodic"] = r.strictly_aperiodic;
  j["tv_final"] = r.tv_final;
  j["oscillation"] = r.oscillation;
  j["converged"] = r.converged;
  j["witness_count"] = r.witness_count;
  j["ok"] = r.ok;
  j["witness_ok"] = r.witness_ok;
  return j;
}

Json census_to_json(const CensusReport& r) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(census_row_to_json(row));
  j["rows"] = rows;
  j["violations"] = r.violations;
  j["witness_mismatches"] = r.witness_mismatches;
  return j;
}

}  // namespace isowalk
