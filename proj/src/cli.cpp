#include "isowalk/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isowalk/experiments.hpp"
#include "isowalk/groups.hpp"
#include "isowalk/json_io.hpp"
#include "isowalk/selfcheck.hpp"
#include "isowalk/transport.hpp"

namespace fs = std::filesystem;

namespace isowalk {
namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 1, kRuntimeError = 2, kCheckFailed = 3 };

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

// Shared output plumbing: flat records -> records.jsonl (and records.csv),
// summary -> summary.json, run metadata -> manifest.json. Timestamps live
// only in the manifest so a rerun with the same seed is byte-identical.
struct RunOutput {
  std::vector<Json> records;
  Json summary;
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "jsonl";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_config) {
  if (with_config) cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "record format: jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&o](const std::uint64_t& v) {
           o.seed = v;
           o.seed_given = true;
         },
         "seed override (recorded in the manifest)");
  cmd->add_option("--threads", o.threads, "worker threads (reserved, currently single-threaded)")
      ->capture_default_str();
}

std::uint64_t auto_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Loads + validates the config; prints every violation on failure.
std::optional<WalkConfig> load_config(const CommonOpts& o) {
  if (o.config_path.empty()) {
    std::cerr << "error: --config is required for this subcommand\n";
    return std::nullopt;
  }
  std::ifstream is(o.config_path);
  if (!is) {
    std::cerr << "error: cannot read config file " << o.config_path << "\n";
    return std::nullopt;
  }
  Json j;
  try {
    j = Json::parse(is);
  } catch (const std::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return std::nullopt;
  }
  auto v = config_from_json(j);
  if (!v.config) {
    for (const auto& e : v.errors) std::cerr << "error: " << e << "\n";
    return std::nullopt;
  }
  if (o.seed_given)
    v.config->seed = o.seed;
  else if (v.seed_auto)
    v.config->seed = auto_seed();
  return v.config;
}

int persist(const CommonOpts& o, const std::string& command, const std::string& started,
            const RunOutput& out) {
  fs::create_directories(o.out_dir);
  fs::path dir(o.out_dir);
  std::vector<std::string> written;

  std::ostringstream jl;
  for (const auto& r : out.records) jl << r.dump() << "\n";
  write_file_atomic(dir / "records.jsonl", jl.str());
  written.push_back((dir / "records.jsonl").string());

  if (o.format == "csv") {
    std::ostringstream cs;
    if (!out.records.empty()) {
      bool first = true;
      for (auto it = out.records.front().begin(); it != out.records.front().end(); ++it) {
        if (!first) cs << ",";
        cs << csv_escape(it.key());
        first = false;
      }
      cs << "\n";
      for (const auto& r : out.records) {
        first = true;
        for (auto it = r.begin(); it != r.end(); ++it) {
          if (!first) cs << ",";
          cs << csv_cell(it.value());
          first = false;
        }
        cs << "\n";
      }
    }
    write_file_atomic(dir / "records.csv", cs.str());
    written.push_back((dir / "records.csv").string());
  }

  write_file_atomic(dir / "summary.json", out.summary.dump(2) + "\n");
  written.push_back((dir / "summary.json").string());

  Json manifest;
  manifest["command"] = command;
  manifest["config"] = o.config_path.empty() ? Json() : Json(o.config_path);
  manifest["seed"] = o.seed;
  manifest["version"] = kVersion;
  manifest["threads"] = o.threads;
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  manifest["outputs"] = written;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << command << ": wrote " << (dir / "summary.json").string() << "\n";
  return kOk;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_converge(CommonOpts& o, const std::string& started) {
  auto cfg = load_config(o);
  if (!cfg) return kConfigError;
  o.seed = cfg->seed;
  auto series = run_convergence(*cfg);
  RunOutput out;
  for (const auto& r : series.records) out.records.push_back(record_to_json(r));
  out.summary["command"] = "converge";
  out.summary["metric"] = series.metric;
  out.summary["reference_discretization"] = series.reference_discretization;
  out.summary["steps"] = series.records.size();
  out.summary["final_dist"] = series.records.empty() ? 0.0 : series.records.back().dist;
  out.summary["config"] = config_to_json(*cfg);
  return persist(o, "converge", started, out);
}

int cmd_probe_sa(CommonOpts& o, const std::string& started, double delta, int pairs, int m_cap,
                 int revalidate) {
  auto cfg = load_config(o);
  if (!cfg) return kConfigError;
  o.seed = cfg->seed;
  auto probe = probe_standing_assumption(cfg->family, delta, pairs, cfg->seed, m_cap);
  RunOutput out;
  for (std::size_t k = 0; k < probe.worst_by_m.size(); ++k) {
    Json r;
    r["m"] = k + 1;
    r["worst"] = probe.worst_by_m[k];
    out.records.push_back(r);
  }
  out.summary["command"] = "probe-sa";
  out.summary["delta"] = delta;
  out.summary["pairs"] = pairs;
  out.summary["probe"] = probe_to_json(probe);
  bool ok = probe.satisfied;
  if (ok && revalidate > 0) {
    double worst = revalidate_standing_assumption(cfg->family, probe.m, revalidate, cfg->seed);
    out.summary["revalidation_draws"] = revalidate;
    out.summary["revalidation_worst"] = worst;
    ok = worst < delta;
  }
  out.summary["satisfied"] = ok;
  int code = persist(o, "probe-sa", started, out);
  return code != kOk ? code : (ok ? kOk : kCheckFailed);
}

int cmd_ergodic(CommonOpts& o, const std::string& started) {
  auto cfg = load_config(o);
  if (!cfg) return kConfigError;
  o.seed = cfg->seed;
  if (cfg->observable_id.empty()) {
    std::cerr << "error: ergodic runs need an \"observable\" in the config\n";
    return kConfigError;
  }
  std::vector<int> checkpoints;
  for (int n = cfg->checkpoint_every; n <= cfg->horizon; n += cfg->checkpoint_every)
    checkpoints.push_back(n);
  if (checkpoints.empty() || checkpoints.back() != cfg->horizon)
    checkpoints.push_back(cfg->horizon);
  auto rep = run_ergodic(*cfg, checkpoints);
  RunOutput out;
  double worst_final = 0, mean_final = 0;
  for (std::size_t t = 0; t < rep.averages.size(); ++t) {
    for (std::size_t c = 0; c < rep.checkpoints.size(); ++c) {
      Json r;
      r["trial"] = t;
      r["n"] = rep.checkpoints[c];
      r["average"] = rep.averages[t][c];
      r["deviation"] = rep.averages[t][c] - rep.reference_integral;
      out.records.push_back(r);
    }
    double d = std::abs(rep.averages[t].back() - rep.reference_integral);
    worst_final = std::max(worst_final, d);
    mean_final += d / static_cast<double>(rep.averages.size());
  }
  out.summary["command"] = "ergodic";
  out.summary["observable"] = cfg->observable_id;
  out.summary["reference_integral"] = rep.reference_integral;
  out.summary["trials"] = rep.averages.size();
  out.summary["final_n"] = rep.checkpoints.back();
  out.summary["worst_final_deviation"] = worst_final;
  out.summary["mean_final_deviation"] = mean_final;
  out.summary["config"] = config_to_json(*cfg);
  return persist(o, "ergodic", started, out);
}

int cmd_ld(CommonOpts& o, const std::string& started) {
  auto cfg = load_config(o);
  if (!cfg) return kConfigError;
  o.seed = cfg->seed;
  auto rep = run_large_deviations(*cfg);
  RunOutput out;
  for (std::size_t i = 0; i < rep.n_grid.size(); ++i) {
    Json r;
    r["n"] = rep.n_grid[i];
    r["exceed"] = rep.exceed_counts[i];
    r["p_hat"] = rep.p_hat[i];
    out.records.push_back(r);
  }
  out.summary["command"] = "ld";
  out.summary["report"] = ld_to_json(rep);
  out.summary["config"] = config_to_json(*cfg);
  return persist(o, "ld", started, out);
}

int cmd_ito_kawada(CommonOpts& o, const std::string& started, int max_order, int measures,
                   int horizon, int window) {
  if (!o.seed_given) o.seed = auto_seed();
  auto rep = run_ito_kawada_census(max_order, measures, o.seed, horizon, window);
  RunOutput out;
  for (const auto& row : rep.rows) out.records.push_back(census_row_to_json(row));
  out.summary["command"] = "ito-kawada";
  out.summary["max_order"] = max_order;
  out.summary["measures_per_group"] = measures;
  out.summary["rows"] = rep.rows.size();
  out.summary["violations"] = rep.violations;
  out.summary["witness_mismatches"] = rep.witness_mismatches;
  bool ok = rep.violations == 0 && rep.witness_mismatches == 0;
  out.summary["verdict"] = ok ? "criterion-consistent" : "mismatch";
  int code = persist(o, "ito-kawada", started, out);
  return code != kOk ? code : (ok ? kOk : kCheckFailed);
}

int cmd_stromberg(CommonOpts& o, const std::string& started, int horizon, int window) {
  auto rep = run_stromberg(horizon, window);
  RunOutput out;
  for (std::size_t i = 0; i < rep.supports.size(); ++i) {
    Json r;
    r["step"] = i + 1;
    r["support"] = rep.supports[i];
    r["tv_to_haar"] = rep.tv_to_haar[i];
    r["tv_successive"] = rep.tv_successive[i];
    out.records.push_back(r);
  }
  out.summary["command"] = "stromberg";
  out.summary["report"] = stromberg_to_json(rep);
  out.summary["verdict"] = rep.convergent ? "convergent" : "non-convergent";
  int code = persist(o, "stromberg", started, out);
  return code != kOk ? code : (rep.convergent ? kCheckFailed : kOk);
}

int cmd_sphere_equi(CommonOpts& o, const std::string& started, int n, const std::string& rot_a,
                    const std::string& rot_b, const std::string& start_pt,
                    const std::string& cap_axis, double cos_theta) {
  auto parse_rot = [](const std::string& s) -> IsometryElement {
    auto v = parse_double_list(s);
    if (v.size() != 4)
      throw std::invalid_argument("rotation must be \"ax,ay,az,angle\", got " + s);
    return SphereRotation{Quat::from_axis_angle(v[0], v[1], v[2], v[3])};
  };
  auto space = Space::sphere2();
  IsometryElement A = parse_rot(rot_a);
  IsometryElement B = parse_rot(rot_b);
  auto sp = parse_double_list(start_pt);
  auto ax = parse_double_list(cap_axis);
  if (sp.size() != 3 || ax.size() != 3)
    throw std::invalid_argument("start point and cap axis must be \"x,y,z\"");
  double norm = std::sqrt(sp[0] * sp[0] + sp[1] * sp[1] + sp[2] * sp[2]);
  if (norm == 0) throw std::invalid_argument("start point must be nonzero");
  SpacePoint x = SpacePoint::sphere(sp[0] / norm, sp[1] / norm, sp[2] / norm);
  CapSpec cap;
  cap.ax = ax[0];
  cap.ay = ax[1];
  cap.az = ax[2];
  cap.cos_theta = cos_theta;
  auto rep = run_sphere_equidistribution(space, A, B, x, n, cap);
  RunOutput out;
  Json r;
  r["n"] = n;
  r["points"] = rep.points;
  r["share"] = rep.share;
  r["cap_area"] = rep.cap_area;
  r["abs_error"] = std::abs(rep.share - rep.cap_area);
  out.records.push_back(r);
  out.summary["command"] = "sphere-equi";
  out.summary["report"] = sphere_share_to_json(rep);
  out.summary["abs_error"] = std::abs(rep.share - rep.cap_area);
  return persist(o, "sphere-equi", started, out);
}

FiniteGroupTable parse_group(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("group must be name:order, e.g. cyclic:8");
  std::string name = s.substr(0, colon);
  int n = std::stoi(s.substr(colon + 1));
  if (name == "cyclic") return FiniteGroupTable::cyclic(n);
  if (name == "dihedral") return FiniteGroupTable::dihedral(n);
  if (name == "symmetric") return FiniteGroupTable::symmetric(n);
  throw std::invalid_argument("unknown group family \"" + name + "\"");
}

int cmd_analyze_group(CommonOpts& o, const std::string& started, const std::string& group,
                      const std::string& support_csv, const std::string& measure_path) {
  Space s = Space::circle();  // replaced below
  std::vector<int> support;
  if (!measure_path.empty()) {
    std::ifstream is(measure_path);
    if (!is) {
      std::cerr << "error: cannot read measure file " << measure_path << "\n";
      return kConfigError;
    }
    auto mu = iso_measure_from_json(Json::parse(is));
    if (mu.space().kind() != SpaceKind::FiniteGroup) {
      std::cerr << "error: analyze-group needs a measure on a finite group\n";
      return kConfigError;
    }
    s = mu.space();
    for (const auto& atom : mu.atoms())
      support.push_back(std::get<GroupShift>(atom.element).element);
  } else {
    if (group.empty() || support_csv.empty()) {
      std::cerr << "error: pass either --measure FILE or --group NAME:N with --support LIST\n";
      return kConfigError;
    }
    s = Space::finite_group(parse_group(group));
    support = parse_int_list(support_csv);
  }
  const auto& g = s.group();
  for (int e : support)
    if (e < 0 || e >= g.order()) {
      std::cerr << "error: support element " << e << " outside 0.." << g.order() - 1 << "\n";
      return kConfigError;
    }

  RunOutput out;
  out.summary["command"] = "analyze-group";
  out.summary["group"] = g.name();
  out.summary["order"] = g.order();
  out.summary["support"] = support;
  out.summary["adapted"] = is_adapted(g, support);
  auto trap = coset_trap(g, support);
  out.summary["coset_aperiodic"] = !trap.has_value();
  if (trap) {
    out.summary["coset_trap"]["rep"] = trap->rep;
    out.summary["coset_trap"]["subgroup"] = trap->subgroup.elements;
  }
  auto ntrap = normal_coset_trap(g, support);
  out.summary["strictly_aperiodic"] = !ntrap.has_value();
  if (ntrap) {
    out.summary["normal_coset_trap"]["rep"] = ntrap->rep;
    out.summary["normal_coset_trap"]["subgroup"] = ntrap->subgroup.elements;
  }
  if (g.order() <= 20 && !support.empty()) {
    std::vector<std::vector<int>> perms;
    for (int e : support) perms.push_back(g.left_shift_perm(e));
    auto scan = deterministic_image_witnesses(g.order(), perms);
    out.summary["witness_candidates"] = scan.candidate_count;
    out.summary["witness_list_truncated"] = scan.truncated;
    for (const auto& w : scan.witnesses) {
      Json r;
      r["a"] = w.a;
      r["b"] = w.b;
      out.records.push_back(r);
    }
  }
  return persist(o, "analyze-group", started, out);
}

int cmd_ot(CommonOpts& o, const std::string& started, const std::string& a_path,
           const std::string& b_path, bool with_plan) {
  auto read_measure = [](const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read measure file " + path);
    return point_measure_from_json(Json::parse(is));
  };
  PointMeasure a = read_measure(a_path);
  PointMeasure b = read_measure(b_path);
  auto plan = w1_exact(a, b);
  std::printf("%.17g\n", plan.cost);
  RunOutput out;
  for (const auto& e : plan.entries) {
    Json r;
    r["from"] = e.from;
    r["to"] = e.to;
    r["mass"] = e.mass;
    out.records.push_back(r);
  }
  out.summary["command"] = "ot";
  out.summary["cost"] = plan.cost;
  out.summary["certified"] = plan.certified;
  out.summary["max_dual_violation"] = plan.max_dual_violation;
  out.summary["pivots"] = plan.pivots;
  if (with_plan) out.summary["plan"] = plan_to_json(plan);
  int code = persist(o, "ot", started, out);
  return code != kOk ? code : (plan.certified ? kOk : kCheckFailed);
}

int cmd_selftest(CommonOpts& o, const std::string& started) {
  if (!o.seed_given) o.seed = 20240601;
  auto res = run_selfcheck(o.seed);
  RunOutput out;
  for (const auto& f : res.failures) {
    Json r;
    r["failure"] = f;
    out.records.push_back(r);
    std::cerr << "selftest failure: " << f << "\n";
  }
  out.summary["command"] = "selftest";
  out.summary["passed"] = res.passed;
  out.summary["failed"] = res.failed;
  std::cout << "selftest: " << res.passed << " passed, " << res.failed << " failed\n";
  int code = persist(o, "selftest", started, out);
  return code != kOk ? code : (res.failed == 0 ? kOk : kCheckFailed);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"isowalk: random walks by isometries on compact metric spaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  const std::string started = utc_now();

  CommonOpts converge_o;
  auto* converge = app.add_subcommand("converge", "distance-to-invariant series");
  add_common(converge, converge_o, true);

  CommonOpts probe_o;
  double probe_delta = 0.5;
  int probe_pairs = 32, probe_cap = 64, probe_reval = 100;
  auto* probe = app.add_subcommand("probe-sa", "probe the window-contraction assumption");
  add_common(probe, probe_o, true);
  probe->add_option("--delta", probe_delta, "contraction threshold")->capture_default_str();
  probe->add_option("--pairs", probe_pairs, "start pairs per window length")
      ->capture_default_str();
  probe->add_option("--m-cap", probe_cap, "largest window length tried")->capture_default_str();
  probe->add_option("--revalidate", probe_reval, "fresh draws for revalidation (0 = skip)")
      ->capture_default_str();

  CommonOpts ergodic_o;
  auto* ergodic = app.add_subcommand("ergodic", "Birkhoff averages along trajectories");
  add_common(ergodic, ergodic_o, true);

  CommonOpts ld_o;
  auto* ld = app.add_subcommand("ld", "large-deviation exceedance decay");
  add_common(ld, ld_o, true);

  CommonOpts census_o;
  int census_order = 12, census_measures = 200, census_horizon = 500, census_window = 100;
  auto* census = app.add_subcommand("ito-kawada", "convergence census over finite groups");
  add_common(census, census_o, false);
  census->add_option("--max-order", census_order, "largest group order")->capture_default_str();
  census->add_option("--measures", census_measures, "random measures per group")
      ->capture_default_str();
  census->add_option("--horizon", census_horizon, "convolution steps")->capture_default_str();
  census->add_option("--window", census_window, "oscillation window")->capture_default_str();

  CommonOpts strom_o;
  int strom_horizon = 100, strom_window = 100;
  auto* strom = app.add_subcommand("stromberg", "alternating two-measure walk on S3");
  add_common(strom, strom_o, false);
  strom->add_option("--horizon", strom_horizon, "steps")->capture_default_str();
  strom->add_option("--window", strom_window, "oscillation window")->capture_default_str();

  CommonOpts sphere_o;
  int sphere_n = 18;
  double sphere_cos = 0.4;
  std::string sphere_rot_a = "1,0,0,0.9272952180016122";
  std::string sphere_rot_b = "0,1,0,0.9272952180016122";
  std::string sphere_start = "0,0,1";
  std::string sphere_axis = "0,0,1";
  auto* sphere = app.add_subcommand("sphere-equi", "word-set equidistribution on the sphere");
  add_common(sphere, sphere_o, false);
  sphere->add_option("--n", sphere_n, "word length (2^n points)")->capture_default_str();
  sphere->add_option("--rot-a", sphere_rot_a, "rotation A as ax,ay,az,angle")
      ->capture_default_str();
  sphere->add_option("--rot-b", sphere_rot_b, "rotation B as ax,ay,az,angle")
      ->capture_default_str();
  sphere->add_option("--start", sphere_start, "start point x,y,z")->capture_default_str();
  sphere->add_option("--cap-axis", sphere_axis, "cap axis x,y,z")->capture_default_str();
  sphere->add_option("--cos-theta", sphere_cos, "cap boundary dot product")
      ->capture_default_str();

  CommonOpts group_o;
  std::string group_spec, group_support, group_measure;
  auto* groupc = app.add_subcommand("analyze-group", "classify a support on a finite group");
  add_common(groupc, group_o, false);
  groupc->add_option("--group", group_spec, "built-in group, e.g. cyclic:8");
  groupc->add_option("--support", group_support, "comma-separated element indices");
  groupc->add_option("--measure", group_measure, "iso-measure JSON file (alternative input)");

  CommonOpts ot_o;
  std::string ot_a, ot_b;
  bool ot_plan = false;
  auto* ot = app.add_subcommand("ot", "exact W1 between two measure files");
  add_common(ot, ot_o, false);
  ot->add_option("--a", ot_a, "first measure JSON file")->required();
  ot->add_option("--b", ot_b, "second measure JSON file")->required();
  ot->add_flag("--plan", ot_plan, "include the full plan in the summary");

  CommonOpts self_o;
  auto* self = app.add_subcommand("selftest", "reduced-size property suite");
  add_common(self, self_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (converge->parsed()) return cmd_converge(converge_o, started);
    if (probe->parsed())
      return cmd_probe_sa(probe_o, started, probe_delta, probe_pairs, probe_cap, probe_reval);
    if (ergodic->parsed()) return cmd_ergodic(ergodic_o, started);
    if (ld->parsed()) return cmd_ld(ld_o, started);
    if (census->parsed())
      return cmd_ito_kawada(census_o, started, census_order, census_measures, census_horizon,
                            census_window);
    if (strom->parsed()) return cmd_stromberg(strom_o, started, strom_horizon, strom_window);
    if (sphere->parsed())
      return cmd_sphere_equi(sphere_o, started, sphere_n, sphere_rot_a, sphere_rot_b,
                             sphere_start, sphere_axis, sphere_cos);
    if (groupc->parsed())
      return cmd_analyze_group(group_o, started, group_spec, group_support, group_measure);
    if (ot->parsed()) return cmd_ot(ot_o, started, ot_a, ot_b, ot_plan);
    if (self->parsed()) return cmd_selftest(self_o, started);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
  std::cerr << "error: no subcommand\n";
  return kConfigError;
}

}  // namespace isowalk
