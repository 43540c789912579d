#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isowalk/cli.hpp"
#include "isowalk/json_io.hpp"

using namespace isowalk;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"isowalk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "isowalk_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json load_json(const fs::path& p) { return Json::parse(slurp(p)); }

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  os << content;
}

Json lazy_walk_config() {
  Json space = {{"kind", "finite_group"}, {"builtin", "cyclic"}, {"n", 8}};
  Json member = Json::array({Json::array({0, 0.5}), Json::array({1, 0.5})});
  Json cfg;
  cfg["space"] = space;
  cfg["family"] = {{"schedule", "cyclic"}, {"members", Json::array({member})}};
  cfg["horizon"] = 40;
  cfg["checkpoint_every"] = 10;
  cfg["seed"] = 7;
  return cfg;
}

}  // namespace

TEST_CASE("bare invocations and parse failures exit with a usage error") {
  CHECK(run({}) == 1);
  CHECK(run({"no-such-subcommand"}) == 1);
  CHECK(run({"converge", "--format", "yaml"}) == 1);
  CHECK(run({"--version"}) == 0);
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("alternating-walk run writes records, summary, and manifest") {
  auto dir = fresh_dir("stromberg");
  CHECK(run({"stromberg", "--horizon", "30", "--window", "10", "--out", dir.string()}) == 0);

  auto records = slurp(dir / "records.jsonl");
  CHECK(line_count(records) == 30);
  auto first = Json::parse(records.substr(0, records.find('\n')));
  CHECK(first["step"] == 1);
  CHECK(first["support"] == Json::array({1, 3}));

  auto summary = load_json(dir / "summary.json");
  CHECK(summary["verdict"] == "non-convergent");
  CHECK(summary["report"]["oscillation"].get<double>() == doctest::Approx(1.0));

  auto manifest = load_json(dir / "manifest.json");
  CHECK(manifest["command"] == "stromberg");
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("csv format adds a records.csv with a header row") {
  auto dir = fresh_dir("csv");
  CHECK(run({"stromberg", "--horizon", "10", "--window", "5", "--out", dir.string(), "--format",
             "csv"}) == 0);
  auto csv = slurp(dir / "records.csv");
  CHECK(line_count(csv) == 11);
  CHECK(csv.rfind("step,support,tv_to_haar,tv_successive", 0) == 0);
}

TEST_CASE("converge rejects missing, malformed, and invalid configs") {
  auto dir = fresh_dir("badcfg");
  CHECK(run({"converge", "--out", dir.string()}) == 1);  // no --config
  CHECK(run({"converge", "--config", (dir / "nope.json").string()}) == 1);

  write_text(dir / "notjson.json", "{ nope");
  CHECK(run({"converge", "--config", (dir / "notjson.json").string()}) == 1);

  auto bad = lazy_walk_config();
  bad["horizon"] = 0;
  bad["particles"] = 5;
  bad["epsilon"] = -2.0;
  write_text(dir / "invalid.json", bad.dump());
  CHECK(run({"converge", "--config", (dir / "invalid.json").string()}) == 1);
}

TEST_CASE("converge runs a config and reruns byte-identically") {
  auto dir = fresh_dir("converge");
  write_text(dir / "cfg.json", lazy_walk_config().dump());

  auto out1 = dir / "run1";
  auto out2 = dir / "run2";
  CHECK(run({"converge", "--config", (dir / "cfg.json").string(), "--out", out1.string()}) == 0);
  CHECK(run({"converge", "--config", (dir / "cfg.json").string(), "--out", out2.string()}) == 0);

  auto records = slurp(out1 / "records.jsonl");
  CHECK(line_count(records) == 4);
  CHECK(records == slurp(out2 / "records.jsonl"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));

  auto summary = load_json(out1 / "summary.json");
  CHECK(summary["metric"] == "tv");
  CHECK(summary["steps"] == 4);
  CHECK(summary["config"]["seed"] == 7);
  CHECK(summary["final_dist"].get<double>() < 0.2);
}

TEST_CASE("seed override changes the recorded seed") {
  auto dir = fresh_dir("seed");
  auto cfg = lazy_walk_config();
  cfg["mode"] = "particles";
  cfg["particles"] = 500;
  cfg["horizon"] = 5;
  cfg["checkpoint_every"] = 5;
  write_text(dir / "cfg.json", cfg.dump());
  CHECK(run({"converge", "--config", (dir / "cfg.json").string(), "--out", dir.string(), "--seed",
             "99"}) == 0);
  auto summary = load_json(dir / "summary.json");
  CHECK(summary["config"]["seed"] == 99);
  auto manifest = load_json(dir / "manifest.json");
  CHECK(manifest["seed"] == 99);
}

TEST_CASE("transport subcommand reports the exact cost") {
  auto dir = fresh_dir("ot");
  Json a, b;
  a["space"] = {{"kind", "circle"}};
  a["carrier"] = "points";
  a["atoms"] = Json::array({Json::array({0.0, 1.0})});
  b = a;
  b["atoms"] = Json::array({Json::array({0.5, 1.0})});
  write_text(dir / "a.json", a.dump());
  write_text(dir / "b.json", b.dump());

  CHECK(run({"ot", "--a", (dir / "a.json").string(), "--b", (dir / "b.json").string(), "--out",
             dir.string(), "--plan"}) == 0);
  auto summary = load_json(dir / "summary.json");
  CHECK(summary["cost"].get<double>() == doctest::Approx(0.5));
  CHECK(summary["certified"] == true);
  CHECK(summary["plan"]["entries"].size() == 1);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 1);

  CHECK(run({"ot", "--a", (dir / "missing.json").string(), "--b", (dir / "b.json").string()}) ==
        1);
  CHECK(run({"ot", "--a", (dir / "a.json").string()}) == 1);  // --b required
}

TEST_CASE("group analysis classifies supports and lists witnesses") {
  auto dir = fresh_dir("group1");
  CHECK(run({"analyze-group", "--group", "cyclic:8", "--support", "0,1", "--out",
             dir.string()}) == 0);
  auto s1 = load_json(dir / "summary.json");
  CHECK(s1["adapted"] == true);
  CHECK(s1["coset_aperiodic"] == true);
  CHECK(s1["strictly_aperiodic"] == true);
  CHECK(s1["witness_candidates"] == 0);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 0);

  auto dir2 = fresh_dir("group2");
  CHECK(run({"analyze-group", "--group", "cyclic:8", "--support", "1,3", "--out",
             dir2.string()}) == 0);
  auto s2 = load_json(dir2 / "summary.json");
  CHECK(s2["adapted"] == true);
  CHECK(s2["coset_aperiodic"] == false);
  CHECK(s2["coset_trap"]["rep"] == 1);
  CHECK(s2["coset_trap"]["subgroup"] == Json::array({0, 2, 4, 6}));
  CHECK(s2["strictly_aperiodic"] == false);
  CHECK(s2["witness_candidates"] == 2);
  CHECK(line_count(slurp(dir2 / "records.jsonl")) == 2);

  CHECK(run({"analyze-group", "--group", "cyclic:8", "--support", "0,9"}) == 1);
  CHECK(run({"analyze-group", "--group", "cyclic:8"}) == 1);
  CHECK(run({"analyze-group", "--group", "weird:5", "--support", "0"}) == 1);
}

TEST_CASE("group analysis accepts a measure file") {
  auto dir = fresh_dir("group3");
  Json mu;
  mu["space"] = {{"kind", "finite_group"}, {"builtin", "symmetric"}, {"n", 3}};
  mu["carrier"] = "isometries";
  mu["atoms"] = Json::array({Json::array({1, 0.5}), Json::array({3, 0.5})});
  write_text(dir / "mu.json", mu.dump());
  CHECK(run({"analyze-group", "--measure", (dir / "mu.json").string(), "--out", dir.string()}) ==
        0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["adapted"] == true);
  CHECK(s["coset_aperiodic"] == false);
  CHECK(s["strictly_aperiodic"] == true);
}

TEST_CASE("census subcommand passes on a small order bound") {
  auto dir = fresh_dir("census");
  CHECK(run({"ito-kawada", "--max-order", "5", "--measures", "2", "--horizon", "200", "--window",
             "40", "--seed", "3", "--out", dir.string()}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["verdict"] == "criterion-consistent");
  CHECK(s["violations"] == 0);
  // groups of order <= 5: Z/1..Z/5 and D2
  CHECK(s["rows"] == 12);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 12);
}

TEST_CASE("sphere equidistribution subcommand runs with defaults shrunk") {
  auto dir = fresh_dir("sphere");
  CHECK(run({"sphere-equi", "--n", "6", "--out", dir.string()}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["report"]["points"] == 64);
  CHECK(s["abs_error"].get<double>() >= 0.0);
  CHECK(run({"sphere-equi", "--rot-a", "1,0,0"}) == 1);  // malformed rotation
}

TEST_CASE("window probe subcommand gates its exit code on the verdict") {
  auto dir = fresh_dir("probe");
  write_text(dir / "cfg.json", lazy_walk_config().dump());
  CHECK(run({"probe-sa", "--config", (dir / "cfg.json").string(), "--out", dir.string(),
             "--pairs", "8", "--revalidate", "20"}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["satisfied"] == true);
  CHECK(s["probe"]["m"].get<int>() >= 1);
  CHECK(s["revalidation_worst"].get<double>() < 0.5);

  // deterministic shift: never contracts, exit signals the failed check
  auto rigid = lazy_walk_config();
  rigid["family"]["members"] = Json::array({Json::array({Json::array({1, 1.0})})});
  write_text(dir / "rigid.json", rigid.dump());
  CHECK(run({"probe-sa", "--config", (dir / "rigid.json").string(), "--out",
             (dir / "rigid_out").string(), "--pairs", "4", "--m-cap", "8"}) == 3);
}

TEST_CASE("ergodic subcommand requires an observable and writes trial records") {
  auto dir = fresh_dir("ergodic");
  write_text(dir / "noobs.json", lazy_walk_config().dump());
  CHECK(run({"ergodic", "--config", (dir / "noobs.json").string(), "--out", dir.string()}) == 1);

  auto cfg = lazy_walk_config();
  cfg["observable"] = "indicator:0";
  cfg["trials"] = 3;
  cfg["horizon"] = 50;
  cfg["checkpoint_every"] = 25;
  write_text(dir / "cfg.json", cfg.dump());
  CHECK(run({"ergodic", "--config", (dir / "cfg.json").string(), "--out", dir.string()}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["observable"] == "indicator:0");
  CHECK(s["reference_integral"].get<double>() == doctest::Approx(0.125));
  CHECK(s["trials"] == 3);
  CHECK(s["final_n"] == 50);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 6);  // 3 trials x 2 checkpoints
}

TEST_CASE("large-deviation subcommand writes one record per grid point") {
  auto dir = fresh_dir("ld");
  auto cfg = lazy_walk_config();
  cfg["observable"] = "indicator:0";
  cfg["trials"] = 1000;
  cfg["epsilon"] = 0.2;
  cfg["n_grid"] = Json::array({5, 10});
  write_text(dir / "cfg.json", cfg.dump());
  CHECK(run({"ld", "--config", (dir / "cfg.json").string(), "--out", dir.string()}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["report"]["trials"] == 1000);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 2);
}

TEST_CASE("config parsing accumulates every violation and flags missing seeds") {
  Json bad = lazy_walk_config();
  bad.erase("seed");
  bad["horizon"] = 0;
  bad["particles"] = 5;
  bad["epsilon"] = -1.0;
  bad["mode"] = "quantum";
  auto v = config_from_json(bad);
  CHECK(!v.config.has_value());
  CHECK(v.errors.size() >= 4);

  auto good = config_from_json(lazy_walk_config());
  REQUIRE(good.config.has_value());
  CHECK(!good.seed_auto);
  CHECK(good.config->seed == 7);
  CHECK(good.config->horizon == 40);

  Json noseed = lazy_walk_config();
  noseed.erase("seed");
  auto auto_seeded = config_from_json(noseed);
  REQUIRE(auto_seeded.config.has_value());
  CHECK(auto_seeded.seed_auto);
}

TEST_CASE("configs round-trip through their json form") {
  Json cfg = lazy_walk_config();
  cfg["mode"] = "particles";
  cfg["particles"] = 600;
  cfg["observable"] = "indicator:2";
  cfg["n_grid"] = Json::array({10, 20, 40});
  cfg["prune_wmin"] = 0.001;
  cfg["start"] = Json::array({Json::array({2, 0.5}), Json::array({5, 0.5})});
  auto first = config_from_json(cfg);
  REQUIRE(first.config.has_value());

  Json echoed = config_to_json(*first.config);
  auto second = config_from_json(echoed);
  REQUIRE(second.config.has_value());
  CHECK(second.config->horizon == first.config->horizon);
  CHECK(second.config->mode == RunMode::Particles);
  CHECK(second.config->particles == 600);
  CHECK(second.config->observable_id == "indicator:2");
  CHECK(second.config->n_grid == first.config->n_grid);
  CHECK(second.config->prune_wmin == first.config->prune_wmin);
  REQUIRE(second.config->start.has_value());
  CHECK(measures_equal(*second.config->start, *first.config->start));
  CHECK(config_to_json(*second.config) == echoed);
}

TEST_CASE("selftest subcommand passes its reduced property suite") {
  auto dir = fresh_dir("selftest");
  CHECK(run({"selftest", "--out", dir.string()}) == 0);
  auto s = load_json(dir / "summary.json");
  CHECK(s["failed"] == 0);
  CHECK(s["passed"].get<int>() >= 10);
  CHECK(line_count(slurp(dir / "records.jsonl")) == 0);
}
