#include <cmath>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "crlab/common.hpp"
#include "crlab/experiments.hpp"
#include "crlab/runner.hpp"

using namespace crlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("crlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 1.5, 0.75, 0.375}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(loglog_slope({2, 4, 8}, {4, 16, 64}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::isnan(loglog_slope({1}, {1})));
  CHECK(std::isnan(loglog_slope({1, 2}, {1, 0})));
}

TEST_CASE("every experiment has a valid default config") {
  for (const auto& id : experiment_ids()) {
    const ExperimentConfig c = default_config(id);
    CHECK(c.id == id);
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(default_config("nope"), ConfigError);
}

TEST_CASE("statistical experiments refuse too few trials") {
  ExperimentConfig c = default_config("variance-cr");
  c.trials = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(variance_cr(c), ConfigError);
  c.trials = 50;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.trials = 100;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation rejects bad ids and forms") {
  ExperimentConfig c = default_config("equi-cr");
  c.forms = {"area2"};  // a 2-form where 1-forms are needed
  CHECK_THROWS_AS(c.validate(), Error);
  c = default_config("expectation-cr");
  c.forms = {"no-such-form"};
  CHECK_THROWS_AS(c.validate(), Error);
  c = default_config("lp-closed");
  c.function = "z7";
  CHECK_THROWS_AS(c.validate(), Error);
  c = default_config("kernel-diag");
  c.k_grid = {32, -1};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config hash covers parameters and ignores jobs") {
  ExperimentConfig a = default_config("equi-cr");
  ExperimentConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);
  b.jobs = 4;
  CHECK(config_hash(a) == config_hash(b));
  b.seed += 1;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.cutoff.delta2 = 0.8;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.threshold = 2e-6;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("INI config precedence: defaults, [run], section, overrides") {
  const fs::path dir = scratch_dir("ini");
  const std::string path = write_file(dir / "c.ini",
                                      "[run]\nseed = 7\njobs = 2\n"
                                      "[cutoff]\ndelta1 = 0.2\n"
                                      "[equi-cr]\nk_grid = 16, 24\ntrials = 150\nforms = dtheta2\n");
  ExperimentConfig c = load_config("equi-cr", path);
  CHECK(c.seed == 7);
  CHECK(c.jobs == 2);
  CHECK(c.cutoff.delta1 == 0.2);
  CHECK(c.k_grid == std::vector<double>{16, 24});
  CHECK(c.trials == 150);
  CHECK(c.forms == std::vector<std::string>{"dtheta2"});
  RunOverrides o;
  o.seed = 9;
  o.k_grid = parse_k_grid("32");
  o.trials = 120;
  c = load_config("equi-cr", path, o);
  CHECK(c.seed == 9);
  CHECK(c.k_grid == std::vector<double>{32});
  CHECK(c.trials == 120);
  // Sections of other experiments do not leak.
  const ExperimentConfig v = load_config("variance-cr", path);
  CHECK(v.trials == default_config("variance-cr").trials);
  CHECK(v.seed == 7);
}

TEST_CASE("malformed configs are rejected") {
  const fs::path dir = scratch_dir("bad_ini");
  CHECK_THROWS_AS(load_config("equi-cr", write_file(dir / "a.ini", "[equi-cr]\ntrails = 100\n")), ConfigError);
  CHECK_THROWS_AS(load_config("equi-cr", write_file(dir / "b.ini", "[bogus]\nx = 1\n")), ConfigError);
  CHECK_THROWS_AS(load_config("equi-cr", write_file(dir / "c.ini", "[equi-cr]\ntrials = many\n")), ConfigError);
  CHECK_THROWS_AS(load_config("equi-cr", write_file(dir / "d.ini", "[equi-cr\ntrials = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_k_grid("16,,x"), ConfigError);
  CHECK_THROWS_AS(subcommand_experiments("frobnicate"), ConfigError);
  CHECK(subcommand_experiments("expectation-domain").size() == 2);
  CHECK(subcommand_experiments("all") == experiment_ids());
}

TEST_CASE("kernel-diag passes and reports an observed order") {
  const ExperimentReport r = kernel_diag(default_config("kernel-diag"));
  CHECK(r.passed());
  bool found = false;
  for (const auto& row : r.rows)
    if (row.quantity == "diag_ratio") {
      found = true;
      CHECK(row.observed_order == doctest::Approx(1.0).epsilon(0.4));
    }
  CHECK(found);
}

TEST_CASE("statistical runs are deterministic and independent of jobs") {
  ExperimentConfig c = default_config("expectation-cr");
  c.k_grid = {8};
  c.trials = 100;
  c.forms = {"area2"};
  const ExperimentReport a = expectation_cr(c);
  c.jobs = 3;
  const ExperimentReport b = expectation_cr(c);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].quantity == b.rows[i].quantity);
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].std_err == b.rows[i].std_err);
  }
  CHECK(a.passed());
  c.seed += 1;
  const ExperimentReport d = expectation_cr(c);
  CHECK(d.rows[1].value != a.rows[1].value);
}

TEST_CASE("report files: byte-identical CSV, documented headers, plot data") {
  ExperimentConfig c = default_config("kernel-diag");
  const fs::path d1 = scratch_dir("out1"), d2 = scratch_dir("out2");
  ExperimentReport r1 = kernel_diag(c), r2 = kernel_diag(c);
  write_manifest(make_manifest(c, "", d1.string()), d1.string());
  write_report(r1, d1.string());
  write_report(r2, d2.string());
  const std::string csv = read_file(d1 / "kernel-diag.csv");
  CHECK(csv == read_file(d2 / "kernel-diag.csv"));
  CHECK(csv.substr(0, csv.find('\n')) == kReportCsvHeader);
  const auto manifest = nlohmann::json::parse(read_file(d1 / "manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(manifest["seed"] == c.seed);
  const auto json = nlohmann::json::parse(read_file(d1 / "kernel-diag.json"));
  CHECK(json["pass"] == true);
  CHECK(json["provenance"]["config_hash"] == config_hash(c));
  CHECK(json["verdicts"].size() == r1.verdicts.size());

  const auto files = emit_plotdata(r1, d1.string());
  CHECK(!files.empty());
  for (const auto& f : files) {
    const std::string body = read_file(f);
    CHECK(body.substr(0, body.find('\n')) == kPlotCsvHeader);
  }

  ExperimentReport empty;
  empty.id = "empty";
  const fs::path d3 = scratch_dir("out3");
  CHECK(emit_plotdata(empty, d3.string()).empty());
  CHECK(empty.warnings.size() == 1);
  CHECK(fs::is_empty(d3));
}

TEST_CASE("equi-cr writes one plot file per test form") {
  ExperimentConfig c = default_config("equi-cr");
  c.k_grid = {8, 12};
  c.trials = 100;
  c.forms = {"dtheta2", "horizontal1"};
  ExperimentReport r = equidistribution_cr(c);
  const fs::path d = scratch_dir("equi");
  const auto files = emit_plotdata(r, d.string());
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(fs::path(f).filename().string());
  std::sort(names.begin(), names.end());
  CHECK(std::find(names.begin(), names.end(), "plot_dtheta2.csv") != names.end());
  CHECK(std::find(names.begin(), names.end(), "plot_horizontal1.csv") != names.end());
}

TEST_CASE("the shipped example config reproduces the defaults") {
  const std::string path = std::string(CRLAB_SOURCE_DIR) + "/tools/example.ini";
  for (const auto& id : experiment_ids()) {
    const ExperimentConfig c = load_config(id, path);
    CHECK(config_hash(c) == config_hash(default_config(id)));
  }
}
