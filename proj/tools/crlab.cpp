#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crlab/common.hpp"
#include "crlab/runner.hpp"

namespace {

void print_report(const crlab::ExperimentReport& r) {
  std::cout << "== " << r.id << " (" << r.seconds << " s)\n";
  for (const auto& v : r.verdicts)
    std::cout << (v.pass ? "  PASS " : "  FAIL ") << "[" << v.criterion << "] " << v.name << ": " << v.detail << "\n";
  for (const auto& w : r.warnings) std::cout << "  warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random CR functions and zero divisors on S^3: experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, k_grid;
  std::uint64_t seed = 0;
  int trials = 0, level = 0, jobs = 0;
  bool strict = false;
  if (const char* env = std::getenv("CRLAB_OUT")) out_dir = env;
  if (out_dir.empty()) out_dir = "crlab-out";

  app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* grid_opt = app.add_option("--k-grid", k_grid, "comma separated k values");
  auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo draws per k")->check(CLI::PositiveNumber);
  auto* level_opt = app.add_option("--level", level, "reference quadrature level")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory (default $CRLAB_OUT or crlab-out)");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", strict, "treat warnings as failures");

  std::vector<CLI::App*> subs;
  for (const auto& s : crlab::subcommands()) subs.push_back(app.add_subcommand(s, "run " + s));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string sub;
  for (auto* s : subs)
    if (s->parsed()) sub = s->get_name();

  // Resolve every config before touching the output directory.
  std::vector<crlab::ExperimentConfig> configs;
  try {
    crlab::RunOverrides o;
    if (*seed_opt) o.seed = seed;
    if (*grid_opt) o.k_grid = crlab::parse_k_grid(k_grid);
    if (*trials_opt) o.trials = trials;
    if (*level_opt) o.level = level;
    if (*jobs_opt) o.jobs = jobs;
    for (const auto& id : crlab::subcommand_experiments(sub)) configs.push_back(crlab::load_config(id, config_path, o));
  } catch (const crlab::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  bool ok = true;
  for (const auto& cfg : configs) {
    const std::string dir = (std::filesystem::path(out_dir) / cfg.id).string();
    try {
      crlab::write_manifest(crlab::make_manifest(cfg, config_path, dir), dir);
      crlab::ExperimentReport r = crlab::run_experiment(cfg);
      crlab::emit_plotdata(r, dir);
      crlab::write_report(r, dir);
      print_report(r);
      ok = ok && r.passed() && !(strict && !r.warnings.empty());
    } catch (const crlab::ConfigError& e) {
      std::cerr << cfg.id << ": config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << cfg.id << ": " << e.what() << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
