// Runs every experiment with its default configuration and prints one
// PASS/FAIL line per acceptance criterion. An optional argument names a
// directory that receives the usual reports.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "crlab/experiments.hpp"
#include "crlab/runner.hpp"

namespace {

struct Criterion {
  int id;
  const char* name;
  std::vector<std::string> experiments;
  double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "diagonal kernel asymptotics", {"kernel-diag"}, 10},
    {2, "diagonal derivative of the kernel", {"kernel-diag"}, 10},
    {3, "Fubini-Study pullback", {"embed-check"}, 30},
    {4, "Hessian identity", {"embed-check"}, 30},
    {5, "negative definiteness and separation", {"embed-check"}, 60},
    {6, "closed Lelong-Poincare oracle", {"lp-closed"}, 60},
    {7, "boundary Lelong-Poincare oracle", {"lp-boundary"}, 120},
    {8, "CR expectation formula", {"expectation-cr"}, 600},
    {9, "domain expectation formula", {"expectation-domain"}, 900},
    {10, "equidistribution limits and rates", {"equi-cr", "equi-domain", "equi-domain-random"}, 1200},
    {11, "variance decay", {"variance-cr"}, 600},
    {12, "tail proxy", {"equi-cr"}, 1200},
    {13, "exact values", {"exact-values"}, 60},
};

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "";
  const int jobs = std::max(1u, std::thread::hardware_concurrency());

  std::map<std::string, crlab::ExperimentReport> reports;
  for (const auto& id : crlab::experiment_ids()) {
    crlab::ExperimentConfig cfg = crlab::default_config(id);
    cfg.jobs = jobs;
    try {
      crlab::ExperimentReport r = crlab::run_experiment(cfg);
      if (!out.empty()) {
        const std::string dir = (std::filesystem::path(out) / id).string();
        crlab::write_manifest(crlab::make_manifest(cfg, "", dir), dir);
        crlab::emit_plotdata(r, dir);
        crlab::write_report(r, dir);
      }
      std::fprintf(stderr, "ran %s in %.1f s\n", id.c_str(), r.seconds);
      reports.emplace(id, std::move(r));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s: %s\n", id.c_str(), e.what());
      crlab::ExperimentReport r;
      r.id = id;
      r.verdicts.push_back({0, "error", false, e.what()});
      reports.emplace(id, std::move(r));
    }
  }

  int failed = 0;
  for (const auto& c : kCriteria) {
    bool pass = true;
    int checks = 0;
    double seconds = 0.0;
    std::vector<std::string> notes;
    for (const auto& id : c.experiments) {
      const auto& r = reports.at(id);
      seconds += r.seconds;
      for (const auto& v : r.verdicts) {
        if (v.criterion != c.id && v.criterion != 0) continue;
        ++checks;
        if (!v.pass) {
          pass = false;
          notes.push_back(id + "/" + v.name + ": " + v.detail);
        }
      }
    }
    if (checks == 0) {
      pass = false;
      notes.push_back("no checks ran");
    }
    if (seconds > c.budget_s) {
      pass = false;
      notes.push_back("runtime over budget");
    }
    failed += !pass;
    std::printf("%s criterion %2d: %s (%d checks, %.1f s of %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, checks,
                seconds, c.budget_s);
    for (const auto& n : notes) std::printf("     %s\n", n.c_str());
  }
  for (const auto& [id, r] : reports)
    for (const auto& w : r.warnings) std::printf("warning: %s: %s\n", id.c_str(), w.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failed, kCriteria.size());
  return failed == 0 ? 0 : 1;
}
