#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "crlab/cutoff.hpp"

namespace crlab {

struct ExperimentConfig {
  std::string id;
  std::vector<double> k_grid;
  int trials = 0;
  std::uint64_t seed = 20240601;
  CutoffSpec cutoff;
  std::vector<std::string> forms;
  // Catalog function for the oracle experiments; a second one (comma
  // separated) is the nowhere-zero check of lp-boundary.
  std::string function;
  int level = 0;  // quadrature level of the references; 0 picks one from k
  int kappa = 0;
  int points = 100;  // random points for the deterministic checks
  int jobs = 1;
  double threshold = 1e-6;  // regularity filter margin
  double delta_rel = 1e-6;  // nodal regularization, relative to E|f|^2
  double separation = 0.5;
  double c = 1.0;  // constant in log(c + B_k)

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// SHA-256 of the canonical JSON of every field.
std::string config_hash(const ExperimentConfig& cfg);

std::vector<std::string> experiment_ids();
ExperimentConfig default_config(const std::string& id);

struct ReportRow {
  double k = 0.0;
  std::string quantity;
  double value = 0.0;
  double reference = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double std_err = 0.0;
  double observed_order = 0.0;  // NaN where no fit applies
};

struct Verdict {
  int criterion = 0;  // acceptance criterion the verdict belongs to
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();
  double seconds = 0.0;

  bool passed() const;
};

nlohmann::json to_json(const ExperimentReport& r);

ExperimentReport kernel_diag(const ExperimentConfig& cfg);
ExperimentReport embed_check(const ExperimentConfig& cfg);
ExperimentReport lp_closed(const ExperimentConfig& cfg);
ExperimentReport lp_boundary(const ExperimentConfig& cfg);
ExperimentReport expectation_cr(const ExperimentConfig& cfg);
ExperimentReport equidistribution_cr(const ExperimentConfig& cfg);
ExperimentReport variance_cr(const ExperimentConfig& cfg);
ExperimentReport equidistribution_domain(const ExperimentConfig& cfg);
ExperimentReport expectation_domain(const ExperimentConfig& cfg);
ExperimentReport equidistribution_domain_random(const ExperimentConfig& cfg);
ExperimentReport exact_values(const ExperimentConfig& cfg);

// Dispatch on cfg.id.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace crlab
