#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crlab/experiments.hpp"

namespace crlab {

// Command-line values that win over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> k_grid;
  std::optional<int> trials;
  std::optional<int> level;
  std::optional<int> jobs;
};

std::vector<double> parse_k_grid(const std::string& text);

// Defaults of the experiment, then the [run] and [cutoff] sections, then the
// section named after the experiment, then the overrides. An empty path
// skips the file. Unknown sections or keys are errors.
ExperimentConfig load_config(const std::string& id, const std::string& path, const RunOverrides& overrides = {});

// Experiments behind a CLI subcommand; "all" runs every experiment.
std::vector<std::string> subcommand_experiments(const std::string& subcommand);
std::vector<std::string> subcommands();

struct RunManifest {
  std::string config_path;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string timestamp;
  std::string version;
  nlohmann::json config;
};

RunManifest make_manifest(const ExperimentConfig& cfg, const std::string& config_path, const std::string& output_dir);
nlohmann::json to_json(const RunManifest& m);

// Files below dir: manifest.json before the run, then <id>.csv and <id>.json.
void write_manifest(const RunManifest& m, const std::string& dir);
void write_report(const ExperimentReport& r, const std::string& dir);

inline constexpr const char* kReportCsvHeader = "k,quantity,value,reference,abs_err,rel_err,std_err,observed_order";
inline constexpr const char* kPlotCsvHeader = "k,value,reference,error";

// One CSV per plotted quantity (rows without a ':' suffix or with ":mean"),
// named plot_<quantity>.csv. Returns the paths written; a report without
// rows writes nothing and adds a warning.
std::vector<std::string> emit_plotdata(ExperimentReport& r, const std::string& dir);

}  // namespace crlab
