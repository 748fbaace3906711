#include "crlab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "crlab/common.hpp"

namespace crlab {

namespace fs = std::filesystem;

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  try {
    return boost::lexical_cast<T>(boost::trim_copy(text));
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("bad value for " + key + ": '" + text + "'");
  }
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> parts, out;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

void apply_cutoff(CutoffSpec& c, const boost::property_tree::ptree& sec) {
  for (const auto& [key, node] : sec) {
    const std::string v = node.data();
    if (key == "delta1")
      c.delta1 = parse_value<double>(key, v);
    else if (key == "delta2")
      c.delta2 = parse_value<double>(key, v);
    else if (key == "shape")
      c.shape = parse_shape(boost::trim_copy(v));
    else if (key == "sharpness")
      c.sharpness = parse_value<double>(key, v);
    else
      throw ConfigError("unknown key in [cutoff]: " + key);
  }
}

void apply_section(ExperimentConfig& c, const std::string& name, const boost::property_tree::ptree& sec) {
  for (const auto& [key, node] : sec) {
    const std::string v = node.data();
    if (key == "k_grid")
      c.k_grid = parse_k_grid(v);
    else if (key == "trials")
      c.trials = parse_value<int>(key, v);
    else if (key == "seed")
      c.seed = parse_value<std::uint64_t>(key, v);
    else if (key == "forms")
      c.forms = parse_list(v);
    else if (key == "function")
      c.function = boost::trim_copy(v);
    else if (key == "level")
      c.level = parse_value<int>(key, v);
    else if (key == "kappa")
      c.kappa = parse_value<int>(key, v);
    else if (key == "points")
      c.points = parse_value<int>(key, v);
    else if (key == "jobs")
      c.jobs = parse_value<int>(key, v);
    else if (key == "threshold")
      c.threshold = parse_value<double>(key, v);
    else if (key == "delta_rel")
      c.delta_rel = parse_value<double>(key, v);
    else if (key == "separation")
      c.separation = parse_value<double>(key, v);
    else if (key == "c")
      c.c = parse_value<double>(key, v);
    else
      throw ConfigError("unknown key in [" + name + "]: " + key);
  }
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_');
  return out;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  os << text;
}

}  // namespace

std::vector<double> parse_k_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : parse_list(text)) {
    const double k = parse_value<double>("k_grid", p);
    if (!(k > 0.0)) throw ConfigError("k values must be positive: " + p);
    out.push_back(k);
  }
  if (out.empty()) throw ConfigError("empty k grid");
  return out;
}

ExperimentConfig load_config(const std::string& id, const std::string& path, const RunOverrides& o) {
  ExperimentConfig c = default_config(id);
  if (!path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
    const auto ids = experiment_ids();
    for (const auto& [name, sec] : tree) {
      if (name == "run" || name == "cutoff") continue;
      if (std::find(ids.begin(), ids.end(), name) == ids.end()) throw ConfigError("unknown config section: " + name);
      if (!sec.data().empty()) throw ConfigError("key outside a section: " + name);
    }
    if (const auto run = tree.get_child_optional("run")) apply_section(c, "run", *run);
    if (const auto cut = tree.get_child_optional("cutoff")) apply_cutoff(c.cutoff, *cut);
    if (const auto sec = tree.get_child_optional(boost::property_tree::ptree::path_type(id, '\0')))
      apply_section(c, id, *sec);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.k_grid && !c.k_grid.empty()) c.k_grid = *o.k_grid;
  if (o.trials && c.trials > 0) c.trials = *o.trials;
  if (o.level) c.level = *o.level;
  if (o.jobs) c.jobs = *o.jobs;
  c.validate();
  return c;
}

std::vector<std::string> subcommands() {
  return {"kernel-diag", "embed-check", "lp-closed",   "lp-boundary",        "expectation-cr",
          "equi-cr",     "variance-cr", "equi-domain", "expectation-domain", "exact-values", "all"};
}

std::vector<std::string> subcommand_experiments(const std::string& sub) {
  if (sub == "all") return experiment_ids();
  if (sub == "expectation-domain") return {"expectation-domain", "equi-domain-random"};
  const auto ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), sub) == ids.end()) throw ConfigError("unknown subcommand: " + sub);
  return {sub};
}

RunManifest make_manifest(const ExperimentConfig& cfg, const std::string& config_path, const std::string& output_dir) {
  RunManifest m;
  m.config_path = config_path;
  m.config_hash = config_hash(cfg);
  m.seed = cfg.seed;
  m.output_dir = output_dir;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m.timestamp = buf;
  m.version = CRLAB_GIT_DESCRIBE;
  m.config = to_json(cfg);
  return m;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"config_path", m.config_path}, {"config_hash", m.config_hash}, {"seed", m.seed},
          {"output_dir", m.output_dir},   {"timestamp", m.timestamp},     {"version", m.version},
          {"config", m.config}};
}

void write_manifest(const RunManifest& m, const std::string& dir) {
  fs::create_directories(dir);
  write_text(fs::path(dir) / "manifest.json", to_json(m).dump(2) + "\n");
}

void write_report(const ExperimentReport& r, const std::string& dir) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << kReportCsvHeader << "\n";
  for (const auto& x : r.rows)
    csv << csv_number(x.k) << "," << x.quantity << "," << csv_number(x.value) << "," << csv_number(x.reference) << ","
        << csv_number(x.abs_err) << "," << csv_number(x.rel_err) << "," << csv_number(x.std_err) << ","
        << csv_number(x.observed_order) << "\n";
  write_text(fs::path(dir) / (r.id + ".csv"), csv.str());
  write_text(fs::path(dir) / (r.id + ".json"), to_json(r).dump(2) + "\n");
}

std::vector<std::string> emit_plotdata(ExperimentReport& r, const std::string& dir) {
  std::map<std::string, std::vector<const ReportRow*>> groups;
  for (const auto& x : r.rows) {
    const auto colon = x.quantity.find(':');
    if (colon == std::string::npos)
      groups[x.quantity].push_back(&x);
    else if (x.quantity.substr(colon + 1) == "mean")
      groups[x.quantity.substr(0, colon)].push_back(&x);
  }
  std::vector<std::string> files;
  if (r.rows.empty()) {
    r.warnings.push_back("empty report " + r.id + ": no plot data written");
    return files;
  }
  fs::create_directories(dir);
  for (const auto& [q, rows] : groups) {
    std::ostringstream csv;
    csv << kPlotCsvHeader << "\n";
    for (const auto* x : rows)
      csv << csv_number(x->k) << "," << csv_number(x->value) << "," << csv_number(x->reference) << ","
          << csv_number(x->abs_err) << "\n";
    const fs::path p = fs::path(dir) / ("plot_" + sanitize(q) + ".csv");
    write_text(p, csv.str());
    files.push_back(p.string());
  }
  return files;
}

}  // namespace crlab
