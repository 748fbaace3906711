#include "crlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include <Eigen/Eigenvalues>

#include "crlab/currents.hpp"
#include "crlab/embedding.hpp"
#include "crlab/ensemble.hpp"
#include "crlab/geometry.hpp"
#include "crlab/montecarlo.hpp"
#include "crlab/nodal.hpp"
#include "crlab/rng.hpp"
#include "crlab/spectral.hpp"

namespace crlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kStatistical{"expectation-cr", "equi-cr", "variance-cr", "expectation-domain",
                                            "equi-domain-random"};

bool is_statistical(const std::string& id) {
  return std::find(kStatistical.begin(), kStatistical.end(), id) != kStatistical.end();
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

std::shared_ptr<const SpectralBasis> basis_for(const std::vector<double>& ks, const CutoffSpec& c) {
  double kmax = 1.0;
  for (double k : ks) kmax = std::max(kmax, k);
  return std::make_shared<const SpectralBasis>(1, static_cast<int>(std::ceil(c.delta2 * kmax)) + 2);
}

Ensemble make_ensemble(const ExperimentConfig& cfg, double k, int kappa,
                       const std::shared_ptr<const SpectralBasis>& basis) {
  EnsembleConfig ec;
  ec.k = k;
  ec.cutoff = cfg.cutoff;
  ec.kappa = kappa;
  ec.seed = trial_key(cfg.seed, static_cast<std::uint64_t>(std::llround(k * 1000)));
  return Ensemble(ec, basis);
}

ExperimentReport start(const ExperimentConfig& cfg, const char* id) {
  ExperimentReport r;
  r.id = id;
  r.config = cfg;
  r.config.id = id;
  r.config.validate();
  return r;
}

struct Stopwatch {
  ExperimentReport& rep;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  explicit Stopwatch(ExperimentReport& r) : rep(r) {}
  ~Stopwatch() { rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

ReportRow row(double k, std::string q, double value, double reference, double std_err = 0.0) {
  ReportRow r;
  r.k = k;
  r.quantity = std::move(q);
  r.value = value;
  r.reference = reference;
  r.abs_err = std::abs(value - reference);
  r.rel_err = reference != 0.0 ? r.abs_err / std::abs(reference) : kNaN;
  r.std_err = std_err;
  r.observed_order = kNaN;
  return r;
}

void set_order(ExperimentReport& rep, const std::string& quantity, double order) {
  for (auto& r : rep.rows)
    if (r.quantity == quantity) r.observed_order = order;
}

void verdict(ExperimentReport& rep, int criterion, std::string name, bool pass, std::string detail) {
  rep.verdicts.push_back({criterion, std::move(name), pass, std::move(detail)});
}

struct Stats {
  cdouble mean;
  double var = 0.0;  // E|X - mean|^2, unbiased
  double se = 0.0;
  std::size_t n = 0;
};

Stats stats(const std::vector<cdouble>& v) {
  Stats s;
  s.n = v.size();
  if (s.n == 0) return s;
  CompensatedSum<cdouble> m;
  for (const auto& x : v) m += x;
  s.mean = m.value() / double(s.n);
  if (s.n < 2) return s;
  CompensatedSum<double> q;
  for (const auto& x : v) q += std::norm(x - s.mean);
  s.var = q.value() / double(s.n - 1);
  s.se = std::sqrt(s.var / double(s.n));
  return s;
}

// Trial t goes to slot t whatever the worker, so results do not depend on
// the number of jobs.
template <typename Work>
std::vector<std::optional<std::vector<cdouble>>> run_trials(int n, int jobs, Work work) {
  std::vector<std::optional<std::vector<cdouble>>> out(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex fail_mutex;
  auto worker = [&] {
    NodalFields a, b;
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n) return;
      try {
        out[static_cast<std::size_t>(t)] = work(a, b, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const int w = std::max(1, std::min(jobs, n));
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct TrialValues {
  std::vector<std::vector<cdouble>> values;  // [form][accepted trial]
  int rejected = 0;
  int trials = 0;
};

TrialValues collate(const std::vector<std::optional<std::vector<cdouble>>>& slots, std::size_t forms) {
  TrialValues tv;
  tv.values.resize(forms);
  tv.trials = static_cast<int>(slots.size());
  for (const auto& s : slots) {
    if (!s) {
      ++tv.rejected;
      continue;
    }
    for (std::size_t j = 0; j < forms; ++j) tv.values[j].push_back((*s)[j]);
  }
  return tv;
}

TrialValues cr_trials(const Ensemble& ens, const HopfFFT& fft, const NodalCR& cr, const ExperimentConfig& cfg) {
  auto slots = run_trials(cfg.trials, cfg.jobs,
                          [&](NodalFields& nf, NodalFields&, int t) -> std::optional<std::vector<cdouble>> {
                            const auto d = ens.sample(static_cast<std::uint64_t>(t));
                            fft.evaluate(d, 1.0, nf);
                            if (!regularity_filter(fft, d, nf, cfg.threshold).accept) return std::nullopt;
                            return cr.pair(nf);
                          });
  return collate(slots, cr.forms());
}

void check_rejects(ExperimentReport& rep, int criterion, const TrialValues& tv, double k) {
  const double frac = double(tv.rejected) / std::max(1, tv.trials);
  rep.rows.push_back(row(k, "reject_fraction", frac, 0.0));
  const bool ok = frac <= 0.05;
  if (!ok) rep.warnings.push_back("regularity filter rejected " + fmt(100 * frac, 3) + "% of draws at k = " + fmt(k));
  verdict(rep, criterion, "filter-rejects k=" + fmt(k), ok, fmt(tv.rejected) + " of " + fmt(tv.trials) + " rejected");
}

std::vector<AmbientPolyForm> forms_of(const ExperimentConfig& cfg) {
  std::vector<AmbientPolyForm> out;
  for (const auto& id : cfg.forms) out.push_back(named_form(id));
  return out;
}

std::vector<CVec> sample_points(bool ball) {
  std::vector<CVec> pts;
  const auto rule = sphere_quadrature(6, Measure::round);
  for (const auto& nd : rule.nodes) {
    pts.push_back(nd.z);
    if (ball)
      for (double r : {0.25, 0.5, 0.75}) pts.push_back(r * nd.z);
  }
  return pts;
}

// int_{S^3} d xi ^ psi for a 1-form psi.
cdouble dxi_pairing(const AmbientPolyForm& psi) {
  return form_pair(wedge(AmbientPolyForm::contact(1).d(), psi), sphere_quadrature(psi.coefficient_degree() + 8, Measure::round));
}

// Only dz covectors: then psi ^ del u = 0 for every u.
bool holomorphic(const AmbientPolyForm& psi) {
  for (const auto& [idx, poly] : psi.terms())
    for (int i : idx)
      if (i > psi.n()) return false;
  return !psi.terms().empty();
}

int reference_level(const ExperimentConfig& cfg, int max_degree) { return cfg.level > 0 ? cfg.level : max_degree + 8; }

// Upper confidence value of a frequency f observed in n trials.
double freq_upper(double f, int n) { return f + 3.0 * std::sqrt(f * (1.0 - f) / n) + 3.0 / n; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw ConfigError("unknown experiment: " + id);
  cutoff.validate();
  if (k_grid.empty() && id != "lp-closed" && id != "lp-boundary") throw ConfigError(id + ": empty k grid");
  for (double k : k_grid)
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError(id + ": k must be positive");
  for (const auto& f : forms) named_form(f);
  if (!function.empty())
    for (const auto& f : split(function, ',')) catalog_function(f);
  if (kappa != 0 && kappa != 1) throw ConfigError("kappa must be 0 or 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (points < 1) throw ConfigError("points must be at least 1");
  if (level < 0) throw ConfigError("level must be nonnegative");
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  if (!(delta_rel > 0.0)) throw ConfigError("delta_rel must be positive");
  if (!(c > 0.0)) throw ConfigError("c must be positive");
  if (is_statistical(id)) {
    if (trials < 2) throw ConfigError(id + ": the standard error needs at least 2 trials");
    if (trials < 100) throw ConfigError(id + ": statistical verdicts need at least 100 trials");
  }
  if (id == "equi-cr" && kappa != 0) throw ConfigError("equi-cr runs the kappa = 0 ensemble");
  if (id == "equi-cr")
    for (const auto& f : forms)
      if (named_form(f).degree() != 1) throw ConfigError("equi-cr needs 1-forms: " + f);
  if (id == "expectation-cr" || id == "variance-cr" || id == "expectation-domain" || id == "equi-domain-random" ||
      id == "equi-domain")
    for (const auto& f : forms)
      if (named_form(f).degree() != 2) throw ConfigError(id + " needs 2-forms: " + f);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"id", cfg.id},
          {"k_grid", cfg.k_grid},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"cutoff",
           {{"delta1", cfg.cutoff.delta1},
            {"delta2", cfg.cutoff.delta2},
            {"shape", shape_name(cfg.cutoff.shape)},
            {"sharpness", cfg.cutoff.sharpness}}},
          {"forms", cfg.forms},
          {"function", cfg.function},
          {"level", cfg.level},
          {"kappa", cfg.kappa},
          {"points", cfg.points},
          {"threshold", cfg.threshold},
          {"delta_rel", cfg.delta_rel},
          {"separation", cfg.separation},
          {"c", cfg.c}};
}

std::string config_hash(const ExperimentConfig& cfg) {
  // jobs does not change results and stays out of the hash.
  const std::string text = to_json(cfg).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr)) throw Error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::vector<std::string> experiment_ids() {
  return {"kernel-diag", "embed-check", "lp-closed",         "lp-boundary",        "expectation-cr", "equi-cr",
          "variance-cr", "equi-domain", "expectation-domain", "equi-domain-random", "exact-values"};
}

ExperimentConfig default_config(const std::string& id) {
  ExperimentConfig c;
  c.id = id;
  if (id == "kernel-diag") {
    c.k_grid = {32, 64, 128};
  } else if (id == "embed-check") {
    c.k_grid = {64, 128, 256};
  } else if (id == "lp-closed") {
    c.function = "z1";
    c.forms = {"dtheta2", "dtheta1", "poly1", "exact1", "contact"};
  } else if (id == "lp-boundary") {
    c.function = "z1-1/2,2+z1";
    c.forms = {"area2", "weighted11", "cross11", "area1"};
  } else if (id == "expectation-cr") {
    c.k_grid = {48};
    c.trials = 4000;
    c.forms = {"mixed2", "area2", "weighted11"};
  } else if (id == "equi-cr") {
    c.k_grid = {16, 24, 32, 48, 64, 96, 128};
    c.trials = 200;
    c.forms = {"dtheta2", "poly1", "horizontal1"};
  } else if (id == "variance-cr") {
    c.k_grid = {16, 24, 32, 48, 64};
    c.trials = 400;
    c.forms = {"mixed2", "area2"};
  } else if (id == "equi-domain") {
    c.k_grid = {16, 24, 32, 48, 64, 96, 128};
    c.forms = {"area2", "weighted11", "vanish11", "vanish33"};
  } else if (id == "expectation-domain") {
    c.k_grid = {32};
    c.trials = 2000;
    c.kappa = 1;
    c.forms = {"area2", "weighted11", "holo20"};
    c.function = "z1-1/2";
  } else if (id == "equi-domain-random") {
    c.k_grid = {16, 24, 32};
    c.trials = 300;
    c.kappa = 1;
    c.forms = {"area2", "weighted11"};
  } else if (id == "exact-values") {
    c.k_grid = {8};
    c.trials = 20000;
  } else {
    throw ConfigError("unknown experiment: " + id);
  }
  return c;
}

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"k", x.k},
                    {"quantity", x.quantity},
                    {"value", x.value},
                    {"reference", x.reference},
                    {"abs_err", x.abs_err},
                    {"rel_err", x.rel_err},
                    {"std_err", x.std_err},
                    {"observed_order", x.observed_order}});
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"criterion", v.criterion}, {"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  return {{"id", r.id},
          {"pass", r.passed()},
          {"verdicts", verdicts},
          {"rows", rows},
          {"warnings", r.warnings},
          {"extra", r.extra},
          {"provenance",
           {{"seed", r.config.seed}, {"config_hash", config_hash(r.config)}, {"git_describe", CRLAB_GIT_DESCRIBE}}},
          {"config", to_json(r.config)},
          {"seconds", r.seconds}};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return kNaN;
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ExperimentReport kernel_diag(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "kernel-diag");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const double mv = mean_value(eta_profile(cfg.cutoff), 1);
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> ks, diag_err, gaps;
  for (double k : cfg.k_grid) {
    const KernelField K(cfg.cutoff, k, basis);
    const double ratio = K.diag() / K.asymptotic_ref();
    double spread = 0.0, beta_im = 0.0, b = 0.0;
    for (int p = 0; p < cfg.points; ++p) {
      const SpherePoint x = random_sphere_point(1, rng);
      spread = std::max(spread, std::abs(K.kernel(x.z, x.z) - K.diag()) / K.diag());
      const cdouble bt = 2.0 * kPi * K.beta(x.z, reeb_field(x)) / k;
      if (p == 0) b = bt.real();
      beta_im = std::max(beta_im, std::abs(bt.imag()));
    }
    rep.rows.push_back(row(k, "diag_ratio", ratio, 1.0));
    rep.rows.push_back(row(k, "diag_spread", spread, 0.0));
    rep.rows.push_back(row(k, "beta_reeb", b, mv));
    rep.rows.push_back(row(k, "beta_reeb_imag", beta_im, 0.0));
    ks.push_back(k);
    diag_err.push_back(std::abs(ratio - 1.0));
    gaps.push_back(std::abs(b - mv));
  }
  const double order = -loglog_slope(ks, diag_err);
  set_order(rep, "diag_ratio", order);
  set_order(rep, "beta_reeb", -loglog_slope(ks, gaps));
  bool decreasing = true;
  for (std::size_t i = 1; i < diag_err.size(); ++i) decreasing = decreasing && diag_err[i] < diag_err[i - 1];
  verdict(rep, 1, "diag-order", decreasing && order >= 0.6 && order <= 1.4,
          "observed order " + fmt(order) + ", errors " + (decreasing ? "decreasing" : "not decreasing"));
  bool ratios_ok = ks.size() >= 2;
  std::string detail = "gap ratios per doubling:";
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double r = std::pow(gaps[i] / gaps[i - 1], std::log(2.0) / std::log(ks[i] / ks[i - 1]));
    detail += " " + fmt(r);
    ratios_ok = ratios_ok && r >= 0.35 && r <= 0.7;
  }
  verdict(rep, 2, "beta-ratio", ratios_ok, detail);
  return rep;
}

ExperimentReport embed_check(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "embed-check");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto eta = eta_profile(cfg.cutoff);
  const double mv = mean_value(eta, 1), var = variance(eta, 1);
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> ks, reeb_err;
  double horiz_rel = 0.0, worst_fd = 0.0, max_eig = -std::numeric_limits<double>::infinity(), max_h = 0.0;
  bool any_large = false;
  for (std::size_t ik = 0; ik < cfg.k_grid.size(); ++ik) {
    const double k = cfg.k_grid[ik];
    EmbeddingConfig ec;
    ec.k = k;
    ec.cutoff = cfg.cutoff;
    const Embedding e(ec, basis);
    const SpherePoint x = random_sphere_point(1, rng);
    const double q = e.fs_pullback(x.z, reeb_field(x), reeb_field(x)).real() / (k * k);
    CVec h = random_horizontal(x, rng);
    h /= h.norm();
    // dxi extended complex bilinearly to Z = (h - i J h)/2 and its conjugate.
    const cdouble dxi_zz = 0.5 * kI * dxi(h, kI * h);
    const double ref_h = (-kI * mv * dxi_zz).real();
    const double g = e.fs_pullback(x.z, h, h).real() / k;
    rep.rows.push_back(row(k, "fs_reeb", q, var));
    rep.rows.push_back(row(k, "fs_horizontal", g, ref_h));
    ks.push_back(k);
    reeb_err.push_back(std::abs(q - var));
    if (ik + 1 == cfg.k_grid.size()) horiz_rel = std::abs(g - ref_h) / std::abs(ref_h);

    if (ik == 0) {
      for (int p = 0; p < cfg.points; ++p) {
        const SpherePoint y = random_sphere_point(1, rng);
        const auto f = tangent_frame(y);
        const Eigen::MatrixXd H = e.hessian_matrix(y.z, f);
        const double scale = 2.0 * H.cwiseAbs().maxCoeff();
        const double s = 2e-4 / k;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            worst_fd = std::max(worst_fd, std::abs(hessian_fd(e, y.z, f[i], f[j], s) - 2.0 * H(i, j)) / scale);
      }
      rep.rows.push_back(row(k, "hessian_fd_rel", worst_fd, 0.0));
    }
    if (k >= 64) {
      any_large = true;
      double eig = -std::numeric_limits<double>::infinity();
      for (int p = 0; p < cfg.points; ++p) {
        const SpherePoint y = random_sphere_point(1, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian_matrix(y.z, tangent_frame(y)));
        eig = std::max(eig, es.eigenvalues().maxCoeff());
      }
      const auto sep = separation_scan(e, static_cast<std::size_t>(20 * cfg.points), cfg.separation,
                                       trial_key(cfg.seed, static_cast<std::uint64_t>(k)));
      rep.rows.push_back(row(k, "hessian_max_eig", eig, 0.0));
      rep.rows.push_back(row(k, "separation_max_h", sep.max_h, 0.5));
      max_eig = std::max(max_eig, eig);
      max_h = std::max(max_h, sep.max_h);
    }
  }
  const double order = -loglog_slope(ks, reeb_err);
  set_order(rep, "fs_reeb", order);
  bool decreasing = true;
  for (std::size_t i = 1; i < reeb_err.size(); ++i) decreasing = decreasing && reeb_err[i] < reeb_err[i - 1];
  verdict(rep, 3, "fs-reeb-order", decreasing && order >= 0.6 && order <= 1.4,
          "observed order " + fmt(order) + " of |k^-2 ds^2(T,T) - var|");
  verdict(rep, 3, "fs-horizontal", horiz_rel <= 0.05,
          "relative deviation " + fmt(horiz_rel) + " at k = " + fmt(cfg.k_grid.back()));
  verdict(rep, 4, "hessian-fd", worst_fd <= 1e-4,
          "worst relative error " + fmt(worst_fd) + " over " + fmt(cfg.points) + " points at k = " + fmt(cfg.k_grid.front()));
  verdict(rep, 5, "negative-definite", any_large && max_eig < 0.0, "largest eigenvalue " + fmt(max_eig) + " for k >= 64");
  verdict(rep, 5, "separation", any_large && max_h <= 0.5,
          "max h " + fmt(max_h) + " over pairs at distance >= " + fmt(cfg.separation));
  return rep;
}

namespace {

// |value - reference| + err <= 1% of |reference|, or for a vanishing
// reference |value| <= 3 err + 1e-8.
bool oracle_ok(cdouble value, double err, cdouble reference) {
  if (std::abs(reference) > 1e-8) return std::abs(value - reference) + err <= 0.01 * std::abs(reference);
  return std::abs(value) <= 3.0 * err + 1e-8;
}

void oracle_rows(ExperimentReport& rep, const std::string& fn, const std::string& form, const PairingResult& r,
                 cdouble reference) {
  auto x = row(0.0, fn + ":" + form, r.value.real(), reference.real(), r.err_est);
  x.abs_err = std::abs(r.value - reference);
  x.rel_err = std::abs(reference) > 0.0 ? x.abs_err / std::abs(reference) : kNaN;
  rep.rows.push_back(x);
  rep.extra["pairings"].push_back(to_json(r));
}

}  // namespace

ExperimentReport lp_closed(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "lp-closed");
  Stopwatch sw(rep);
  for (const auto& fn : split(cfg.function, ',')) {
    const auto f = catalog_function(fn);
    for (const auto& id : cfg.forms) {
      const auto psi = named_form(id);
      if (psi.degree() != 1) {
        rep.warnings.push_back("lp-closed skips the " + std::to_string(psi.degree()) + "-form " + id);
        continue;
      }
      const auto r = divisor_pairing_closed(*f, psi, id);
      const auto direct = zero_set_direct(*f, psi, id);
      oracle_rows(rep, fn, id, r, direct.value);
      if (fn == "z1" && id == "dtheta2") {
        const cdouble two_pi = 2.0 * kPi;
        verdict(rep, 6, "circle-oracle", oracle_ok(r.value, r.err_est, two_pi),
                "z1 / dtheta2: " + fmt(r.value.real(), 8) + " +- " + fmt(r.err_est) + " vs 2 pi");
      }
      verdict(rep, 6, "zero-set " + fn + ":" + id, oracle_ok(r.value, r.err_est + direct.err_est, direct.value),
              fmt(r.value.real(), 8) + " vs circle integral " + fmt(direct.value.real(), 8));
    }
  }
  return rep;
}

ExperimentReport lp_boundary(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "lp-boundary");
  Stopwatch sw(rep);
  for (const auto& fn : split(cfg.function, ',')) {
    const auto f = catalog_function(fn);
    bool misses = false;
    if (const auto* a = dynamic_cast<const AffineFunction*>(f.get())) misses = a->radius() < 0.0;
    for (const auto& id : cfg.forms) {
      const auto psi = named_form(id);
      const auto r = divisor_pairing_boundary(*f, psi, id);
      if (misses) {
        // Nowhere zero on the closed ball: the pairing must vanish up to its
        // own error budget.
        oracle_rows(rep, fn, id, r, 0.0);
        const double budget = r.err_est + r.quad_err + 1e-8;
        verdict(rep, 7, "nowhere-zero " + fn + ":" + id, std::abs(r.value) <= budget,
                "|pairing| " + fmt(std::abs(r.value)) + " vs budget " + fmt(budget));
        continue;
      }
      const auto direct = zero_set_direct(*f, psi, id);
      oracle_rows(rep, fn, id, r, direct.value);
      if (fn == "z1-1/2" && id == "area2") {
        const cdouble ref = 0.75 * kPi;
        verdict(rep, 7, "disc-oracle", oracle_ok(r.value, r.err_est, ref),
                "z1-1/2 / area2: " + fmt(r.value.real(), 8) + " +- " + fmt(r.err_est) + " vs 3 pi / 4");
      }
      verdict(rep, 7, "zero-set " + fn + ":" + id, oracle_ok(r.value, r.err_est + direct.err_est, direct.value),
              fmt(r.value.real(), 8) + " vs disc integral " + fmt(direct.value.real(), 8));
    }
  }
  return rep;
}

ExperimentReport expectation_cr(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "expectation-cr");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  const double mv = mean_value(eta_profile(cfg.cutoff), 1);
  std::vector<std::vector<double>> limit_gap(psis.size());
  for (double k : cfg.k_grid) {
    const Ensemble ens = make_ensemble(cfg, k, cfg.kappa, basis);
    HopfFFT fft(ens, nodal_grid(ens.max_degree()));
    NodalCR cr(fft, psis, cfg.delta_rel);
    const auto beta_nodal = cr.beta_pairing();
    const auto expect = cr.expectation();
    const TrialValues tv = cr_trials(ens, fft, cr, cfg);
    check_rejects(rep, 8, tv, k);
    // The ensemble scaled by 2 has E|f|^2 four times larger, and delta is
    // relative to it.
    std::vector<double> scale_dev(psis.size(), 0.0);
    {
      NodalCR scaled(fft, psis, 4.0 * cfg.delta_rel);
      NodalFields a, b;
      for (int t = 0; t < 5; ++t) {
        auto d = ens.sample(static_cast<std::uint64_t>(t));
        fft.evaluate(d, 1.0, a);
        d.a *= 2.0;
        fft.evaluate(d, 1.0, b);
        const auto pa = cr.pair(a), pb = scaled.pair(b);
        for (std::size_t j = 0; j < psis.size(); ++j) scale_dev[j] = std::max(scale_dev[j], std::abs(pa[j] - pb[j]));
      }
    }
    double two_paths = 0.0;
    for (std::size_t j = 0; j < psis.size(); ++j) {
      const std::string& id = cfg.forms[j];
      const cdouble ref = beta_pairing_quadrature(ens.kernel(), cfg.kappa, psis[j], reference_level(cfg, ens.max_degree()));
      two_paths = std::max(two_paths, std::abs(beta_nodal[j] - ref) / std::max(1.0, std::abs(ref)));
      const Stats s = stats(tv.values[j]);
      const double budget = std::abs(expect[j] - ref);
      auto x = row(k, id, s.mean.real(), ref.real(), s.se);
      x.abs_err = std::abs(s.mean - ref);
      rep.rows.push_back(x);
      rep.extra["imag"][id].push_back({{"k", k}, {"mean", s.mean.imag()}, {"reference", ref.imag()}});
      verdict(rep, 8, "mean " + id + " k=" + fmt(k), x.abs_err <= 3.0 * s.se + budget,
              "|mean - int beta^psi| = " + fmt(x.abs_err) + ", 3 SE = " + fmt(3.0 * s.se) + ", budget " + fmt(budget));
      rep.rows.push_back(row(k, id + ":rescaled_by_2", scale_dev[j], 0.0));
      verdict(rep, 8, "rescaled " + id + " k=" + fmt(k), scale_dev[j] <= 1e-12 * std::max(1.0, std::abs(s.mean)),
              "max change " + fmt(scale_dev[j]) + " over 5 draws scaled by 2");
      if (cfg.kappa == 0) {
        const cdouble lim = mv / (2.0 * kPi) * contact_pairing(psis[j]);
        auto y = row(k, id + ":beta_limit", (ref / k).real(), lim.real());
        y.abs_err = std::abs(ref / k - lim);
        rep.rows.push_back(y);
        limit_gap[j].push_back(y.abs_err);
      }
    }
    rep.rows.push_back(row(k, "beta_two_paths", two_paths, 0.0));
    verdict(rep, 8, "beta-two-paths k=" + fmt(k), two_paths <= 1e-10,
            "nodal grid vs KernelField::beta quadrature: " + fmt(two_paths));
  }
  if (cfg.kappa == 0 && cfg.k_grid.size() >= 2)
    for (std::size_t j = 0; j < psis.size(); ++j) {
      const double C = limit_gap[j].front() * cfg.k_grid.front();
      bool ok = true;
      for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) ok = ok && limit_gap[j][i] <= 2.0 * C / cfg.k_grid[i] + 1e-14;
      verdict(rep, 8, "beta-limit " + cfg.forms[j], ok, "gap <= C/k with C = " + fmt(C) + " fitted at the first k (2x band)");
    }
  return rep;
}

ExperimentReport equidistribution_cr(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "equi-cr");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  std::vector<AmbientPolyForm> dpsis;
  for (const auto& p : psis) dpsis.push_back(p.d());
  const double mv = mean_value(eta_profile(cfg.cutoff), 1);
  const auto pts = sample_points(false);
  const std::size_t J = psis.size();
  std::vector<cdouble> limit(J);
  std::vector<double> c1(J);
  for (std::size_t j = 0; j < J; ++j) {
    limit[j] = mv / (2.0 * kPi) * dxi_pairing(psis[j]);
    c1[j] = form_cr_norm(psis[j], 1, pts);
    rep.extra["limits"][cfg.forms[j]] = {limit[j].real(), limit[j].imag()};
  }
  std::vector<std::vector<double>> gap(J), freq(J);
  std::vector<double> ks;
  std::vector<int> accepted;
  for (double k : cfg.k_grid) {
    const Ensemble ens = make_ensemble(cfg, k, 0, basis);
    HopfFFT fft(ens, nodal_grid(ens.max_degree()));
    NodalCR cr(fft, dpsis, cfg.delta_rel);
    const auto beta = cr.beta_pairing();
    const auto expect = cr.expectation();
    const TrialValues tv = cr_trials(ens, fft, cr, cfg);
    check_rejects(rep, 10, tv, k);
    ks.push_back(k);
    for (std::size_t j = 0; j < J; ++j) {
      const std::string& id = cfg.forms[j];
      std::vector<cdouble> scaled;
      int hits = 0;
      for (const auto& v : tv.values[j]) {
        scaled.push_back(v / k);
        if (std::abs(v / k - limit[j]) >= c1[j] / std::sqrt(k)) ++hits;
      }
      const Stats s = stats(scaled);
      const double budget = std::abs(expect[j] / k - limit[j]);
      auto x = row(k, id + ":mean", s.mean.real(), limit[j].real(), s.se);
      x.abs_err = std::abs(s.mean - limit[j]);
      rep.rows.push_back(x);
      verdict(rep, 10, "cr-limit " + id + " k=" + fmt(k), x.abs_err <= 3.0 * s.se + budget,
              "|mean - limit| = " + fmt(x.abs_err) + ", 3 SE = " + fmt(3.0 * s.se) + ", exact gap " + fmt(budget));
      auto e = row(k, id + ":exact", (beta[j] / k).real(), limit[j].real());
      e.abs_err = std::abs(beta[j] / k - limit[j]);
      rep.rows.push_back(e);
      gap[j].push_back(e.abs_err);
      const double f = double(hits) / std::max<std::size_t>(1, s.n);
      freq[j].push_back(f);
      accepted.push_back(static_cast<int>(s.n));
      rep.rows.push_back(row(k, id + ":tail", f, 0.0, std::sqrt(f * (1.0 - f) / std::max<std::size_t>(1, s.n))));
    }
  }
  for (std::size_t j = 0; j < J; ++j) {
    const std::string& id = cfg.forms[j];
    const double scale = std::max(1.0, std::abs(limit[j]));
    if (std::abs(limit[j]) > 1e-12) {
      const double order = -loglog_slope(ks, gap[j]);
      set_order(rep, id + ":exact", order);
      verdict(rep, 10, "cr-rate " + id, order >= 0.6 && order <= 1.4,
              "observed order " + fmt(order) + " of |k^-1 int beta^d psi - limit|");
    } else {
      const double worst = *std::max_element(gap[j].begin(), gap[j].end());
      verdict(rep, 10, "cr-horizontal " + id, worst <= 1e-10 * scale,
              "limit 0 and |k^-1 int beta^d psi| <= " + fmt(worst));
    }
    // One constant fitted at the first k from the upper confidence value
    // of the observed frequency, then tested along the grid.
    const int n0 = accepted[j];
    const double C = std::sqrt(ks.front()) * freq_upper(freq[j].front(), n0);
    bool ok = true;
    std::string detail = "C = " + fmt(C) + "; freq vs C/sqrt k:";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double bound = C / std::sqrt(ks[i]);
      ok = ok && freq[j][i] <= bound;
      detail += " " + fmt(freq[j][i], 3) + "/" + fmt(bound, 3);
    }
    verdict(rep, 12, "tail " + id, ok, detail);
  }
  rep.extra["note"] = "the tail proxy is a spot check over the configured forms, not a uniform bound over the C^1 unit ball";
  return rep;
}

ExperimentReport variance_cr(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "variance-cr");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  const std::size_t J = psis.size();
  std::vector<std::vector<double>> var(J);
  for (double k : cfg.k_grid) {
    const Ensemble ens = make_ensemble(cfg, k, cfg.kappa, basis);
    HopfFFT fft(ens, nodal_grid(ens.max_degree()));
    NodalCR cr(fft, psis, cfg.delta_rel);
    const TrialValues tv = cr_trials(ens, fft, cr, cfg);
    check_rejects(rep, 11, tv, k);
    for (std::size_t j = 0; j < J; ++j) {
      const Stats s = stats(tv.values[j]);
      // SE of a sample variance for near-Gaussian data.
      const double se = s.var * std::sqrt(2.0 / double(s.n - 1));
      rep.rows.push_back(row(k, cfg.forms[j] + ":var", s.var, 0.0, se));
      rep.rows.push_back(row(k, cfg.forms[j] + ":var/k^1.5", s.var / std::pow(k, 1.5), 0.0, se / std::pow(k, 1.5)));
      rep.rows.push_back(row(k, cfg.forms[j] + ":var/k^2", s.var / (k * k), 0.0, se / (k * k)));
      var[j].push_back(s.var);
    }
  }
  const auto& ks = cfg.k_grid;
  for (std::size_t j = 0; j < J; ++j) {
    const std::string& id = cfg.forms[j];
    set_order(rep, id + ":var", loglog_slope(ks, var[j]));
    bool ok = true;
    for (std::size_t a = 0; a < ks.size(); ++a)
      for (std::size_t b = a + 1; b < ks.size(); ++b)
        ok = ok && var[j][b] / std::pow(ks[b], 1.5) <= 2.0 * var[j][a] / std::pow(ks[a], 1.5);
    verdict(rep, 11, "var/k^1.5 " + id, ok, "non-increasing along the grid within a factor 2");
    std::vector<double> v2;
    for (std::size_t i = 0; i < ks.size(); ++i) v2.push_back(var[j][i] / (ks[i] * ks[i]));
    const double slope = loglog_slope(ks, v2);
    set_order(rep, id + ":var/k^2", -slope);
    verdict(rep, 11, "var/k^2 " + id, slope < 0.0 && v2.back() < v2.front(),
            "log-log slope " + fmt(slope) + ", first " + fmt(v2.front()) + ", last " + fmt(v2.back()));
  }
  return rep;
}

ExperimentReport equidistribution_domain(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "equi-domain");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  const double mv = mean_value(eta_profile(cfg.cutoff), 1);
  const auto pts = sample_points(true);
  const std::size_t J = psis.size();
  std::vector<std::vector<double>> C(J), val(J);
  for (std::size_t j = 0; j < J; ++j) {
    const cdouble lim = mv * contact_pairing(psis[j], psis[j].coefficient_degree() + 8);
    const double norm2 = form_cr_norm(psis[j], 2, pts);
    for (double k : cfg.k_grid) {
      const KernelField K(cfg.cutoff, k, basis);
      const auto ref = ddbar_log_pairing(K, cfg.c, psis[j], cfg.level);
      const cdouble v = ref.value / k;
      auto x = row(k, cfg.forms[j], v.real(), lim.real(), ref.error / k);
      x.abs_err = std::abs(v - lim);
      rep.rows.push_back(x);
      const double ck = x.abs_err * k / ((std::log(k) + 1.0) * norm2);
      rep.rows.push_back(row(k, cfg.forms[j] + ":C_k", ck, 0.0));
      C[j].push_back(ck);
      val[j].push_back(std::abs(v));
    }
    if (std::abs(lim) <= 1e-12) {
      bool dec = true;
      for (std::size_t i = 1; i < val[j].size(); ++i) dec = dec && val[j][i] < val[j][i - 1];
      rep.rows.push_back(row(cfg.k_grid.back(), cfg.forms[j] + ":decreasing", dec ? 1.0 : 0.0, 1.0));
    }
  }
  // One constant for all forms after dividing by ||psi||_{C^2}, fitted at the
  // first k with a factor 2 band.
  double Cfit = 0.0;
  for (std::size_t j = 0; j < J; ++j) Cfit = std::max(Cfit, C[j].front());
  bool ok = true;
  std::string detail = "C fitted at k = " + fmt(cfg.k_grid.front()) + ": " + fmt(Cfit) + "; max C_k per form:";
  for (std::size_t j = 0; j < J; ++j) {
    const double m = *std::max_element(C[j].begin(), C[j].end());
    ok = ok && m <= 2.0 * Cfit;
    detail += " " + cfg.forms[j] + "=" + fmt(m);
  }
  verdict(rep, 10, "domain-rate", ok, detail);
  for (std::size_t j = 0; j < J; ++j)
    if (cfg.forms[j] == "vanish33") {
      bool dec = true;
      for (std::size_t i = 1; i < val[j].size(); ++i) dec = dec && val[j][i] < val[j][i - 1];
      verdict(rep, 10, "interior-form-decay", dec, "k^-1 pairing of a form vanishing to third order at bD decreases along the grid");
    }
  const double mv_ind = mean_value(indicator_profile(0.0, 1.0), 1);
  rep.rows.push_back(row(0.0, "mv_indicator", mv_ind, 2.0 / 3.0));
  return rep;
}

ExperimentReport expectation_domain(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "expectation-domain");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  for (double k : cfg.k_grid) {
    const Ensemble ens = make_ensemble(cfg, k, 1, basis);
    HopfFFT fft(ens, nodal_grid(ens.max_degree()));
    NodalBoundary nb(fft, ens.max_degree() / 2 + 16, psis, cfg.delta_rel);
    const auto expect = nb.expectation();
    auto slots = run_trials(cfg.trials, cfg.jobs,
                            [&](NodalFields& s, NodalFields& scratch, int t) -> std::optional<std::vector<cdouble>> {
                              const auto d = ens.sample(static_cast<std::uint64_t>(t));
                              fft.evaluate(d, 1.0, s);
                              if (!regularity_filter(fft, d, s, cfg.threshold).accept) return std::nullopt;
                              return nb.pair(d, s, scratch);
                            });
    const TrialValues tv = collate(slots, psis.size());
    check_rejects(rep, 9, tv, k);
    for (std::size_t j = 0; j < psis.size(); ++j) {
      const std::string& id = cfg.forms[j];
      const auto ref = ddbar_log_pairing(ens.kernel(), 1.0, psis[j], cfg.level);
      const cdouble want = ref.value / (2.0 * kPi);
      const Stats s = stats(tv.values[j]);
      const double budget = std::abs(expect[j] - want) + ref.error / (2.0 * kPi);
      auto x = row(k, id, s.mean.real(), want.real(), s.se);
      x.abs_err = std::abs(s.mean - want);
      rep.rows.push_back(x);
      verdict(rep, 9, "mean " + id + " k=" + fmt(k), x.abs_err <= 3.0 * s.se + budget,
              "|mean - (i/2pi) int ddbar log(1+B)^psi| = " + fmt(x.abs_err) + ", 3 SE = " + fmt(3.0 * s.se) +
                  ", budget " + fmt(budget));
      if (holomorphic(psis[j])) {
        const double worst = std::max(std::abs(s.mean), std::abs(want));
        verdict(rep, 9, "nontangential " + id, worst <= 1e-12, "psi ^ del u = 0 for every u: both sides " + fmt(worst));
      }
    }
  }
  if (!cfg.function.empty()) {
    const auto f = catalog_function(split(cfg.function, ',').front());
    const auto r = divisor_pairing_boundary(*f, named_form("area2"), "area2");
    const auto direct = zero_set_direct(*f, named_form("area2"), "area2");
    oracle_rows(rep, f->name(), "area2", r, direct.value);
    bool ok = oracle_ok(r.value, r.err_est + direct.err_est, direct.value);
    std::string detail = f->name() + " / area2: " + fmt(r.value.real(), 8) + " vs disc " + fmt(direct.value.real(), 8);
    const auto* a = dynamic_cast<const AffineFunction*>(f.get());
    if (a && std::abs(a->a()(1)) == 0.0) {
      // area1 ^ del u = 0 when u depends on z1 only.
      const auto r0 = divisor_pairing_boundary(*f, named_form("area1"), "area1");
      oracle_rows(rep, f->name(), "area1", r0, 0.0);
      ok = ok && oracle_ok(r0.value, r0.err_est, 0.0);
      detail += "; area1: " + fmt(std::abs(r0.value));
    }
    verdict(rep, 9, "catalog-crosscheck", ok, detail);
  }
  return rep;
}

ExperimentReport equidistribution_domain_random(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "equi-domain-random");
  Stopwatch sw(rep);
  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  const auto psis = forms_of(cfg);
  const double mv = mean_value(eta_profile(cfg.cutoff), 1);
  const auto pts = sample_points(true);
  const std::size_t J = psis.size();
  std::vector<cdouble> limit(J);
  std::vector<double> c1(J);
  for (std::size_t j = 0; j < J; ++j) {
    limit[j] = mv / (2.0 * kPi) * contact_pairing(psis[j], psis[j].coefficient_degree() + 8);
    c1[j] = form_cr_norm(psis[j], 1, pts);
  }
  std::vector<std::vector<double>> freq(J);
  std::vector<int> n0(J, 0);
  for (double k : cfg.k_grid) {
    const Ensemble ens = make_ensemble(cfg, k, 1, basis);
    HopfFFT fft(ens, nodal_grid(ens.max_degree()));
    NodalBoundary nb(fft, ens.max_degree() / 2 + 16, psis, cfg.delta_rel);
    const auto expect = nb.expectation();
    auto slots = run_trials(cfg.trials, cfg.jobs,
                            [&](NodalFields& s, NodalFields& scratch, int t) -> std::optional<std::vector<cdouble>> {
                              const auto d = ens.sample(static_cast<std::uint64_t>(t));
                              fft.evaluate(d, 1.0, s);
                              if (!regularity_filter(fft, d, s, cfg.threshold).accept) return std::nullopt;
                              return nb.pair(d, s, scratch);
                            });
    const TrialValues tv = collate(slots, J);
    check_rejects(rep, 10, tv, k);
    for (std::size_t j = 0; j < J; ++j) {
      const std::string& id = cfg.forms[j];
      const auto ref = ddbar_log_pairing(ens.kernel(), 1.0, psis[j], cfg.level);
      const cdouble want = ref.value / (2.0 * kPi * k);
      std::vector<cdouble> scaled;
      int hits = 0;
      for (const auto& v : tv.values[j]) {
        scaled.push_back(v / k);
        // Deviations from the exact mean: at desk scale the deterministic
        // gap to the limit decays like log k / k with a large constant.
        if (std::abs(v / k - want) >= c1[j] / std::sqrt(k)) ++hits;
      }
      const Stats s = stats(scaled);
      const double budget = std::abs(expect[j] / k - want) + ref.error / (2.0 * kPi * k);
      auto x = row(k, id + ":mean", s.mean.real(), want.real(), s.se);
      x.abs_err = std::abs(s.mean - want);
      rep.rows.push_back(x);
      auto l = row(k, id + ":exact", want.real(), limit[j].real());
      l.abs_err = std::abs(want - limit[j]);
      rep.rows.push_back(l);
      verdict(rep, 10, "domain-random-mean " + id + " k=" + fmt(k), x.abs_err <= 3.0 * s.se + budget,
              "|k^-1 mean - k^-1 E| = " + fmt(x.abs_err) + ", 3 SE = " + fmt(3.0 * s.se) + ", budget " + fmt(budget));
      const double f = double(hits) / std::max<std::size_t>(1, s.n);
      rep.rows.push_back(row(k, id + ":tail", f, 0.0, std::sqrt(f * (1.0 - f) / std::max<std::size_t>(1, s.n))));
      freq[j].push_back(f);
      if (freq[j].size() == 1) n0[j] = static_cast<int>(s.n);
    }
  }
  // Reported, not asserted: at desk scale a large share of kappa = 1 draws
  // still has little or no zero set inside the ball.
  for (std::size_t j = 0; j < J; ++j) {
    const double C = std::sqrt(cfg.k_grid.front()) * freq_upper(freq[j].front(), n0[j]);
    bool within = true;
    for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) within = within && freq[j][i] <= C / std::sqrt(cfg.k_grid[i]);
    rep.extra["tail"][cfg.forms[j]] = {{"C", C}, {"frequencies", freq[j]}, {"within_C_over_sqrt_k", within}};
    if (!within)
      rep.warnings.push_back("tail frequency of " + cfg.forms[j] + " does not follow C/sqrt k on this grid");
  }
  return rep;
}

ExperimentReport exact_values(const ExperimentConfig& cfg) {
  ExperimentReport rep = start(cfg, "exact-values");
  Stopwatch sw(rep);
  const double mv = mean_value(indicator_profile(0.0, 1.0), 1);
  rep.rows.push_back(row(0.0, "mv_indicator", mv, 2.0 / 3.0));
  verdict(rep, 13, "mv-indicator", std::abs(mv - 2.0 / 3.0) <= 1e-12, "mv(1_[0,1]^2) = " + fmt(mv, 16));

  double worst_q = 0.0, worst_b = 0.0;
  for (const auto& a : graded_indices(1, 20)) {
    // Beta oracle: int_{S^3} |z^a|^2 = 2 pi^2 a0! a1! / (|a| + 1)!.
    const double beta = 2.0 * kPi * kPi *
                        std::exp(std::lgamma(a[0] + 1.0) + std::lgamma(a[1] + 1.0) - std::lgamma(a[0] + a[1] + 2.0));
    const double closed = monomial_norm2_closed(a);
    worst_b = std::max(worst_b, std::abs(closed - beta) / beta);
    worst_q = std::max(worst_q, std::abs(monomial_norm2_quadrature(a, 24) - beta) / beta);
  }
  rep.rows.push_back(row(20.0, "monomial_norm_closed_rel", worst_b, 0.0));
  rep.rows.push_back(row(20.0, "monomial_norm_quadrature_rel", worst_q, 0.0));
  verdict(rep, 13, "monomial-norms", worst_b <= 1e-12 && worst_q <= 1e-12,
          "closed form " + fmt(worst_b) + ", quadrature " + fmt(worst_q) + " for |alpha| <= 20");

  const auto basis = basis_for(cfg.k_grid, cfg.cutoff);
  std::mt19937_64 rng(cfg.seed);
  bool ok = true;
  std::string detail;
  for (double k : cfg.k_grid)
    for (int kappa : {0, 1}) {
      const Ensemble ens = make_ensemble(cfg, k, kappa, basis);
      const SpherePoint x = random_sphere_point(1, rng);
      // y near x so the correlation is not negligible.
      CVec yz = x.z + 0.3 / std::sqrt(k) * random_tangent(x, rng);
      yz /= yz.norm();
      std::vector<cdouble> prods;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto d = ens.sample(static_cast<std::uint64_t>(t));
        prods.push_back(ens.eval_f(d, x.z) * std::conj(ens.eval_f(d, yz)));
      }
      const Stats s = stats(prods);
      const cdouble want = double(kappa * kappa) + ens.kernel().kernel(x.z, yz);
      auto r = row(k, "covariance kappa=" + std::to_string(kappa), s.mean.real(), want.real(), s.se);
      r.abs_err = std::abs(s.mean - want);
      rep.rows.push_back(r);
      ok = ok && r.abs_err <= 4.0 * s.se;
      detail += " kappa=" + std::to_string(kappa) + ": " + fmt(r.abs_err / s.se, 3) + " SE;";
    }
  verdict(rep, 13, "covariance", ok, detail);
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  static const std::map<std::string, ExperimentReport (*)(const ExperimentConfig&)> table{
      {"kernel-diag", kernel_diag},
      {"embed-check", embed_check},
      {"lp-closed", lp_closed},
      {"lp-boundary", lp_boundary},
      {"expectation-cr", expectation_cr},
      {"equi-cr", equidistribution_cr},
      {"variance-cr", variance_cr},
      {"equi-domain", equidistribution_domain},
      {"expectation-domain", expectation_domain},
      {"equi-domain-random", equidistribution_domain_random},
      {"exact-values", exact_values}};
  const auto it = table.find(cfg.id);
  if (it == table.end()) throw ConfigError("unknown experiment: " + cfg.id);
  return it->second(cfg);
}

}  // namespace crlab
