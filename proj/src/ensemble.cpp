#include "crlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "crlab/geometry.hpp"
#include "crlab/rng.hpp"

namespace crlab {

Ensemble::Ensemble(const EnsembleConfig& cfg, std::shared_ptr<const SpectralBasis> basis)
    : cfg_(cfg), basis_(basis), eta_(cfg.cutoff, cfg.k, basis, KernelWeight::eta) {
  if (cfg.kappa != 0 && cfg.kappa != 1) throw Error("kappa must be 0 or 1");
  for (int m = eta_.band_lo(); m <= eta_.band_hi(); ++m) {
    const double chi = cfg.cutoff.chi(m / cfg.k);
    for (const auto& a : degree_indices(basis->n(), m)) {
      alphas_.push_back(a);
      scale_.push_back(chi / std::sqrt(basis->norm2(a)));
    }
  }
}

GaussianDraw Ensemble::sample(std::uint64_t index) const {
  TrialEngine eng = trial_engine(cfg_.seed, index);
  GaussianDraw d;
  d.seed = cfg_.seed;
  d.index = index;
  d.a.resize(static_cast<Eigen::Index>(size()));
  for (Eigen::Index j = 0; j < d.a.size(); ++j) d.a(j) = complex_normal(eng);
  return d;
}

GaussianDraw Ensemble::manual(const CVec& a) const {
  if (a.size() != static_cast<Eigen::Index>(size())) throw Error("manual draw has wrong length");
  GaussianDraw d;
  d.a = a;
  return d;
}

void Ensemble::powers(const CVec& z, std::vector<std::vector<cdouble>>& pw) const {
  const int top = eta_.band_hi();
  pw.assign(z.size(), std::vector<cdouble>(top + 1));
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    pw[j][0] = 1.0;
    for (int e = 1; e <= top; ++e) pw[j][e] = pw[j][e - 1] * z(j);
  }
}

cdouble Ensemble::eval_f(const GaussianDraw& d, const CVec& z) const {
  std::vector<std::vector<cdouble>> pw;
  powers(z, pw);
  const std::size_t off = cfg_.kappa ? 1 : 0;
  cdouble acc = cfg_.kappa ? d.a(0) : cdouble(0.0);
  for (std::size_t t = 0; t < alphas_.size(); ++t) {
    cdouble v = d.a(static_cast<Eigen::Index>(t + off)) * scale_[t];
    for (std::size_t j = 0; j < alphas_[t].size(); ++j) v *= pw[j][alphas_[t][j]];
    acc += v;
  }
  return acc;
}

CVec Ensemble::gradient(const GaussianDraw& d, const CVec& z) const {
  std::vector<std::vector<cdouble>> pw;
  powers(z, pw);
  const std::size_t off = cfg_.kappa ? 1 : 0;
  CVec g = CVec::Zero(z.size());
  for (std::size_t t = 0; t < alphas_.size(); ++t) {
    const cdouble c = d.a(static_cast<Eigen::Index>(t + off)) * scale_[t];
    const auto& a = alphas_[t];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      cdouble v = c * static_cast<double>(a[i]);
      for (std::size_t j = 0; j < a.size(); ++j) v *= pw[j][j == i ? a[j] - 1 : a[j]];
      g(static_cast<Eigen::Index>(i)) += v;
    }
  }
  return g;
}

cdouble Ensemble::eval_df(const GaussianDraw& d, const CVec& z, const CVec& v) const {
  return (gradient(d, z).array() * v.array()).sum();
}

void Ensemble::dump_csv(const std::vector<GaussianDraw>& draws, const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write draw dump " + path);
  out.precision(17);
  out << "seed,index,j,re,im\n";
  for (const auto& d : draws)
    for (Eigen::Index j = 0; j < d.a.size(); ++j)
      out << d.seed << "," << d.index << "," << j << "," << d.a(j).real() << "," << d.a(j).imag() << "\n";
}

double tangential_sigma_min(const cdouble df[3]) {
  // J J^T for J = [Re; Im] (2x3)
  double a = 0, b = 0, c = 0;
  for (int i = 0; i < 3; ++i) {
    a += df[i].real() * df[i].real();
    b += df[i].real() * df[i].imag();
    c += df[i].imag() * df[i].imag();
  }
  const double tr = a + c, det = a * c - b * b;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return std::sqrt(std::max(0.0, 0.5 * tr - disc));
}

}  // namespace crlab
