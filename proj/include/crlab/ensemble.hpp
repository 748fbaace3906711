#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "crlab/kernel.hpp"

namespace crlab {

struct EnsembleConfig {
  double k = 32.0;
  CutoffSpec cutoff;
  int kappa = 0;
  std::uint64_t seed = 20240601;
};

struct GaussianDraw {
  CVec a;  // a_0 first when kappa = 1, then the band terms in graded order
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// Random CR functions f = sum a_j chi(m_j/k) f_j (kappa = 0) and random
// holomorphic functions u = a_0 + sum a_j chi(m_j/k) f_j (kappa = 1).
class Ensemble {
 public:
  Ensemble(const EnsembleConfig& cfg, std::shared_ptr<const SpectralBasis> basis);

  const EnsembleConfig& config() const { return cfg_; }
  int n() const { return basis_->n(); }
  int kappa() const { return cfg_.kappa; }
  std::size_t size() const { return alphas_.size() + (cfg_.kappa ? 1 : 0); }
  const std::vector<MultiIndex>& alphas() const { return alphas_; }
  // chi(m/k) / |z^alpha| per band term.
  const std::vector<double>& scales() const { return scale_; }
  const KernelField& kernel() const { return eta_; }
  int max_degree() const { return eta_.band_hi(); }

  GaussianDraw sample(std::uint64_t index) const;
  // Draw with a given coefficient vector (manual draws in tests).
  GaussianDraw manual(const CVec& a) const;

  cdouble eval_f(const GaussianDraw& d, const CVec& z) const;
  // Holomorphic gradient (df/dz_j).
  CVec gradient(const GaussianDraw& d, const CVec& z) const;
  cdouble eval_df(const GaussianDraw& d, const CVec& z, const CVec& v) const;
  // (1,0) part of df at an interior point: coefficients along dz_j.
  CVec eval_partial(const GaussianDraw& d, const CVec& z) const { return gradient(d, z); }

  void dump_csv(const std::vector<GaussianDraw>& draws, const std::string& path) const;

 private:
  void powers(const CVec& z, std::vector<std::vector<cdouble>>& pw) const;

  EnsembleConfig cfg_;
  std::shared_ptr<const SpectralBasis> basis_;
  KernelField eta_;
  std::vector<MultiIndex> alphas_;
  std::vector<double> scale_;
};

// Smallest singular value of the real 2x3 matrix [Re df(e_c); Im df(e_c)].
double tangential_sigma_min(const cdouble df[3]);

}  // namespace crlab
