#pragma once

#include <memory>

#include "crlab/common.hpp"
#include "crlab/cutoff.hpp"
#include "crlab/spectral.hpp"

namespace crlab {

enum class KernelWeight { chi, eta };

// chi_k(T_P) or eta_k(T_P) on the sphere, through the scalar series
// S(rho) = sum_m w_m c_m rho^m with rho = <x, y>.
class KernelField {
 public:
  KernelField(const CutoffSpec& cutoff, double k, std::shared_ptr<const SpectralBasis> basis,
              KernelWeight weight = KernelWeight::eta);

  double k() const { return k_; }
  int n() const { return basis_->n(); }
  int band_lo() const { return lo_; }
  int band_hi() const { return hi_; }
  const CutoffSpec& cutoff() const { return cutoff_; }
  const SpectralBasis& basis() const { return *basis_; }
  KernelWeight weight_kind() const { return kind_; }
  double weight(int m) const;
  // sum_m m^j w_m c_m
  double moment(int j) const;

  // S, S', S'' at rho.
  void series(cdouble rho, cdouble& s, cdouble& ds, cdouble& d2s) const;
  cdouble kernel(const CVec& x, const CVec& y) const;
  double diag() const { return m0_; }
  // d_x K(x, y)(v) off the diagonal.
  cdouble grad(const CVec& x, const CVec& y, const CVec& v) const;
  // d_x K(x, y)(v) at y = x, and the mixed derivative d_x d_ybar at y = x.
  cdouble grad_diag(const CVec& x, const CVec& v) const;
  cdouble gradgrad_diag(const CVec& x, const CVec& v, const CVec& w) const;
  // k^{n+1} tau_0 / (2 pi^{n+1}) for the weight in use.
  double asymptotic_ref() const;
  // beta_k(v) = d_x K(v) / (2 pi i (kappa^2 + K(x, x))).
  cdouble beta(const CVec& x, const CVec& v, double kappa = 0.0) const;

  // B(z) = sum_m w_m c_m |z|^{2m} and its radial derivatives in s = |z|^2.
  void radial(double s, double& g, double& dg, double& d2g) const;
  double B(const CVec& z) const;
  // Coefficients of d log(c + B) along dz_j.
  CVec del_log(const CVec& z, double c) const;
  // H(j, k): coefficient of dz_j ^ dzbar_k in ddbar log(c + B).
  Eigen::MatrixXcd ddbar_log(const CVec& z, double c) const;

 private:
  CutoffSpec cutoff_;
  double k_;
  std::shared_ptr<const SpectralBasis> basis_;
  KernelWeight kind_;
  int lo_ = 0, hi_ = -1;
  std::vector<double> wc_;  // w_m c_m for m in [lo, hi]
  double m0_ = 0.0;
};

}  // namespace crlab
