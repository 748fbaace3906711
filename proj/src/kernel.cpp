#include "crlab/kernel.hpp"

#include <cmath>

namespace crlab {

KernelField::KernelField(const CutoffSpec& cutoff, double k, std::shared_ptr<const SpectralBasis> basis,
                         KernelWeight kind)
    : cutoff_(cutoff), k_(k), basis_(std::move(basis)), kind_(kind) {
  cutoff_.validate();
  if (!(k > 0.0)) throw Error("semiclassical parameter k must be positive");
  const int first = std::max(0, static_cast<int>(std::floor(cutoff_.delta1 * k)));
  const int last = static_cast<int>(std::ceil(cutoff_.delta2 * k));
  for (int m = first; m <= last; ++m) {
    if (weight_kind() == KernelWeight::eta ? cutoff_.eta(m / k) > 0.0 : cutoff_.chi(m / k) > 0.0) {
      if (hi_ < lo_) lo_ = m;
      hi_ = m;
    }
  }
  if (hi_ < lo_) throw Error("cutoff band contains no degree");
  if (hi_ > basis_->max_degree()) throw Error("spectral basis max degree is below the active band");
  for (int m = lo_; m <= hi_; ++m) wc_.push_back(weight(m) * basis_->c(m));
  m0_ = moment(0);
}

double KernelField::weight(int m) const {
  const double c = cutoff_.chi(m / k_);
  return kind_ == KernelWeight::eta ? c * c : c;
}

double KernelField::moment(int j) const {
  CompensatedSum<double> s;
  for (int m = lo_; m <= hi_; ++m) s += std::pow(static_cast<double>(m), j) * wc_[m - lo_];
  return s.value();
}

void KernelField::series(cdouble rho, cdouble& s, cdouble& ds, cdouble& d2s) const {
  auto power = [&](int e) {
    cdouble p = 1.0;
    for (int i = 0; i < e; ++i) p *= rho;
    return p;
  };
  CompensatedSum<cdouble> a, b, c;
  cdouble r0 = power(lo_);
  cdouble r1 = lo_ >= 1 ? power(lo_ - 1) : cdouble(0.0);
  cdouble r2 = lo_ >= 2 ? power(lo_ - 2) : cdouble(0.0);
  for (int m = lo_; m <= hi_; ++m) {
    const double w = wc_[m - lo_];
    a += w * r0;
    if (m >= 1) b += (w * m) * r1;
    if (m >= 2) c += (w * m * (m - 1.0)) * r2;
    r2 = (m >= 1) ? r1 : cdouble(0.0);
    r1 = r0;
    r0 *= rho;
  }
  s = a.value();
  ds = b.value();
  d2s = c.value();
}

cdouble KernelField::kernel(const CVec& x, const CVec& y) const {
  cdouble s, ds, d2s;
  series(herm(x, y), s, ds, d2s);
  return s;
}

cdouble KernelField::grad(const CVec& x, const CVec& y, const CVec& v) const {
  cdouble s, ds, d2s;
  series(herm(x, y), s, ds, d2s);
  return ds * herm(v, y);
}

cdouble KernelField::grad_diag(const CVec& x, const CVec& v) const { return moment(1) * herm(v, x); }

cdouble KernelField::gradgrad_diag(const CVec& x, const CVec& v, const CVec& w) const {
  const double m1 = moment(1);
  const double s2 = moment(2) - m1;
  return m1 * herm(v, w) + s2 * herm(v, x) * herm(x, w);
}

double KernelField::asymptotic_ref() const {
  const WeightProfile w = kind_ == KernelWeight::eta ? eta_profile(cutoff_) : chi_profile(cutoff_);
  const int n = basis_->n();
  return std::pow(k_, n + 1) * tau(w, 0, n) / (2.0 * std::pow(kPi, n + 1));
}

cdouble KernelField::beta(const CVec& x, const CVec& v, double kappa) const {
  return grad_diag(x, v) / (2.0 * kPi * kI * (kappa * kappa + m0_));
}

void KernelField::radial(double s, double& g, double& dg, double& d2g) const {
  cdouble a, b, c;
  series(cdouble(s, 0.0), a, b, c);
  g = a.real();
  dg = b.real();
  d2g = c.real();
}

double KernelField::B(const CVec& z) const {
  double g, dg, d2g;
  radial(z.squaredNorm(), g, dg, d2g);
  return g;
}

CVec KernelField::del_log(const CVec& z, double c) const {
  double g, dg, d2g;
  radial(z.squaredNorm(), g, dg, d2g);
  return (dg / (c + g)) * z.conjugate();
}

Eigen::MatrixXcd KernelField::ddbar_log(const CVec& z, double c) const {
  double g, dg, d2g;
  radial(z.squaredNorm(), g, dg, d2g);
  const double den = c + g;
  const Eigen::Index d = z.size();
  Eigen::MatrixXcd h(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) {
      const cdouble zz = std::conj(z(j)) * z(k);
      h(j, k) = (j == k ? dg / den : 0.0) + (d2g / den - dg * dg / (den * den)) * zz;
    }
  return h;
}

}  // namespace crlab
