#pragma once

#include <vector>

#include "crlab/nodal.hpp"
#include "crlab/quadrature.hpp"

namespace crlab {

// Grid estimator of C_f(psi_j) = (1/2 pi i) int df/f ^ psi_j for draws of a
// kappa = 0 or kappa = 1 ensemble, regularized by
// delta = delta_rel (kappa^2 + M_0).
class NodalCR {
 public:
  NodalCR(const HopfFFT& fft, std::vector<AmbientPolyForm> psis, double delta_rel = 1e-6);

  std::size_t forms() const { return wedges_.size(); }
  double delta() const { return delta_; }
  std::vector<cdouble> pair(const NodalFields& fields) const;
  // Exact mean of pair() over the ensemble.
  std::vector<cdouble> expectation() const;
  // int beta_k ^ psi_j on the same grid: the delta -> 0 limit of expectation().
  std::vector<cdouble> beta_pairing() const;

 private:
  const HopfFFT& fft_;
  std::vector<OneFormWedge> wedges_;
  std::vector<cdouble> c1_, c2_;  // per u node: E[f_a conj f] / E|f|^2
  double sigma2_ = 0.0;
  double delta_ = 0.0;
};

// Grid estimator of the boundary pairing (Z_u, psi_j) on the unit ball for a
// kappa = 1 ensemble:
// (i/pi)[-int_S du/(2u) ^ psi - int_S log|u| dbar psi + int_D log|u| ddbar psi]
// with |u|^2 replaced by |u|^2 + delta, delta = delta_rel (1 + M_0).
class NodalBoundary {
 public:
  NodalBoundary(const HopfFFT& fft, int radial_nodes, std::vector<AmbientPolyForm> psis, double delta_rel = 1e-6);

  std::size_t forms() const { return wedges_.size(); }
  double delta() const { return delta_; }
  const GaussRule& radial() const { return radial_; }
  // sphere: fields of the draw on the unit sphere; scratch is reused for
  // the ball slices.
  std::vector<cdouble> pair(const GaussianDraw& d, const NodalFields& sphere, NodalFields& scratch) const;
  std::vector<cdouble> expectation() const;

 private:
  const HopfFFT& fft_;
  GaussRule radial_;
  std::vector<OneFormWedge> wedges_;
  std::vector<std::vector<cdouble>> dbar_;  // [form][node]
  // [form][power p][node]: ddbar psi split by the homogeneous degree p of its
  // coefficients, so the value on the slice of radius r is
  // w_r r^3 sum_p r^p table[p][node].
  std::vector<std::vector<std::vector<cdouble>>> ball_;
  std::vector<cdouble> c1_, c2_;
  double delta_ = 0.0;
};

// int_{S^3} beta_k ^ psi from KernelField::beta on a Hopf product rule.
cdouble beta_pairing_quadrature(const KernelField& kernel, double kappa, const AmbientPolyForm& psi, int level);

// int_{S^3} xi ^ psi for a 2-form psi.
cdouble contact_pairing(const AmbientPolyForm& psi, int level = 16);

struct ReferenceValue {
  cdouble value;
  double error = 0.0;
};
// int_D i ddbar log(c + B_k) ^ psi for a (1,1)-form psi: adaptive in the
// radius, a Hopf product rule in the angles.
ReferenceValue ddbar_log_pairing(const KernelField& kernel, double c, const AmbientPolyForm& psi, int angular_level = 0,
                                 double rel_tol = 1e-10);

}  // namespace crlab
