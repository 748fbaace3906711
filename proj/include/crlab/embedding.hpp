#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "crlab/kernel.hpp"

namespace crlab {

struct EmbeddingConfig {
  double k = 64.0;
  CutoffSpec cutoff;
  int kappa = 0;
};

// F_k(x) = (kappa, chi(m/k) z^alpha / |z^alpha|, ...) and the functionals
// built from it. Every quantity other than F itself goes through the eta
// kernel, so |F|^2 = kappa^2 + eta_k(T_P)(x, x).
class Embedding {
 public:
  Embedding(const EmbeddingConfig& cfg, std::shared_ptr<const SpectralBasis> basis);

  const KernelField& kernel() const { return eta_; }
  int kappa() const { return kappa_; }
  std::size_t dimension() const { return alphas_.size() + (kappa_ ? 1 : 0); }
  const std::vector<MultiIndex>& alphas() const { return alphas_; }
  std::vector<int> weights() const;

  CVec F(const CVec& x) const;
  double norm2() const { return kappa_ * kappa_ + eta_.diag(); }
  double h(const CVec& x, const CVec& y) const;
  // Re(<VF,F> conj<WF,F> - <VF,WF>|F|^2) / |F|^4. The Hessian of
  // h(., x) at x is 2 H.
  double H(const CVec& x, const CVec& v, const CVec& w) const;
  // H on a frame.
  Eigen::MatrixXd hessian_matrix(const CVec& x, const std::vector<CVec>& frame) const;
  cdouble fs_pullback(const CVec& x, const CVec& v, const CVec& w) const;
  double fs_distance(const CVec& x, const CVec& y) const;

 private:
  KernelField eta_;
  CutoffSpec cutoff_;
  double k_;
  int kappa_;
  std::vector<MultiIndex> alphas_;
  std::vector<double> scale_;
};

struct SeparationReport {
  std::size_t pairs = 0;
  double max_h = 0.0;
  double max_h_distinct = 0.0;  // over all sampled distinct pairs
  CVec argmax_x, argmax_y;
};

// Second derivative of h(., y) at y along (v, w) by central differences on
// the curves (y + a v + b w) / |y + a v + b w|, one Richardson step in the
// step size s.
double hessian_fd(const Embedding& emb, const CVec& y, const CVec& v, const CVec& w, double s);

// Max of h over random pairs at chordal distance >= delta, plus pairs at
// distance exactly delta along the Reeb and horizontal directions.
SeparationReport separation_scan(const Embedding& emb, std::size_t samples, double delta, std::uint64_t seed);

// Smallest ratio (1 - h) / (k^2 theta^2 + k (1 - |rho|^2)) over pairs close
// to the diagonal, where rho = <x, y> = |rho| e^{i theta}.
double local_quadratic_constant(const Embedding& emb, std::size_t samples, double radius, std::uint64_t seed);

}  // namespace crlab
