#pragma once

#include <string>
#include <vector>

#include "crlab/common.hpp"
#include "crlab/forms.hpp"

namespace crlab {

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);
// Multi-indices of total degree m in decreasing lexicographic order.
std::vector<MultiIndex> degree_indices(int n, int m);
// All multi-indices with degree <= max_degree, graded.
std::vector<MultiIndex> graded_indices(int n, int max_degree);

// 2 pi^{n+1} alpha! / (n + |alpha|)!: squared norm of z^alpha under the
// round (equivalently contact) measure.
double monomial_norm2_closed(const MultiIndex& a);
double log_monomial_norm2_closed(const MultiIndex& a);
// Same integral computed with the Hopf product rule on S^3.
double monomial_norm2_quadrature(const MultiIndex& a, int level);

cdouble monomial(const MultiIndex& a, const CVec& z);

// Eigenbasis data of the Toeplitz operator -i T on the sphere: normalized
// monomials, with degree kernel constants c_m such that
// Pi_m(x, y) = c_m <x, y>^m.
class SpectralBasis {
 public:
  SpectralBasis(int n, int max_degree);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  double c(int m) const { return c_.at(m); }
  const std::vector<double>& c_table() const { return c_; }
  double contact_mass() const { return mass_; }
  double norm2(const MultiIndex& a) const;
  cdouble eval_normalized(const MultiIndex& a, const CVec& z) const;
  cdouble extend_to_ball(const MultiIndex& a, const CVec& z) const { return eval_normalized(a, z); }
  // Brute-force sum over the degree-m basis.
  cdouble degree_kernel(int m, const CVec& x, const CVec& y) const;
  // Largest relative gap between quadrature and closed-form norms.
  double max_norm_discrepancy() const { return max_discrepancy_; }
  void write_cache_csv(const std::string& path) const;

 private:
  int n_;
  int max_degree_;
  double mass_ = 0.0;
  double max_discrepancy_ = 0.0;
  std::vector<double> c_;
};

// |int Pi_m(x, y) p(y) dV(y) - p(x)| for the given polynomial p (or the
// projection itself when p has a different degree).
double reproducing_check(const SpectralBasis& basis, int m, const Polynomial& p, const CVec& x, int level);

}  // namespace crlab
