#pragma once

#include <cstddef>
#include <vector>

#include "crlab/ensemble.hpp"
#include "crlab/forms.hpp"
#include "crlab/quadrature.hpp"

namespace crlab {

// Hopf grid that resolves functions of top degree m: L = m + 8 nodes in u
// and N = 2L angles rounded up to a multiple of 8.
HopfGrid nodal_grid(int max_degree);

struct NodalFields {
  std::vector<cdouble> f;   // f at r x
  std::vector<cdouble> f1;  // d/dtheta_0
  std::vector<cdouble> f2;  // d/dtheta_1
};

// Evaluates one draw on every node of a Hopf grid on S^3 (or on the sphere
// of radius r) with one inverse 2-D FFT per u node. Node (i, a, b) is stored
// at (i N + a) N + b.
class HopfFFT {
 public:
  HopfFFT(const Ensemble& ens, HopfGrid grid);
  ~HopfFFT();
  HopfFFT(const HopfFFT&) = delete;
  HopfFFT& operator=(const HopfFFT&) = delete;

  const Ensemble& ensemble() const { return ens_; }
  const HopfGrid& grid() const { return grid_; }
  int n_theta() const { return grid_.n_theta; }
  std::size_t size() const { return grid_.size(); }
  std::size_t node(int i, int a, int b) const {
    return (static_cast<std::size_t>(i) * grid_.n_theta + a) * grid_.n_theta + b;
  }

  void evaluate(const GaussianDraw& d, double r, NodalFields& out, bool derivatives = true) const;

 private:
  const Ensemble& ens_;
  HopfGrid grid_;
  std::vector<int> e0_, e1_;
  std::vector<double> slice_;  // [i * T + t] = scale_t u_i^{e0/2} (1 - u_i)^{e1/2}
  void* plan_ = nullptr;
};

// df on the frame (2 d/du, d/dtheta_0, d/dtheta_1) from the angular
// derivatives of a holomorphic function at u.
inline cdouble df_du2(cdouble f1, cdouble f2, double u) {
  return f1 / (kI * u) - f2 / (kI * (1.0 - u));
}

// Per-node coefficients turning (f1, f2) into w (df ^ psi)(frame) for a
// 2-form psi on S^3: value = f1 g1 + f2 g2.
struct OneFormWedge {
  std::vector<cdouble> g1, g2;
};
OneFormWedge one_form_wedge(const HopfGrid& grid, const AmbientPolyForm& psi);

// Per-node w * omega(frame) for a 3-form omega on S^3.
std::vector<double> top_form_weights(const HopfGrid& grid, const AmbientPolyForm& omega);
std::vector<cdouble> top_form_values(const HopfGrid& grid, const AmbientPolyForm& omega);

// Per-node w * omega(x, frame) on the ball slices of a radial rule.
std::vector<cdouble> ball_form_values(const HopfGrid& grid, const GaussRule& radial, const AmbientPolyForm& omega);

// 1 - q e^q E1(q): the factor E[|X|^2/(|X|^2 + delta)] for complex Gaussian
// X with E|X|^2 = sigma2 and q = delta / sigma2.
double regularization_bias(double q);
// E log(|X|^2 + delta) for the same X.
double expected_log(double sigma2, double delta);

struct RegularityReport {
  bool accept = false;
  double margin = 0.0;
  std::size_t near_zero_nodes = 0;
};

// Smallest singular value of df restricted to T S^3 over the zero set,
// relative to sqrt(M_1) (the size of df along a unit horizontal vector),
// from a grid scan and a Newton projection of the best candidates.
RegularityReport regularity_filter(const HopfFFT& fft, const GaussianDraw& d, double threshold);
// Same, reusing fields already evaluated on the unit sphere.
RegularityReport regularity_filter(const HopfFFT& fft, const GaussianDraw& d, const NodalFields& fields,
                                   double threshold);

}  // namespace crlab
