#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crlab/common.hpp"
#include "crlab/forms.hpp"

namespace crlab {

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule with L nodes on [a, b].
GaussRule gauss_legendre(int L, double a, double b);

enum class Measure { round, contact, ball, curve, disc };

const char* measure_name(Measure m);

// A node carries a positively oriented frame whose volume under the target
// measure is one, so a top-degree form integrates as sum w * form(frame).
struct QuadNode {
  CVec z;
  double weight = 0.0;
  std::vector<CVec> frame;
};

struct QuadratureRule {
  Measure measure = Measure::round;
  int n = 1;
  int dim = 3;
  std::vector<QuadNode> nodes;

  double total() const;
};

// Product structure of the Hopf rule on S^3: Gauss-Legendre in u = |z_0|^2,
// trapezoid with N points in each angle.
struct HopfGrid {
  int level = 0;
  int n_theta = 0;
  GaussRule u;

  HopfGrid() = default;
  HopfGrid(int level, int n_theta = 0);
  double theta(int a) const;
  std::size_t size() const { return u.x.size() * n_theta * n_theta; }
  // Weight of node (i, a, b) under the round measure.
  double weight(int i) const;
  CVec point(int i, int a, int b) const;
  // (2 d/du, d/dtheta_0, d/dtheta_1) at node (i, a, b).
  std::vector<CVec> frame(int i, int a, int b) const;
};

QuadratureRule sphere_quadrature(int level, Measure measure = Measure::contact);
QuadratureRule sphere_quadrature_mc(int n, std::size_t count, std::uint64_t seed);
QuadratureRule ball_quadrature(int level, int radial_level = 0);
QuadratureRule ball_quadrature(int radial_level, const HopfGrid& grid);

// Circle {z0 + R e^{it} e} and disc {z0 + s e^{it} e, s < R} in the complex
// line through z0 with unit direction e.
QuadratureRule circle_quadrature(const CVec& z0, const CVec& e, double radius, int level);
QuadratureRule disc_quadrature(const CVec& z0, const CVec& e, double radius, int level);

cdouble form_pair(const AmbientPolyForm& form, const QuadratureRule& rule);

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int initial_intervals = 1;
  int max_intervals = 2000;
};

struct AdaptiveResult {
  Eigen::VectorXcd value;
  double error = 0.0;  // sum of |K15 - G7| (max norm) over the final intervals
  int intervals = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7, 15) for a vector-valued integrand
// f(x, out) with out of length dim. Tolerances refer to the max norm.
AdaptiveResult integrate_adaptive(const std::function<void(double, Eigen::VectorXcd&)>& f, double a, double b,
                                  Eigen::Index dim, const AdaptiveOptions& opt = {});
cdouble form_pair(const CompiledForm& form, const QuadratureRule& rule);

}  // namespace crlab
