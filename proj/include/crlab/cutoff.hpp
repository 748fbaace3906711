#pragma once

#include <functional>
#include <string>

namespace crlab {

enum class Shape { smooth_bump, indicator };

Shape parse_shape(const std::string& s);
const char* shape_name(Shape s);

// The cutoff chi with support (delta1, delta2); eta = chi^2.
struct CutoffSpec {
  double delta1 = 0.25;
  double delta2 = 0.75;
  Shape shape = Shape::smooth_bump;
  double sharpness = 1.0;

  void validate() const;
  double chi(double t) const;
  double chi_k(double t, double k) const { return chi(t / k); }
  double eta(double t) const {
    const double c = chi(t);
    return c * c;
  }
  double peak() const;
};

// A nonnegative weight on a bounded interval.
struct WeightProfile {
  std::function<double(double)> fn;
  double lo = 0.0;
  double hi = 1.0;
  bool smooth = true;
};

WeightProfile chi_profile(const CutoffSpec& c);
WeightProfile eta_profile(const CutoffSpec& c);
WeightProfile indicator_profile(double lo, double hi);
WeightProfile rescaled(const WeightProfile& w, double s);

// tau_j = int t^{n+j} w(t) dt (j may be negative as long as the support
// stays away from zero).
double tau(const WeightProfile& w, int j, int n);
double mean_value(const WeightProfile& w, int n);
double variance(const WeightProfile& w, int n);

}  // namespace crlab
