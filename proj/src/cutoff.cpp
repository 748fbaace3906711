#include "crlab/cutoff.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crlab/common.hpp"

namespace crlab {

Shape parse_shape(const std::string& s) {
  if (s == "smooth-bump" || s == "bump") return Shape::smooth_bump;
  if (s == "indicator") return Shape::indicator;
  throw ConfigError("unknown cutoff shape '" + s + "'");
}

const char* shape_name(Shape s) { return s == Shape::smooth_bump ? "smooth-bump" : "indicator"; }

void CutoffSpec::validate() const {
  if (!(delta1 < delta2)) throw ConfigError("cutoff needs delta1 < delta2");
  if (shape == Shape::smooth_bump && !(delta1 > 0.0)) throw ConfigError("smooth cutoff needs delta1 > 0");
  if (shape == Shape::indicator && delta1 < 0.0) throw ConfigError("indicator cutoff needs delta1 >= 0");
  if (!(sharpness > 0.0)) throw ConfigError("bump sharpness must be positive");
}

double CutoffSpec::chi(double t) const {
  if (shape == Shape::indicator) return (t >= delta1 && t <= delta2) ? 1.0 : 0.0;
  if (!(t > delta1 && t < delta2)) return 0.0;
  const double u = (2.0 * t - delta1 - delta2) / (delta2 - delta1);
  return std::exp(-sharpness / (1.0 - u * u));
}

double CutoffSpec::peak() const { return shape == Shape::indicator ? 1.0 : std::exp(-sharpness); }

WeightProfile chi_profile(const CutoffSpec& c) {
  return {[c](double t) { return c.chi(t); }, c.delta1, c.delta2, c.shape == Shape::smooth_bump};
}

WeightProfile eta_profile(const CutoffSpec& c) {
  return {[c](double t) { return c.eta(t); }, c.delta1, c.delta2, c.shape == Shape::smooth_bump};
}

WeightProfile indicator_profile(double lo, double hi) {
  return {[lo, hi](double t) { return (t >= lo && t <= hi) ? 1.0 : 0.0; }, lo, hi, false};
}

WeightProfile rescaled(const WeightProfile& w, double s) {
  auto f = w.fn;
  return {[f, s](double t) { return f(t / s); }, w.lo * s, w.hi * s, w.smooth};
}

double tau(const WeightProfile& w, int j, int n) {
  const int p = n + j;
  if (p < 0 && w.lo <= 0.0) throw Error("negative moment of a weight touching zero");
  auto integrand = [&](double t) {
    const double v = std::pow(t, p) * w.fn(t);
    if (!std::isfinite(v)) throw Error("nonfinite integrand in moment");
    return v;
  };
  double err = 0.0;
  const double scale = std::max(std::abs(w.lo), std::abs(w.hi));
  const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, w.lo, w.hi, 15, 1e-13, &err);
  if (err > 1e-12 * std::max(std::abs(val), std::pow(scale, p + 1) * 1e-300))
    throw Error("moment quadrature did not reach tolerance");
  return val;
}

double mean_value(const WeightProfile& w, int n) {
  const double t0 = tau(w, 0, n);
  if (!(t0 > 0.0)) throw Error("weight has zero mass");
  return tau(w, 1, n) / t0;
}

double variance(const WeightProfile& w, int n) {
  const double t0 = tau(w, 0, n);
  if (!(t0 > 0.0)) throw Error("weight has zero mass");
  const double mv = tau(w, 1, n) / t0;
  return tau(w, 2, n) / t0 - mv * mv;
}

}  // namespace crlab
