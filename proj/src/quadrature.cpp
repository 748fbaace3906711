#include "crlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <boost/math/special_functions/legendre.hpp>

#include "crlab/geometry.hpp"

namespace crlab {

GaussRule gauss_legendre(int L, double a, double b) {
  if (L < 1) throw Error("Gauss-Legendre rule needs at least one node");
  GaussRule g;
  const auto zeros = boost::math::legendre_p_zeros<double>(L);
  std::vector<double> t, w;
  for (double x0 : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(L, x0);
    const double wt = 2.0 / ((1.0 - x0 * x0) * dp * dp);
    if (x0 == 0.0) {
      t.push_back(0.0);
      w.push_back(wt);
    } else {
      t.push_back(-x0);
      w.push_back(wt);
      t.push_back(x0);
      w.push_back(wt);
    }
  }
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return t[i] < t[j]; });
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (std::size_t i : order) {
    g.x.push_back(c + h * t[i]);
    g.w.push_back(h * w[i]);
  }
  return g;
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::round:
      return "round";
    case Measure::contact:
      return "contact";
    case Measure::ball:
      return "ball";
    case Measure::curve:
      return "curve";
    case Measure::disc:
      return "disc";
  }
  return "?";
}

double QuadratureRule::total() const {
  CompensatedSum<double> s;
  for (const auto& nd : nodes) s += nd.weight;
  return s.value();
}

HopfGrid::HopfGrid(int lvl, int n_theta_in) : level(lvl), n_theta(n_theta_in > 0 ? n_theta_in : 2 * lvl) {
  if (lvl < 1) throw Error("Hopf grid level must be positive");
  u = gauss_legendre(lvl, 0.0, 1.0);
}

double HopfGrid::theta(int a) const { return 2.0 * kPi * a / n_theta; }

double HopfGrid::weight(int i) const {
  const double dt = 2.0 * kPi / n_theta;
  return 0.5 * u.w[i] * dt * dt;
}

CVec HopfGrid::point(int i, int a, int b) const {
  CVec z(2);
  z(0) = std::sqrt(u.x[i]) * std::polar(1.0, theta(a));
  z(1) = std::sqrt(1.0 - u.x[i]) * std::polar(1.0, theta(b));
  return z;
}

std::vector<CVec> HopfGrid::frame(int i, int a, int b) const {
  const double uu = u.x[i];
  const cdouble e1 = std::polar(1.0, theta(a)), e2 = std::polar(1.0, theta(b));
  CVec f0(2), f1(2), f2(2);
  f0 << e1 / std::sqrt(uu), -e2 / std::sqrt(1.0 - uu);
  f1 << kI * std::sqrt(uu) * e1, 0.0;
  f2 << 0.0, kI * std::sqrt(1.0 - uu) * e2;
  return {f0, f1, f2};
}

QuadratureRule sphere_quadrature(int level, Measure measure) {
  if (level < 4) throw Error("sphere quadrature level must be at least 4");
  if (measure != Measure::round && measure != Measure::contact)
    throw Error("sphere quadrature supports the round and contact measures");
  HopfGrid g(level);
  QuadratureRule rule;
  rule.measure = measure;
  rule.n = 1;
  rule.dim = 3;
  rule.nodes.reserve(g.size());
  for (int i = 0; i < g.level; ++i)
    for (int a = 0; a < g.n_theta; ++a)
      for (int b = 0; b < g.n_theta; ++b) {
        QuadNode nd;
        nd.z = g.point(i, a, b);
        nd.frame = g.frame(i, a, b);
        nd.weight = g.weight(i);
        if (measure == Measure::contact) {
          const SpherePoint x(nd.z);
          const double density = contact_volume(x, tangent_frame(x));
          nd.weight *= density;
          nd.frame[0] /= density;
        }
        rule.nodes.push_back(std::move(nd));
      }
  return rule;
}

QuadratureRule sphere_quadrature_mc(int n, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error("Monte Carlo rule needs at least one node");
  std::mt19937_64 rng(seed);
  QuadratureRule rule;
  rule.measure = Measure::contact;
  rule.n = n;
  rule.dim = 2 * n + 1;
  const double w = sphere_area(n) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const SpherePoint x = random_sphere_point(n, rng);
    rule.nodes.push_back({x.z, w, tangent_frame(x)});
  }
  return rule;
}

QuadratureRule ball_quadrature(int radial_level, const HopfGrid& g) {
  if (radial_level < 2 || g.level < 2) throw Error("ball quadrature level must be at least 2");
  const GaussRule r = gauss_legendre(radial_level, 0.0, 1.0);
  QuadratureRule rule;
  rule.measure = Measure::ball;
  rule.n = 1;
  rule.dim = 4;
  rule.nodes.reserve(r.x.size() * g.size());
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    const double rr = r.x[k];
    const double wr = r.w[k] * rr * rr * rr;
    for (int i = 0; i < g.level; ++i)
      for (int a = 0; a < g.n_theta; ++a)
        for (int b = 0; b < g.n_theta; ++b) {
          const CVec x = g.point(i, a, b);
          auto f = g.frame(i, a, b);
          QuadNode nd;
          nd.z = rr * x;
          nd.weight = wr * g.weight(i);
          nd.frame = {x, f[0], f[1], f[2]};
          rule.nodes.push_back(std::move(nd));
        }
  }
  return rule;
}

QuadratureRule ball_quadrature(int level, int radial_level) {
  if (level < 2) throw Error("ball quadrature level must be at least 2");
  return ball_quadrature(radial_level > 0 ? radial_level : level, HopfGrid(level));
}

QuadratureRule circle_quadrature(const CVec& z0, const CVec& e, double radius, int level) {
  if (level < 2) throw Error("curve quadrature level must be at least 2");
  const int N = 4 * level;
  QuadratureRule rule;
  rule.measure = Measure::curve;
  rule.n = static_cast<int>(z0.size()) - 1;
  rule.dim = 1;
  for (int j = 0; j < N; ++j) {
    const cdouble ph = std::polar(1.0, 2.0 * kPi * j / N);
    rule.nodes.push_back({z0 + radius * ph * e, radius * 2.0 * kPi / N, {kI * ph * e}});
  }
  return rule;
}

QuadratureRule disc_quadrature(const CVec& z0, const CVec& e, double radius, int level) {
  if (level < 2) throw Error("disc quadrature level must be at least 2");
  const GaussRule s = gauss_legendre(level, 0.0, radius);
  const int N = 2 * level;
  QuadratureRule rule;
  rule.measure = Measure::disc;
  rule.n = static_cast<int>(z0.size()) - 1;
  rule.dim = 2;
  for (std::size_t k = 0; k < s.x.size(); ++k)
    for (int j = 0; j < N; ++j) {
      const cdouble ph = std::polar(1.0, 2.0 * kPi * j / N);
      rule.nodes.push_back({z0 + s.x[k] * ph * e, s.w[k] * s.x[k] * 2.0 * kPi / N, {ph * e, kI * ph * e}});
    }
  return rule;
}

cdouble form_pair(const CompiledForm& form, const QuadratureRule& rule) {
  if (form.degree() != rule.dim) throw Error("pairing a form of the wrong degree");
  CompensatedSum<cdouble> s;
  for (const auto& nd : rule.nodes) s += nd.weight * form.eval(nd.z, nd.frame);
  return s.value();
}

cdouble form_pair(const AmbientPolyForm& form, const QuadratureRule& rule) {
  return form_pair(CompiledForm(form), rule);
}

namespace {

struct Interval {
  double a, b;
  Eigen::VectorXcd value;
  double error;
};

void gk15(const std::function<void(double, Eigen::VectorXcd&)>& f, Interval& iv, Eigen::Index dim) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double h = 0.5 * (iv.b - iv.a), c = 0.5 * (iv.a + iv.b);
  Eigen::VectorXcd k = Eigen::VectorXcd::Zero(dim), g = Eigen::VectorXcd::Zero(dim), tmp(dim);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int reps = x[i] == 0.0 ? 1 : 2;
    for (int s = 0; s < reps; ++s) {
      f(c + (s ? -h : h) * x[i], tmp);
      k += wk[i] * tmp;
      if (i % 2 == 0) g += wg[i / 2] * tmp;
    }
  }
  iv.value = h * k;
  iv.error = h * (k - g).cwiseAbs().maxCoeff();
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<void(double, Eigen::VectorXcd&)>& f, double a, double b,
                                  Eigen::Index dim, const AdaptiveOptions& opt) {
  auto worse = [](const Interval& p, const Interval& q) { return p.error < q.error; };
  std::priority_queue<Interval, std::vector<Interval>, decltype(worse)> heap(worse);
  const int m = std::max(1, opt.initial_intervals);
  for (int i = 0; i < m; ++i) {
    Interval iv{a + (b - a) * i / m, a + (b - a) * (i + 1) / m, {}, 0.0};
    gk15(f, iv, dim);
    heap.push(std::move(iv));
  }
  AdaptiveResult res;
  auto totals = [&]() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    double e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    res.value = v;
    res.error = e;
  };
  totals();
  while (true) {
    const double scale = dim > 0 ? res.value.cwiseAbs().maxCoeff() : 0.0;
    if (res.error <= std::max(opt.abs_tol, opt.rel_tol * scale)) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opt.max_intervals) break;
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(std::move(worst));
      break;
    }
    Interval l{worst.a, mid, {}, 0.0}, r{mid, worst.b, {}, 0.0};
    gk15(f, l, dim);
    gk15(f, r, dim);
    res.value += l.value + r.value - worst.value;
    res.error += l.error + r.error - worst.error;
    heap.push(std::move(l));
    heap.push(std::move(r));
    if (heap.size() % 64 == 0) totals();
  }
  totals();
  res.intervals = static_cast<int>(heap.size());
  return res;
}

}  // namespace crlab
