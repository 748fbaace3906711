#include "crlab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <functional>

#include "crlab/geometry.hpp"
#include "crlab/quadrature.hpp"

namespace crlab {

int degree(const MultiIndex& a) {
  int d = 0;
  for (int x : a) d += x;
  return d;
}

std::vector<MultiIndex> degree_indices(int n, int m) {
  std::vector<MultiIndex> out;
  MultiIndex a(n + 1, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n) {
      a[pos] = left;
      out.push_back(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, m);
  return out;
}

std::vector<MultiIndex> graded_indices(int n, int max_degree) {
  std::vector<MultiIndex> out;
  for (int m = 0; m <= max_degree; ++m) {
    auto d = degree_indices(n, m);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

double log_monomial_norm2_closed(const MultiIndex& a) {
  const int n = static_cast<int>(a.size()) - 1;
  double s = std::log(2.0) + (n + 1) * std::log(kPi);
  for (int x : a) s += std::lgamma(x + 1.0);
  s -= std::lgamma(n + degree(a) + 1.0);
  return s;
}

double monomial_norm2_closed(const MultiIndex& a) { return std::exp(log_monomial_norm2_closed(a)); }

namespace {
// |z^a|^2 does not depend on the angles, so only the u-marginal is summed.
double norm2_on_rule(const MultiIndex& a, const GaussRule& u) {
  const double angular = 4.0 * kPi * kPi;
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < u.x.size(); ++i) {
    const double x = u.x[i];
    const double lg = std::log(0.5 * u.w[i]) + (a[0] ? a[0] * std::log(x) : 0.0) +
                      (a[1] ? a[1] * std::log1p(-x) : 0.0);
    s += std::exp(lg);
  }
  return angular * s.value();
}
}  // namespace

double monomial_norm2_quadrature(const MultiIndex& a, int level) {
  if (a.size() != 2) throw Error("quadrature norms are implemented on S^3");
  return norm2_on_rule(a, gauss_legendre(level, 0.0, 1.0));
}

cdouble monomial(const MultiIndex& a, const CVec& z) {
  cdouble v = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (int e = 0; e < a[j]; ++e) v *= z(j);
  return v;
}

SpectralBasis::SpectralBasis(int n, int max_degree) : n_(n), max_degree_(max_degree) {
  if (n < 1) throw Error("dimension n must be at least 1");
  if (max_degree < 0) throw Error("negative max degree");
  c_.assign(max_degree + 1, 0.0);

  // Density of the contact volume against the round measure, measured on a
  // frame at a generic point.
  double density = 1.0;
  if (n == 1) {
    CVec p(2);
    p << std::polar(0.6, 0.3), std::polar(0.8, -1.1);
    const SpherePoint x(p);
    density = contact_volume(x, tangent_frame(x));
  }
  mass_ = density * sphere_area(n);

  CVec xr(n + 1);
  for (int j = 0; j <= n; ++j) xr(j) = std::polar(1.0, 0.7 * j + 0.2) * std::sqrt((j + 1.0));
  xr /= xr.norm();
  std::vector<double> logabs(n + 1);
  for (int j = 0; j <= n; ++j) logabs[j] = std::log(std::norm(xr(j)));

  for (int m = 0; m <= max_degree; ++m) {
    const GaussRule rule = n == 1 ? gauss_legendre(m / 2 + 2, 0.0, 1.0) : GaussRule{};
    CompensatedSum<double> cm;
    for (const auto& a : degree_indices(n, m)) {
      double lognorm = log_monomial_norm2_closed(a);
      if (n == 1) {
        const double q = density * norm2_on_rule(a, rule);
        const double rel = std::abs(std::log(q) - lognorm);
        max_discrepancy_ = std::max(max_discrepancy_, rel);
        if (rel > 1e-8) throw Error("monomial norm quadrature disagrees with the Beta closed form");
        lognorm = std::log(q);
      }
      double l = -lognorm;
      for (int j = 0; j <= n; ++j) l += a[j] * logabs[j];
      cm += std::exp(l);
    }
    c_[m] = cm.value();
  }
}

double SpectralBasis::norm2(const MultiIndex& a) const {
  if (static_cast<int>(a.size()) != n_ + 1) throw Error("multi-index has wrong length");
  if (degree(a) > max_degree_) throw Error("multi-index exceeds the configured max degree");
  return monomial_norm2_closed(a) * mass_ / sphere_area(n_);
}

cdouble SpectralBasis::eval_normalized(const MultiIndex& a, const CVec& z) const {
  return monomial(a, z) / std::sqrt(norm2(a));
}

cdouble SpectralBasis::degree_kernel(int m, const CVec& x, const CVec& y) const {
  CompensatedSum<cdouble> s;
  for (const auto& a : degree_indices(n_, m)) s += monomial(a, x) * std::conj(monomial(a, y)) / norm2(a);
  return s.value();
}

void SpectralBasis::write_cache_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write basis cache " + path);
  out << "alpha,norm2,c_m\n";
  out.precision(17);
  for (int m = 0; m <= max_degree_; ++m)
    for (const auto& a : degree_indices(n_, m)) {
      for (std::size_t j = 0; j < a.size(); ++j) out << (j ? ";" : "") << a[j];
      out << "," << norm2(a) << "," << c_[m] << "\n";
    }
}

double reproducing_check(const SpectralBasis& basis, int m, const Polynomial& p, const CVec& x, int level) {
  const QuadratureRule rule = sphere_quadrature(level, Measure::contact);
  CompensatedSum<cdouble> s;
  for (const auto& nd : rule.nodes) s += nd.weight * basis.c(m) * std::pow(herm(x, nd.z), m) * p.eval(nd.z);
  bool same_degree = true;
  for (const auto& [e, c] : p.terms()) {
    int d = 0;
    for (int j = 0; j <= basis.n(); ++j) d += e[j];
    for (std::size_t j = basis.n() + 1; j < e.size(); ++j)
      if (e[j] != 0) same_degree = false;
    if (d != m) same_degree = false;
  }
  return std::abs(s.value() - (same_degree ? p.eval(x) : cdouble(0.0)));
}

}  // namespace crlab
