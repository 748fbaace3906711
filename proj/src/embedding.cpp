#include "crlab/embedding.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "crlab/geometry.hpp"

namespace crlab {

Embedding::Embedding(const EmbeddingConfig& cfg, std::shared_ptr<const SpectralBasis> basis)
    : eta_(cfg.cutoff, cfg.k, basis, KernelWeight::eta), cutoff_(cfg.cutoff), k_(cfg.k), kappa_(cfg.kappa) {
  if (kappa_ != 0 && kappa_ != 1) throw Error("kappa must be 0 or 1");
  for (int m = eta_.band_lo(); m <= eta_.band_hi(); ++m) {
    const double chi = cutoff_.chi(m / k_);
    for (const auto& a : degree_indices(basis->n(), m)) {
      alphas_.push_back(a);
      scale_.push_back(chi / std::sqrt(basis->norm2(a)));
    }
  }
}

std::vector<int> Embedding::weights() const {
  std::vector<int> w;
  if (kappa_) w.push_back(0);
  for (const auto& a : alphas_) w.push_back(degree(a));
  return w;
}

CVec Embedding::F(const CVec& x) const {
  CVec f(dimension());
  Eigen::Index i = 0;
  if (kappa_) f(i++) = static_cast<double>(kappa_);
  for (std::size_t j = 0; j < alphas_.size(); ++j) f(i++) = scale_[j] * monomial(alphas_[j], x);
  return f;
}

double Embedding::h(const CVec& x, const CVec& y) const {
  const cdouble c = static_cast<double>(kappa_ * kappa_) + eta_.kernel(x, y);
  const double nx = kappa_ * kappa_ + eta_.kernel(x, x).real();
  const double ny = kappa_ * kappa_ + eta_.kernel(y, y).real();
  if (!(nx > 0.0 && ny > 0.0)) throw Error("embedding has a vanishing component norm");
  return std::norm(c) / (nx * ny);
}

double Embedding::H(const CVec& x, const CVec& v, const CVec& w) const {
  const double n = norm2();
  const cdouble av = eta_.grad_diag(x, v), aw = eta_.grad_diag(x, w);
  const cdouble b = eta_.gradgrad_diag(x, v, w);
  return (av * std::conj(aw) - b * n).real() / (n * n);
}

Eigen::MatrixXd Embedding::hessian_matrix(const CVec& x, const std::vector<CVec>& frame) const {
  const auto d = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = H(x, frame[i], frame[j]);
  return m;
}

cdouble Embedding::fs_pullback(const CVec& x, const CVec& v, const CVec& w) const {
  const double n = norm2();
  const cdouble av = eta_.grad_diag(x, v), aw = eta_.grad_diag(x, w);
  const cdouble b = eta_.gradgrad_diag(x, v, w);
  return (n * b - av * std::conj(aw)) / (n * n);
}

double Embedding::fs_distance(const CVec& x, const CVec& y) const {
  return std::sqrt(std::max(0.0, 1.0 - std::sqrt(h(x, y))));
}

SeparationReport separation_scan(const Embedding& emb, std::size_t samples, double delta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = emb.kernel().n();
  SeparationReport rep;
  auto consider = [&](const CVec& x, const CVec& y) {
    const double h = emb.h(x, y);
    ++rep.pairs;
    rep.max_h_distinct = std::max(rep.max_h_distinct, h);
    if ((x - y).norm() >= delta * (1.0 - 1e-12) && h >= rep.max_h) {
      rep.max_h = h;
      rep.argmax_x = x;
      rep.argmax_y = y;
    }
  };
  const double theta = 2.0 * std::asin(delta / 2.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const SpherePoint x = random_sphere_point(n, rng);
    const SpherePoint y = random_sphere_point(n, rng);
    if ((x.z - y.z).norm() >= delta) consider(x.z, y.z);
    consider(x.z, std::polar(1.0, theta) * x.z);
    CVec e = random_horizontal(x, rng);
    e /= e.norm();
    consider(x.z, std::cos(theta) * x.z + std::sin(theta) * e);
  }
  return rep;
}

double local_quadratic_constant(const Embedding& emb, std::size_t samples, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  const int n = emb.kernel().n();
  const double k = emb.kernel().k();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const SpherePoint x = random_sphere_point(n, rng);
    CVec v = random_tangent(x, rng);
    v *= radius * uni(rng) / v.norm();
    const SpherePoint y(x.z + v);
    const cdouble rho = herm(x.z, y.z);
    const double th = std::arg(rho);
    const double denom = k * k * th * th + k * (1.0 - std::norm(rho));
    if (denom <= 0.0) continue;
    best = std::min(best, (1.0 - emb.h(x.z, y.z)) / denom);
  }
  return best;
}

double hessian_fd(const Embedding& emb, const CVec& y, const CVec& v, const CVec& w, double s) {
  auto g = [&](double a, double b) {
    CVec p = y + a * v + b * w;
    p /= p.norm();
    return emb.h(p, y);
  };
  auto central = [&](double t) { return (g(t, t) - g(t, -t) - g(-t, t) + g(-t, -t)) / (4 * t * t); };
  return (4.0 * central(s / 2) - central(s)) / 3.0;
}

}  // namespace crlab
