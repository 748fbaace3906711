#include "crlab/montecarlo.hpp"

#include <cmath>

namespace crlab {

namespace {

// Per u node c_a = d_a K(x, x) / (kappa^2 + M_0) along d/dtheta_a.
void covariance_slopes(const HopfFFT& fft, double sigma2, std::vector<cdouble>& c1, std::vector<cdouble>& c2) {
  const auto& g = fft.grid();
  const auto& K = fft.ensemble().kernel();
  for (int i = 0; i < g.level; ++i) {
    const CVec x = g.point(i, 0, 0);
    const auto F = g.frame(i, 0, 0);
    c1.push_back(K.grad_diag(x, F[1]) / sigma2);
    c2.push_back(K.grad_diag(x, F[2]) / sigma2);
  }
}

// Sum over nodes of c1 g1 + c2 g2 with u-dependent slopes.
cdouble slope_sum(const HopfGrid& g, const OneFormWedge& w, const std::vector<cdouble>& c1,
                  const std::vector<cdouble>& c2) {
  const std::size_t per = static_cast<std::size_t>(g.n_theta) * g.n_theta;
  CompensatedSum<cdouble> s;
  for (std::size_t idx = 0; idx < w.g1.size(); ++idx) {
    const std::size_t i = idx / per;
    s += c1[i] * w.g1[idx] + c2[i] * w.g2[idx];
  }
  return s.value();
}

cdouble plain_sum(const std::vector<cdouble>& v) {
  CompensatedSum<cdouble> s;
  for (const auto& x : v) s += x;
  return s.value();
}

AmbientPolyForm homogeneous_part(const AmbientPolyForm& f, int p) {
  AmbientPolyForm out(f.n(), f.degree());
  for (const auto& [idx, poly] : f.terms()) {
    Polynomial q(f.n());
    for (const auto& [e, c] : poly.terms()) {
      int d = 0;
      for (int x : e) d += x;
      if (d == p) q.add_term(e, c);
    }
    if (!q.is_zero()) out.add_term(idx, q);
  }
  return out;
}

}  // namespace

NodalCR::NodalCR(const HopfFFT& fft, std::vector<AmbientPolyForm> psis, double delta_rel) : fft_(fft) {
  const auto& ens = fft.ensemble();
  sigma2_ = ens.kappa() * ens.kappa() + ens.kernel().diag();
  delta_ = delta_rel * sigma2_;
  for (const auto& psi : psis) wedges_.push_back(one_form_wedge(fft.grid(), psi));
  covariance_slopes(fft, sigma2_, c1_, c2_);
}

std::vector<cdouble> NodalCR::pair(const NodalFields& nf) const {
  const std::size_t J = wedges_.size();
  std::vector<cdouble> acc(J, 0.0);
  for (std::size_t idx = 0; idx < nf.f.size(); ++idx) {
    const cdouble f = nf.f[idx];
    const cdouble s = std::conj(f) / (std::norm(f) + delta_);
    const cdouble p1 = s * nf.f1[idx], p2 = s * nf.f2[idx];
    for (std::size_t j = 0; j < J; ++j) acc[j] += p1 * wedges_[j].g1[idx] + p2 * wedges_[j].g2[idx];
  }
  for (auto& a : acc) a /= 2.0 * kPi * kI;
  return acc;
}

std::vector<cdouble> NodalCR::beta_pairing() const {
  std::vector<cdouble> out;
  for (const auto& w : wedges_) out.push_back(slope_sum(fft_.grid(), w, c1_, c2_) / (2.0 * kPi * kI));
  return out;
}

std::vector<cdouble> NodalCR::expectation() const {
  auto out = beta_pairing();
  const double b = regularization_bias(delta_ / sigma2_);
  for (auto& v : out) v *= b;
  return out;
}

NodalBoundary::NodalBoundary(const HopfFFT& fft, int radial_nodes, std::vector<AmbientPolyForm> psis, double delta_rel)
    : fft_(fft), radial_(gauss_legendre(radial_nodes, 0.0, 1.0)) {
  const auto& ens = fft.ensemble();
  if (ens.kappa() != 1) throw Error("the boundary estimator needs the kappa = 1 ensemble");
  const double sigma2 = 1.0 + ens.kernel().diag();
  delta_ = delta_rel * sigma2;
  const GaussRule unit{{1.0}, {1.0}};
  for (const auto& psi : psis) {
    if (psi.degree() != 2) throw Error("boundary pairing needs 2-forms");
    wedges_.push_back(one_form_wedge(fft.grid(), psi));
    dbar_.push_back(top_form_values(fft.grid(), psi.delbar()));
    const AmbientPolyForm dd = psi.delbar().del();
    std::vector<std::vector<cdouble>> tables;
    for (int p = 0; p <= dd.coefficient_degree(); ++p) tables.push_back(ball_form_values(fft.grid(), unit, homogeneous_part(dd, p)));
    ball_.push_back(std::move(tables));
  }
  covariance_slopes(fft, sigma2, c1_, c2_);
}

std::vector<cdouble> NodalBoundary::pair(const GaussianDraw& d, const NodalFields& s, NodalFields& scratch) const {
  const std::size_t J = wedges_.size();
  std::vector<cdouble> t1(J, 0.0), t2(J, 0.0), t3(J, 0.0);
  for (std::size_t idx = 0; idx < s.f.size(); ++idx) {
    const cdouble u = s.f[idx];
    const double n2 = std::norm(u) + delta_;
    const cdouble c = std::conj(u) / n2;
    const cdouble p1 = c * s.f1[idx], p2 = c * s.f2[idx];
    const double L = 0.5 * std::log(n2);
    for (std::size_t j = 0; j < J; ++j) {
      t1[j] += p1 * wedges_[j].g1[idx] + p2 * wedges_[j].g2[idx];
      t2[j] += L * dbar_[j][idx];
    }
  }
  std::vector<double> L(fft_.size());
  for (std::size_t k = 0; k < radial_.x.size(); ++k) {
    const double r = radial_.x[k];
    fft_.evaluate(d, r, scratch, false);
    for (std::size_t idx = 0; idx < L.size(); ++idx) L[idx] = 0.5 * std::log(std::norm(scratch.f[idx]) + delta_);
    for (std::size_t j = 0; j < J; ++j) {
      double rp = radial_.w[k] * r * r * r;
      for (const auto& table : ball_[j]) {
        cdouble acc = 0.0;
        for (std::size_t idx = 0; idx < L.size(); ++idx) acc += L[idx] * table[idx];
        t3[j] += rp * acc;
        rp *= r;
      }
    }
  }
  std::vector<cdouble> out(J);
  for (std::size_t j = 0; j < J; ++j) out[j] = (kI / kPi) * (-0.5 * t1[j] - t2[j] + t3[j]);
  return out;
}

std::vector<cdouble> NodalBoundary::expectation() const {
  const auto& K = fft_.ensemble().kernel();
  const double sigma2 = 1.0 + K.diag();
  const double bias = regularization_bias(delta_ / sigma2);
  const double Ls = 0.5 * expected_log(sigma2, delta_);
  std::vector<cdouble> out;
  for (std::size_t j = 0; j < wedges_.size(); ++j) {
    const cdouble t1 = bias * slope_sum(fft_.grid(), wedges_[j], c1_, c2_);
    const cdouble t2 = Ls * plain_sum(dbar_[j]);
    cdouble t3 = 0.0;
    for (std::size_t k = 0; k < radial_.x.size(); ++k) {
      const double r = radial_.x[k];
      CVec z = CVec::Zero(2);
      z(0) = r;
      const double Lr = 0.5 * expected_log(1.0 + K.B(z), delta_);
      double rp = radial_.w[k] * r * r * r;
      for (const auto& table : ball_[j]) {
        t3 += rp * Lr * plain_sum(table);
        rp *= r;
      }
    }
    out.push_back((kI / kPi) * (-0.5 * t1 - t2 + t3));
  }
  return out;
}

cdouble beta_pairing_quadrature(const KernelField& kernel, double kappa, const AmbientPolyForm& psi, int level) {
  if (psi.degree() != 2) throw Error("beta pairing needs a 2-form");
  const CompiledForm cf(psi);
  const QuadratureRule rule = sphere_quadrature(level, Measure::round);
  CompensatedSum<cdouble> s;
  std::vector<cdouble> alpha(3);
  for (const auto& nd : rule.nodes) {
    for (int a = 0; a < 3; ++a) alpha[a] = kernel.beta(nd.z, nd.frame[a], kappa);
    s += nd.weight * wedge_one_form(alpha, cf, nd.z, nd.frame);
  }
  return s.value();
}

cdouble contact_pairing(const AmbientPolyForm& psi, int level) {
  if (psi.degree() != 2) throw Error("contact pairing needs a 2-form");
  return form_pair(wedge(AmbientPolyForm::contact(psi.n()), psi), sphere_quadrature(level, Measure::round));
}

ReferenceValue ddbar_log_pairing(const KernelField& kernel, double c, const AmbientPolyForm& psi, int angular_level,
                                 double rel_tol) {
  if (psi.degree() != 2 || psi.n() != 1) throw Error("ddbar log pairing needs a 2-form on C^2");
  const int L = angular_level > 0 ? angular_level : psi.coefficient_degree() + 8;
  const HopfGrid g(L);
  struct Node {
    CVec x;
    std::vector<CVec> frame;
    double w;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < g.level; ++i)
    for (int a = 0; a < g.n_theta; ++a)
      for (int b = 0; b < g.n_theta; ++b) {
        const CVec x = g.point(i, a, b);
        const auto F = g.frame(i, a, b);
        nodes.push_back({x, {x, F[0], F[1], F[2]}, g.weight(i)});
      }
  const CompiledForm cf(psi);
  auto alpha = [](const Eigen::MatrixXcd& H, const CVec& v, const CVec& w) {
    cdouble s = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s += H(j, k) * (v(j) * std::conj(w(k)) - w(j) * std::conj(v(k)));
    return kI * s;
  };
  // (2,2) shuffles of four slots with their signs.
  static const int shuffles[6][5] = {{0, 1, 2, 3, 1},  {0, 2, 1, 3, -1}, {0, 3, 1, 2, 1},
                                     {1, 2, 0, 3, 1},  {1, 3, 0, 2, -1}, {2, 3, 0, 1, 1}};
  auto f = [&](double r, Eigen::VectorXcd& out) {
    CompensatedSum<cdouble> s;
    for (const auto& nd : nodes) {
      const CVec z = r * nd.x;
      const Eigen::MatrixXcd H = kernel.ddbar_log(z, c);
      cdouble v = 0.0;
      for (const auto& sh : shuffles)
        v += static_cast<double>(sh[4]) * alpha(H, nd.frame[sh[0]], nd.frame[sh[1]]) *
             cf.eval(z, {nd.frame[sh[2]], nd.frame[sh[3]]});
      s += nd.w * v;
    }
    out(0) = r * r * r * s.value();
  };
  AdaptiveOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-14;
  opt.initial_intervals = 4;
  const auto res = integrate_adaptive(f, 0.0, 1.0, 1, opt);
  return {res.value(0), res.error};
}

}  // namespace crlab
