#include "crlab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/expint.hpp>
#include <fftw3.h>

#include "crlab/geometry.hpp"

namespace crlab {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwFree>;

FftwBuffer alloc_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (!p) throw Error("FFTW allocation failed");
  return FftwBuffer(p);
}

}  // namespace

HopfGrid nodal_grid(int max_degree) {
  const int L = max_degree + 8;
  const int N = ((2 * L + 7) / 8) * 8;
  return HopfGrid(L, N);
}

HopfFFT::HopfFFT(const Ensemble& ens, HopfGrid grid) : ens_(ens), grid_(std::move(grid)) {
  if (ens.n() != 1) throw Error("grid evaluation is implemented on S^3");
  if (grid_.n_theta <= ens.max_degree()) throw Error("angular grid too coarse for the ensemble degree");
  const std::size_t T = ens.alphas().size();
  for (const auto& a : ens.alphas()) {
    e0_.push_back(a[0]);
    e1_.push_back(a[1]);
  }
  slice_.resize(grid_.level * T);
  for (int i = 0; i < grid_.level; ++i) {
    const double lu = std::log(grid_.u.x[i]), lv = std::log1p(-grid_.u.x[i]);
    for (std::size_t t = 0; t < T; ++t)
      slice_[i * T + t] = ens.scales()[t] * std::exp(0.5 * (e0_[t] * lu + e1_[t] * lv));
  }
  const int N = grid_.n_theta;
  auto buf = alloc_buffer(static_cast<std::size_t>(N) * N);
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_dft_2d(N, N, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_) throw Error("FFTW planning failed");
}

HopfFFT::~HopfFFT() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void HopfFFT::evaluate(const GaussianDraw& d, double r, NodalFields& out, bool derivatives) const {
  const int N = grid_.n_theta;
  const std::size_t NN = static_cast<std::size_t>(N) * N;
  const std::size_t T = e0_.size();
  const std::size_t off = ens_.kappa() ? 1 : 0;
  if (static_cast<std::size_t>(d.a.size()) != T + off) throw Error("draw does not match the ensemble");
  out.f.resize(size());
  if (derivatives) {
    out.f1.resize(size());
    out.f2.resize(size());
  }
  std::vector<double> rpow(ens_.max_degree() + 1, 1.0);
  for (std::size_t m = 1; m < rpow.size(); ++m) rpow[m] = rpow[m - 1] * r;

  auto b0 = alloc_buffer(NN), b1 = alloc_buffer(NN), b2 = alloc_buffer(NN);
  auto* plan = static_cast<fftw_plan>(plan_);
  auto* c0 = reinterpret_cast<cdouble*>(b0.get());
  auto* c1 = reinterpret_cast<cdouble*>(b1.get());
  auto* c2 = reinterpret_cast<cdouble*>(b2.get());
  for (int i = 0; i < grid_.level; ++i) {
    std::fill(c0, c0 + NN, cdouble(0.0));
    if (derivatives) {
      std::fill(c1, c1 + NN, cdouble(0.0));
      std::fill(c2, c2 + NN, cdouble(0.0));
    }
    if (off) c0[0] = d.a(0);
    for (std::size_t t = 0; t < T; ++t) {
      const cdouble c = d.a(static_cast<Eigen::Index>(t + off)) * (slice_[i * T + t] * rpow[e0_[t] + e1_[t]]);
      const std::size_t pos = static_cast<std::size_t>(e0_[t]) * N + e1_[t];
      c0[pos] += c;
      if (derivatives) {
        c1[pos] += kI * double(e0_[t]) * c;
        c2[pos] += kI * double(e1_[t]) * c;
      }
    }
    fftw_execute_dft(plan, b0.get(), b0.get());
    std::copy(c0, c0 + NN, out.f.begin() + i * NN);
    if (derivatives) {
      fftw_execute_dft(plan, b1.get(), b1.get());
      fftw_execute_dft(plan, b2.get(), b2.get());
      std::copy(c1, c1 + NN, out.f1.begin() + i * NN);
      std::copy(c2, c2 + NN, out.f2.begin() + i * NN);
    }
  }
}

OneFormWedge one_form_wedge(const HopfGrid& g, const AmbientPolyForm& psi) {
  if (psi.degree() != 2) throw Error("one_form_wedge needs a 2-form");
  const CompiledForm cf(psi);
  OneFormWedge out;
  out.g1.resize(g.size());
  out.g2.resize(g.size());
  std::size_t idx = 0;
  for (int i = 0; i < g.level; ++i) {
    const double u = g.u.x[i], w = g.weight(i);
    for (int a = 0; a < g.n_theta; ++a)
      for (int b = 0; b < g.n_theta; ++b, ++idx) {
        const CVec z = g.point(i, a, b);
        const auto F = g.frame(i, a, b);
        const cdouble p12 = cf.eval(z, {F[1], F[2]});
        const cdouble p02 = cf.eval(z, {F[0], F[2]});
        const cdouble p01 = cf.eval(z, {F[0], F[1]});
        // df(F0) p12 - df(F1) p02 + df(F2) p01 with df(F0) from df_du2.
        out.g1[idx] = w * (p12 / (kI * u) - p02);
        out.g2[idx] = w * (-p12 / (kI * (1.0 - u)) + p01);
      }
  }
  return out;
}

std::vector<cdouble> top_form_values(const HopfGrid& g, const AmbientPolyForm& omega) {
  if (omega.degree() != 3) throw Error("top_form_values needs a 3-form");
  const CompiledForm cf(omega);
  std::vector<cdouble> out(g.size());
  std::size_t idx = 0;
  for (int i = 0; i < g.level; ++i)
    for (int a = 0; a < g.n_theta; ++a)
      for (int b = 0; b < g.n_theta; ++b, ++idx) out[idx] = g.weight(i) * cf.eval(g.point(i, a, b), g.frame(i, a, b));
  return out;
}

std::vector<double> top_form_weights(const HopfGrid& g, const AmbientPolyForm& omega) {
  const auto v = top_form_values(g, omega);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

std::vector<cdouble> ball_form_values(const HopfGrid& g, const GaussRule& radial, const AmbientPolyForm& omega) {
  if (omega.degree() != 4) throw Error("ball_form_values needs a 4-form");
  const CompiledForm cf(omega);
  std::vector<cdouble> out(radial.x.size() * g.size());
  std::size_t idx = 0;
  for (std::size_t k = 0; k < radial.x.size(); ++k) {
    const double r = radial.x[k], wr = radial.w[k] * r * r * r;
    for (int i = 0; i < g.level; ++i)
      for (int a = 0; a < g.n_theta; ++a)
        for (int b = 0; b < g.n_theta; ++b, ++idx) {
          const CVec x = g.point(i, a, b);
          const auto F = g.frame(i, a, b);
          out[idx] = wr * g.weight(i) * cf.eval(r * x, {x, F[0], F[1], F[2]});
        }
  }
  return out;
}

double regularization_bias(double q) {
  if (q <= 0.0) return 1.0;
  // e^q E1(q) overflows nowhere for q > 0 but loses accuracy for large q;
  // the ranges used here are q << 1.
  return 1.0 - q * std::exp(q) * boost::math::expint(1, q);
}

double expected_log(double sigma2, double delta) {
  if (delta <= 0.0) return std::log(sigma2) - 0.57721566490153286061;
  const double q = delta / sigma2;
  return std::log(sigma2) + std::log(q) + std::exp(q) * boost::math::expint(1, q);
}

namespace {

// df on an orthonormal frame of T_x S^3.
void orthonormal_df(const CVec& grad, const SpherePoint& x, cdouble df[3]) {
  const auto frame = tangent_frame(x);
  for (int c = 0; c < 3; ++c) df[c] = (grad.array() * frame[c].array()).sum();
}

}  // namespace

RegularityReport regularity_filter(const HopfFFT& fft, const GaussianDraw& d, double threshold) {
  NodalFields nf;
  fft.evaluate(d, 1.0, nf);
  return regularity_filter(fft, d, nf, threshold);
}

RegularityReport regularity_filter(const HopfFFT& fft, const GaussianDraw& d, const NodalFields& nf,
                                   double threshold) {
  RegularityReport rep;
  if (d.a.norm() == 0.0) return rep;
  const Ensemble& ens = fft.ensemble();
  const HopfGrid& g = fft.grid();
  const double scale = std::sqrt(ens.kernel().moment(1));
  const double spacing = 2.0 * kPi / g.n_theta;

  struct Cand {
    double score;
    std::size_t idx;
  };
  std::vector<Cand> cands;
  double grid_margin = std::numeric_limits<double>::infinity();
  std::size_t idx = 0;
  for (int i = 0; i < g.level; ++i) {
    const double u = g.u.x[i];
    const double su = std::sqrt(u), sv = std::sqrt(1.0 - u);
    for (int a = 0; a < g.n_theta; ++a)
      for (int b = 0; b < g.n_theta; ++b, ++idx) {
        // Orthonormal frame: F0 sqrt(u(1-u)), F1 / sqrt(u), F2 / sqrt(1-u).
        cdouble df[3] = {df_du2(nf.f1[idx], nf.f2[idx], u) * su * sv, nf.f1[idx] / su, nf.f2[idx] / sv};
        const double gmax = std::sqrt(std::max({std::norm(df[0]), std::norm(df[1]), std::norm(df[2])}));
        const double af = std::sqrt(std::norm(nf.f[idx]));
        if (af > spacing * gmax) continue;
        ++rep.near_zero_nodes;
        grid_margin = std::min(grid_margin, tangential_sigma_min(df) / scale);
        cands.push_back({af / std::max(gmax, 1e-300), idx});
      }
  }
  const auto better = [](const Cand& p, const Cand& q) {
    return p.score < q.score || (p.score == q.score && p.idx < q.idx);
  };
  if (cands.size() > 4096) {
    std::nth_element(cands.begin(), cands.begin() + 4096, cands.end(), better);
    cands.resize(4096);
  }
  std::sort(cands.begin(), cands.end(), better);
  // Greedy spread-out selection so every component gets a projection.
  std::vector<CVec> seeds;
  const std::size_t N = static_cast<std::size_t>(g.n_theta);
  for (std::size_t c = 0; c < cands.size() && seeds.size() < 32; ++c) {
    const std::size_t id = cands[c].idx;
    const CVec z = g.point(static_cast<int>(id / (N * N)), static_cast<int>(id / N % N), static_cast<int>(id % N));
    bool close = false;
    for (const auto& s : seeds) close = close || (s - z).norm() < spacing;
    if (!close) seeds.push_back(z);
  }
  double margin = std::numeric_limits<double>::infinity();
  for (CVec z : seeds) {
    for (int it = 0; it < 80; ++it) {
      const SpherePoint x(z);
      const auto frame = tangent_frame(x);
      const cdouble f = ens.eval_f(d, z);
      if (std::abs(f) < 1e-30 * scale) break;
      cdouble df[3];
      orthonormal_df(ens.gradient(d, z), x, df);
      Eigen::Matrix<double, 2, 3> J;
      for (int c = 0; c < 3; ++c) {
        J(0, c) = df[c].real();
        J(1, c) = df[c].imag();
      }
      const Eigen::Vector3d step = J.completeOrthogonalDecomposition().solve(-Eigen::Vector2d(f.real(), f.imag()));
      CVec dz = CVec::Zero(2);
      for (int c = 0; c < 3; ++c) dz += step(c) * frame[c];
      z = SpherePoint(z + dz).z;
      if (step.norm() < 1e-15) break;
    }
    if (std::abs(ens.eval_f(d, z)) < 1e-8 * scale) {
      cdouble df[3];
      orthonormal_df(ens.gradient(d, z), SpherePoint(z), df);
      margin = std::min(margin, tangential_sigma_min(df) / scale);
    }
  }
  if (!std::isfinite(margin) && rep.near_zero_nodes > 0) margin = grid_margin;
  rep.margin = margin;
  rep.accept = margin > threshold;
  return rep;
}

}  // namespace crlab
