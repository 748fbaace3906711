#include <memory>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "crlab/cutoff.hpp"
#include "crlab/embedding.hpp"
#include "crlab/ensemble.hpp"
#include "crlab/geometry.hpp"

using namespace crlab;

namespace {

std::shared_ptr<const SpectralBasis> basis() {
  static auto b = std::make_shared<const SpectralBasis>(1, 200);
  return b;
}

Embedding make(double k, int kappa = 0) {
  EmbeddingConfig cfg;
  cfg.k = k;
  cfg.kappa = kappa;
  return Embedding(cfg, basis());
}

}  // namespace

TEST_CASE("F_k norms, pairing and equivariance") {
  std::mt19937_64 rng(1);
  for (int kappa : {0, 1}) {
    const Embedding e = make(32, kappa);
    for (int t = 0; t < 20; ++t) {
      const SpherePoint x = random_sphere_point(1, rng), y = random_sphere_point(1, rng);
      const CVec F = e.F(x.z), G = e.F(y.z);
      CHECK(F.squaredNorm() == doctest::Approx(kappa + e.kernel().diag()).epsilon(1e-12));
      CHECK(std::abs(herm(F, G) - (double(kappa) + e.kernel().kernel(x.z, y.z))) < 1e-12 * F.squaredNorm());
      const double th = 0.3 + t;
      const CVec Fr = e.F(std::polar(1.0, th) * x.z);
      const auto wts = e.weights();
      for (Eigen::Index j = 0; j < F.size(); ++j)
        CHECK(std::abs(Fr(j) - std::polar(1.0, wts[j] * th) * F(j)) < 1e-12 * (1.0 + std::abs(F(j))));
    }
  }
}

TEST_CASE("h is a normalized symmetric overlap") {
  std::mt19937_64 rng(2);
  for (int kappa : {0, 1}) {
    const Embedding e = make(40, kappa);
    for (int t = 0; t < 200; ++t) {
      const SpherePoint x = random_sphere_point(1, rng), y = random_sphere_point(1, rng);
      const double h = e.h(x.z, y.z);
      CHECK(h >= 0.0);
      CHECK(h <= 1.0 + 1e-14);
      CHECK(h == doctest::Approx(e.h(y.z, x.z)).epsilon(1e-12));
      CHECK(e.h(x.z, x.z) == doctest::Approx(1.0).epsilon(1e-14));
      const cdouble ph = std::polar(1.0, 0.1 * t);
      CHECK(std::abs(e.h(ph * x.z, ph * y.z) - h) < 1e-12);
      CHECK(e.fs_distance(x.z, x.z) < 1e-7);
    }
    const CVec a = (CVec(2) << 1.0, 0.0).finished(), b = (CVec(2) << 0.0, 1.0).finished();
    const double N = e.norm2();
    CHECK(e.h(a, b) == doctest::Approx(kappa / (N * N)).epsilon(1e-12));
  }
}

// The second derivative of g_y at its maximum is twice the displayed H^F form.
TEST_CASE("H^F is half the Hessian of h at the diagonal") {
  const Embedding e = make(64);
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const SpherePoint x = random_sphere_point(1, rng);
    const auto f = tangent_frame(x);
    const Eigen::MatrixXd H = e.hessian_matrix(x.z, f);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * H.cwiseAbs().maxCoeff());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double s = 2e-4 / 64;
        const double fd = hessian_fd(e, x.z, f[i], f[j], s);
        worst = std::max(worst, std::abs(fd - 2.0 * H(i, j)) / (2.0 * H.cwiseAbs().maxCoeff()));
      }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("FS pullback real part is minus H^F") {
  const Embedding e = make(48, 1);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const SpherePoint x = random_sphere_point(1, rng);
    const CVec v = random_tangent(x, rng), w = random_tangent(x, rng);
    CHECK(std::abs(e.fs_pullback(x.z, v, v).real() + e.H(x.z, v, v)) <= 1e-10 * std::abs(e.H(x.z, v, v)));
    CHECK(std::abs(e.fs_pullback(x.z, v, w).real() + e.H(x.z, v, w)) <= 1e-10 * std::abs(e.H(x.z, v, v)) + 1e-10);
    CHECK(e.H(x.z, v, w) == doctest::Approx(e.H(x.z, w, v)).epsilon(1e-12));
  }
}

TEST_CASE("H^F is negative definite and S1 invariant") {
  std::mt19937_64 rng(5);
  for (double k : {64.0, 128.0}) {
    const Embedding e = make(k);
    for (int t = 0; t < 100; ++t) {
      const SpherePoint x = random_sphere_point(1, rng);
      const Eigen::MatrixXd H = e.hessian_matrix(x.z, tangent_frame(x));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
      CHECK(es.eigenvalues().maxCoeff() < 0.0);
      const SpherePoint xr(std::polar(1.0, 0.7) * x.z);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(e.hessian_matrix(xr.z, tangent_frame(xr)));
      CHECK((es.eigenvalues() - er.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("rescaled Hessian converges") {
  // Scale T by 1/k and horizontal directions by 1/sqrt(k).
  CutoffSpec c;
  const auto eta = eta_profile(c);
  const double mv = mean_value(eta, 1), var = variance(eta, 1);
  Eigen::Matrix3d limit = Eigen::Matrix3d::Zero();
  limit(0, 0) = -var;
  limit(1, 1) = limit(2, 2) = -mv;
  const SpherePoint x((CVec(2) << 0.6, 0.8 * kI).finished());
  double prev = -1.0;
  for (double k : {32.0, 64.0, 128.0}) {
    const Embedding e = make(k);
    auto f = tangent_frame(x);
    f[0] /= k;
    f[1] /= std::sqrt(k);
    f[2] /= std::sqrt(k);
    const double dev = (e.hessian_matrix(x.z, f) - limit).cwiseAbs().maxCoeff();
    if (prev > 0) CHECK(dev <= 0.8 * prev);
    prev = dev;
  }
}

TEST_CASE("separation scan") {
  const Embedding e = make(64);
  const auto rep = separation_scan(e, 2000, 0.5, 17);
  CHECK(rep.max_h <= 0.5);
  const Embedding e2 = make(128);
  const auto rep2 = separation_scan(e2, 500, 1e-3, 18);
  CHECK(rep2.max_h_distinct < 1.0);
  CHECK(local_quadratic_constant(e, 500, 0.05, 19) > 0.0);
}

TEST_CASE("ensemble sampling is deterministic and standard") {
  EnsembleConfig cfg;
  cfg.k = 8;
  const Ensemble ens(cfg, basis());
  CHECK(ens.sample(5).a == ens.sample(5).a);
  CHECK(ens.sample(5).a != ens.sample(6).a);
  const int N = 100000;
  cdouble mean = 0.0;
  double second = 0.0;
  for (int i = 0; i < N; ++i) {
    const cdouble a = ens.sample(i).a(0);
    mean += a;
    second += std::norm(a);
  }
  mean /= N;
  second /= N;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(N));
  CHECK(std::abs(second - 1.0) < 4.0 * std::sqrt(2.0 / N));
}

TEST_CASE("unit draws reproduce single basis functions") {
  EnsembleConfig cfg;
  cfg.k = 16;
  const Ensemble ens(cfg, basis());
  std::mt19937_64 rng(6);
  const SpherePoint x = random_sphere_point(1, rng);
  for (std::size_t j = 0; j < ens.size(); j += 7) {
    CVec a = CVec::Zero(ens.size());
    a(j) = 1.0;
    const auto& al = ens.alphas()[j];
    const double chi = cfg.cutoff.chi(degree(al) / cfg.k);
    CHECK(std::abs(ens.eval_f(ens.manual(a), x.z) - chi * basis()->eval_normalized(al, x.z)) < 1e-13);
  }
}

TEST_CASE("gradient matches finite differences") {
  for (int kappa : {0, 1}) {
    EnsembleConfig cfg;
    cfg.k = 20;
    cfg.kappa = kappa;
    const Ensemble ens(cfg, basis());
    std::mt19937_64 rng(7);
    const auto d = ens.sample(3);
    const BallPoint z = random_ball_point(1, rng);
    const CVec g = ens.gradient(d, z.z);
    for (int j = 0; j < 2; ++j) {
      CVec e = CVec::Zero(2);
      e(j) = 1e-6;
      const cdouble fd = (ens.eval_f(d, z.z + e) - ens.eval_f(d, z.z - e)) / 2e-6;
      CHECK(std::abs(fd - g(j)) < 1e-6 * (1.0 + std::abs(g(j))));
    }
    const CVec v = random_tangent(SpherePoint(z.z), rng);
    CHECK(std::abs(ens.eval_df(d, z.z, v) - (g.array() * v.array()).sum()) < 1e-12 * (1.0 + g.norm()));
  }
}

TEST_CASE("covariance identity") {
  std::mt19937_64 rng(8);
  for (int kappa : {0, 1}) {
    EnsembleConfig cfg;
    cfg.k = 16;
    cfg.kappa = kappa;
    const Ensemble ens(cfg, basis());
    const SpherePoint x = random_sphere_point(1, rng);
    const SpherePoint y(x.z + 0.3 * random_tangent(x, rng));
    const int N = 10000;
    std::vector<cdouble> prod(N);
    cdouble mean = 0.0;
    for (int i = 0; i < N; ++i) {
      const auto d = ens.sample(i);
      prod[i] = ens.eval_f(d, x.z) * std::conj(ens.eval_f(d, y.z));
      mean += prod[i];
    }
    mean /= N;
    double var_re = 0.0, var_im = 0.0;
    for (const auto& p : prod) {
      var_re += std::pow(p.real() - mean.real(), 2);
      var_im += std::pow(p.imag() - mean.imag(), 2);
    }
    const double se_re = std::sqrt(var_re / (N - 1) / N), se_im = std::sqrt(var_im / (N - 1) / N);
    const cdouble ref = double(kappa) + ens.kernel().kernel(x.z, y.z);
    CHECK(std::abs(mean.real() - ref.real()) <= 4 * se_re);
    CHECK(std::abs(mean.imag() - ref.imag()) <= 4 * se_im);
  }
}

TEST_CASE("modulus distribution is rotation invariant") {
  EnsembleConfig cfg;
  cfg.k = 16;
  const Ensemble ens(cfg, basis());
  const SpherePoint x((CVec(2) << 0.6, 0.8).finished());
  const CVec xr = std::polar(1.0, 1.1) * x.z;
  const int N = 4000;
  std::vector<double> a(N), b(N);
  for (int i = 0; i < N; ++i) {
    a[i] = std::abs(ens.eval_f(ens.sample(i), x.z));
    b[i] = std::abs(ens.eval_f(ens.sample(N + i), xr));
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double D = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    D = std::max(D, std::abs(double(i) - double(j)) / N);
  }
  // Two-sample Kolmogorov-Smirnov at the 1% level.
  CHECK(D < 1.63 * std::sqrt(2.0 / N));
}
