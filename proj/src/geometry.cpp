#include "crlab/geometry.hpp"

#include <cmath>

namespace crlab {

RVec to_real(const CVec& v) {
  RVec r(2 * v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    r(2 * j) = v(j).real();
    r(2 * j + 1) = v(j).imag();
  }
  return r;
}

CVec from_real(const RVec& x) {
  if (x.size() % 2 != 0) throw Error("real vector must have even length");
  CVec v(x.size() / 2);
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = {x(2 * j), x(2 * j + 1)};
  return v;
}

SpherePoint::SpherePoint(CVec v) : z(std::move(v)) {
  const double r = z.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("cannot normalize a zero vector onto the sphere");
  z /= r;
}

RVec SpherePoint::real() const { return to_real(z); }

SpherePoint SpherePoint::from_real(const RVec& x) { return SpherePoint(crlab::from_real(x)); }

BallPoint::BallPoint(CVec v) : z(std::move(v)) {
  const double r = z.norm();
  if (r > 1.0 + 1e-12) throw Error("ball point outside the closed unit ball");
  boundary = std::abs(r - 1.0) <= 1e-12;
}

TangentVector::TangentVector(SpherePoint x, CVec vec) : base(std::move(x)), v(std::move(vec)) {
  const double radial = herm(v, base.z).real();
  if (std::abs(radial) > 1e-10 * std::max(1.0, v.norm()))
    throw Error("vector is not tangent to the sphere");
}

RVec TangentVector::real() const { return to_real(v); }

TangentVector TangentVector::from_real(const SpherePoint& x, const RVec& v) {
  return TangentVector(x, crlab::from_real(v));
}

double contact_form(const SpherePoint& x, const CVec& v) { return herm(v, x.z).imag(); }

CVec reeb_field(const SpherePoint& x) { return kI * x.z; }

double dxi(const CVec& v, const CVec& w) { return -2.0 * herm(v, w).imag(); }

double levi_form(const CVec& v, const CVec& w) { return 0.5 * dxi(v, kI * w); }

double contact_volume(const SpherePoint& x, const std::vector<CVec>& vs) {
  if (vs.size() != 3 || x.n() != 1) throw Error("contact_volume is implemented for S^3 frames");
  const double a = contact_form(x, vs[0]) * dxi(vs[1], vs[2]);
  const double b = contact_form(x, vs[1]) * dxi(vs[0], vs[2]);
  const double c = contact_form(x, vs[2]) * dxi(vs[0], vs[1]);
  return 0.5 * (a - b + c);
}

std::vector<CVec> holomorphic_frame(const SpherePoint& x) {
  const Eigen::Index dim = x.z.size();
  std::vector<CVec> basis;
  for (Eigen::Index j = 0; j < dim && static_cast<Eigen::Index>(basis.size()) < dim - 1; ++j) {
    CVec e = CVec::Zero(dim);
    e(j) = 1.0;
    e -= herm(e, x.z) * x.z;
    for (const auto& b : basis) e -= herm(e, b) * b;
    const double r = e.norm();
    if (r < 1e-6) continue;
    basis.push_back(e / r);
  }
  return basis;
}

std::vector<CVec> tangent_frame(const SpherePoint& x) {
  std::vector<CVec> frame{reeb_field(x)};
  for (const auto& e : holomorphic_frame(x)) {
    frame.push_back(e);
    frame.push_back(kI * e);
  }
  return frame;
}

namespace {
cdouble complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double a = g(rng);
  const double b = g(rng);
  return {a, b};
}
}  // namespace

SpherePoint random_sphere_point(int n, std::mt19937_64& rng) {
  CVec v(n + 1);
  for (int j = 0; j <= n; ++j) v(j) = complex_gaussian(rng);
  return SpherePoint(v);
}

CVec random_tangent(const SpherePoint& x, std::mt19937_64& rng) {
  CVec v(x.z.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = complex_gaussian(rng);
  v -= herm(v, x.z).real() * x.z;
  return v;
}

CVec random_horizontal(const SpherePoint& x, std::mt19937_64& rng) {
  CVec v(x.z.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = complex_gaussian(rng);
  v -= herm(v, x.z) * x.z;
  return v;
}

BallPoint random_ball_point(int n, std::mt19937_64& rng) {
  const SpherePoint s = random_sphere_point(n, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::pow(u(rng), 1.0 / (2.0 * n + 2.0));
  return BallPoint(r * s.z);
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = complex_gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

double sphere_area(int n) {
  return 2.0 * std::pow(kPi, n + 1) / std::tgamma(n + 1.0);
}

}  // namespace crlab
