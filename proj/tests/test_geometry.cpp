#include <random>

#include "doctest.h"

#include "crlab/forms.hpp"
#include "crlab/geometry.hpp"
#include "crlab/quadrature.hpp"

using namespace crlab;

namespace {

CVec c2(cdouble a, cdouble b) {
  CVec v(2);
  v << a, b;
  return v;
}

// (1/2i) sum(conj(z) v - z conj(v)) by plain complex arithmetic.
double omega0(const CVec& z, const CVec& v) {
  cdouble s = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) s += std::conj(z(j)) * v(j) - z(j) * std::conj(v(j));
  return (s / (2.0 * kI)).real();
}

// i sum dz^dzbar on (v, w), written out through real coordinates.
double ambient_dxi(const CVec& v, const CVec& w) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += 2.0 * (v(j).real() * w(j).imag() - v(j).imag() * w(j).real());
  return s;
}

}  // namespace

TEST_CASE("contact form at the base point") {
  const SpherePoint x(c2(1.0, 0.0));
  CHECK(contact_form(x, from_real((RVec(4) << 0, 1, 0, 0).finished())) == doctest::Approx(1.0));
  CHECK(contact_form(x, from_real((RVec(4) << 0, 0, 1, 0).finished())) == doctest::Approx(0.0));
  CHECK(to_real(reeb_field(x)).isApprox((RVec(4) << 0, 1, 0, 0).finished()));
  CHECK(to_real(reeb_field(SpherePoint(c2(0.0, 1.0)))).isApprox((RVec(4) << 0, 0, 0, 1).finished()));
}

TEST_CASE("contact data matches direct evaluation at random points") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const SpherePoint x = random_sphere_point(1, rng);
    const CVec v = random_tangent(x, rng);
    const CVec w = random_tangent(x, rng);
    const CVec T = reeb_field(x);
    CHECK(contact_form(x, v) == doctest::Approx(omega0(x.z, v)).epsilon(1e-12));
    CHECK(std::abs(contact_form(x, T) - 1.0) < 1e-10);
    CHECK(std::abs(dxi(T, w)) < 1e-10);
    CHECK(dxi(v, w) == doctest::Approx(ambient_dxi(v, w)).epsilon(1e-12));
    CHECK(std::abs(dxi(v, v)) < 1e-14);
    const CVec h = random_horizontal(x, rng);
    CHECK(dxi(h, kI * h) > 0.0);
  }
}

TEST_CASE("Levi form on the standard pair is positive") {
  CHECK(dxi(c2(0.0, 1.0), c2(0.0, kI)) > 0.0);
  CHECK(levi_form(c2(0.0, 1.0), c2(0.0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("points validate their invariants") {
  const SpherePoint x(c2(3.0, 4.0 * kI));
  CHECK(std::abs(x.z.norm() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(BallPoint(c2(1.0, 1.0)), Error);
  CHECK(BallPoint(c2(1.0, 0.0)).boundary);
  CHECK_THROWS_AS(TangentVector(x, x.z), Error);
  CHECK_NOTHROW(TangentVector(x, reeb_field(x)));
}

TEST_CASE("tangent frame is orthonormal and positively oriented") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const SpherePoint x = random_sphere_point(1, rng);
    const auto f = tangent_frame(x);
    REQUIRE(f.size() == 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(std::abs(real_dot(f[a], f[b]) - (a == b)) < 1e-12);
    CHECK(contact_volume(x, f) == doctest::Approx(1.0));
  }
}

TEST_CASE("sphere quadrature masses and moments") {
  const auto round = sphere_quadrature(16, Measure::round);
  const auto contact = sphere_quadrature(16, Measure::contact);
  CHECK(std::abs(round.total() - 2.0 * kPi * kPi) < 1e-12);
  // Contact mass through the density ratio applied on the round rule.
  CompensatedSum<double> cross;
  for (const auto& nd : round.nodes) {
    const SpherePoint x(nd.z);
    cross += nd.weight * contact_volume(x, tangent_frame(x));
  }
  CHECK(std::abs(contact.total() - cross.value()) < 1e-12);
  CompensatedSum<double> m;
  for (const auto& nd : round.nodes) m += nd.weight * std::norm(nd.z(0));
  CHECK(std::abs(m.value() - kPi * kPi) < 1e-10);
  for (const auto& nd : contact.nodes) CHECK(nd.weight > 0.0);
  CHECK_THROWS_AS(sphere_quadrature(3), Error);
}

TEST_CASE("sphere quadrature converges until the floor") {
  auto err = [](int level) {
    const auto r = sphere_quadrature(level, Measure::round);
    CompensatedSum<double> s;
    for (const auto& nd : r.nodes) s += nd.weight * std::norm(nd.z(0)) * std::pow(std::norm(nd.z(1)), 2);
    return std::abs(s.value() - kPi * kPi / 6.0);
  };
  // |z1|^2 |z2|^4 is degree 3 in u, so the rule is exact from 2 nodes on.
  double prev = err(4);
  CHECK(prev < 1e-12);
  for (int level : {8, 16}) CHECK(err(level) < std::max(prev / 100.0, 1e-12));
}

TEST_CASE("rough integrand converges geometrically") {
  // exp(Re z1) is not a polynomial in u; doubling the level must gain 1e2.
  auto val = [](int level) {
    const auto r = sphere_quadrature(level, Measure::round);
    CompensatedSum<double> s;
    for (const auto& nd : r.nodes) s += nd.weight * std::exp(3.0 * nd.z(0).real() * nd.z(1).imag());
    return s.value();
  };
  const double ref = val(48);
  const double e4 = std::abs(val(4) - ref), e8 = std::abs(val(8) - ref), e16 = std::abs(val(16) - ref);
  CHECK(e8 <= std::max(e4 / 100.0, 1e-12));
  CHECK(e16 <= std::max(e8 / 100.0, 1e-12));
}

TEST_CASE("quadrature is unitarily invariant") {
  std::mt19937_64 rng(3);
  const auto r = sphere_quadrature(20, Measure::round);
  Polynomial p = Polynomial::abs2(1, 0) * Polynomial::abs2(1, 0) * Polynomial::z(1, 1) * Polynomial::zbar(1, 1) +
                 Polynomial::x(1, 0) * Polynomial::x(1, 0) * Polynomial::y(1, 1) * Polynomial::y(1, 1);
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXcd U = random_unitary(2, rng);
    CompensatedSum<cdouble> a, b;
    for (const auto& nd : r.nodes) {
      a += nd.weight * p.eval(nd.z);
      b += nd.weight * p.eval(U * nd.z);
    }
    CHECK(std::abs(a.value() - b.value()) < 1e-10);
  }
}

TEST_CASE("ball, circle and disc rules") {
  CHECK(std::abs(ball_quadrature(16).total() - kPi * kPi / 2.0) < 1e-10);
  CHECK(std::abs(circle_quadrature(c2(0.0, 0.0), c2(0.0, 1.0), 1.0, 8).total() - 2.0 * kPi) < 1e-12);
  CHECK(std::abs(disc_quadrature(c2(0.5, 0.0), c2(0.0, 1.0), std::sqrt(0.75), 8).total() - 0.75 * kPi) < 1e-10);
  CHECK_THROWS_AS(ball_quadrature(1), Error);
  CHECK_THROWS_AS(circle_quadrature(c2(0.0, 0.0), c2(0.0, 1.0), 1.0, 1), Error);
}

TEST_CASE("forms: d squares to zero and types split") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    AmbientPolyForm psi(1, 1);
    for (int term = 0; term < 4; ++term) {
      Polynomial c(1);
      std::vector<int> e(4);
      for (auto& x : e) x = pick(rng);
      c.add_term(e, {g(rng), g(rng)});
      psi.add_term({pick(rng)}, c);
    }
    CHECK(psi.d().d().is_zero());
    const auto diff = psi.d() - psi.del() - psi.delbar();
    CHECK(diff.is_zero());
    CHECK((psi.del().del()).is_zero());
  }
  CHECK((Polynomial::z(1, 0) * AmbientPolyForm::dz(1, 1)).delbar().is_zero());
  CHECK((Polynomial::zbar(1, 0) * AmbientPolyForm::dzbar(1, 1)).del().is_zero());
}

TEST_CASE("forms: contact volume integrates to the contact mass") {
  const auto xi = AmbientPolyForm::contact(1);
  const auto vol = cdouble(0.5) * wedge(xi, xi.d());
  const auto r = sphere_quadrature(16, Measure::contact);
  CHECK(std::abs(form_pair(vol, r) - r.total()) < 1e-12);
  CHECK_THROWS_AS(form_pair(xi, r), Error);
}

TEST_CASE("forms: pullback of the angle form on the circle") {
  // x3 dx4 - x4 dx3 restricted to {(0, e^{it})} is dt.
  const auto psi = Polynomial::x(1, 1) * AmbientPolyForm::dy(1, 1) - Polynomial::y(1, 1) * AmbientPolyForm::dx(1, 1);
  const auto c = circle_quadrature(c2(0.0, 0.0), c2(0.0, 1.0), 1.0, 8);
  CHECK(std::abs(form_pair(psi, c) - 2.0 * kPi) < 1e-12);
}

TEST_CASE("forms: wedge is graded commutative") {
  const auto a = AmbientPolyForm::dx(1, 0);
  const auto b = Polynomial::abs2(1, 1) * AmbientPolyForm::dy(1, 1);
  CHECK((wedge(a, b) + wedge(b, a)).is_zero());
  CHECK(wedge(a, a).is_zero());
}
