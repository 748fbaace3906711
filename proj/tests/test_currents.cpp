#include <cmath>
#include <random>

#include "doctest.h"

#include "crlab/currents.hpp"
#include "crlab/geometry.hpp"
#include "crlab/quadrature.hpp"

using namespace crlab;

namespace {

CVec vec2(cdouble a, cdouble b) {
  CVec v(2);
  v << a, b;
  return v;
}

double tolerance(const PairingResult& reg, const PairingResult& direct) {
  return std::max({0.01 * std::abs(direct.value), 3.0 * reg.err_est, 1e-8});
}

}  // namespace

TEST_CASE("affine catalog geometry") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& name : catalog_names()) {
    const auto f = catalog_function(name);
    CHECK(f->name() == name);
    const auto* a = dynamic_cast<const AffineFunction*>(f.get());
    if (!a) continue;
    const Eigen::MatrixXcd U = a->unitary();
    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
    const CVec w = vec2({g(rng), g(rng)}, {g(rng), g(rng)});
    CHECK(std::abs(a->value(U * w) - (a->a().norm() * w(0) + a->b())) < 1e-13);
    if (a->radius() > 0) {
      for (double t : {0.0, 1.0, 2.5}) {
        const CVec z = a->foot() + a->radius() * std::polar(1.0, t) * a->direction();
        CHECK(std::abs(a->value(z)) < 1e-14);
        CHECK(z.norm() == doctest::Approx(1.0));
      }
    }
    CHECK(std::abs(a->polynomial().eval(w) - a->value(w)) < 1e-13);
  }
  CHECK(catalog_function("2+z1")->name() == "2+z1");
  CHECK(dynamic_cast<const AffineFunction&>(*catalog_function("2+z1")).radius() < 0);
  CHECK_THROWS_AS(catalog_function("sin(z1)"), Error);
}

TEST_CASE("product functions") {
  const auto f = catalog_function("(z1-1/2)*(z2+i/3)");
  const CVec z = vec2({0.2, 0.1}, {-0.3, 0.4});
  const cdouble expect = (z(0) - 0.5) * (z(1) + kI / 3.0);
  CHECK(std::abs(f->value(z) - expect) < 1e-15);
  CHECK(std::abs(f->polynomial().eval(z) - expect) < 1e-15);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    CVec zp = z, zm = z;
    zp(j) += h;
    zm(j) -= h;
    CHECK(std::abs((f->value(zp) - f->value(zm)) / (2 * h) - f->gradient(z)(j)) < 1e-8);
  }
}

TEST_CASE("linear pullback of forms") {
  const auto f = catalog_function("z1+iz2-1/2");
  const Eigen::MatrixXcd U = dynamic_cast<const AffineFunction&>(*f).unitary();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& id : form_names()) {
    const AmbientPolyForm psi = named_form(id);
    const AmbientPolyForm pb = pullback_linear(psi, U);
    CHECK(pb.degree() == psi.degree());
    const CVec w = vec2({g(rng), g(rng)}, {g(rng), g(rng)});
    std::vector<CVec> vs, uvs;
    for (int k = 0; k < psi.degree(); ++k) {
      vs.push_back(vec2({g(rng), g(rng)}, {g(rng), g(rng)}));
      uvs.push_back(U * vs.back());
    }
    CHECK(std::abs(pb.eval(w, vs) - psi.eval(U * w, uvs)) < 1e-11);
  }
}

TEST_CASE("adaptive Gauss-Kronrod") {
  auto f = [](double x, Eigen::VectorXcd& out) {
    out(0) = std::sqrt(x);
    out(1) = 1e-3 / (std::pow(x - 0.3, 2) + 1e-6);
    out(2) = std::polar(1.0, 5 * x);
  };
  const auto r = integrate_adaptive(f, 0.0, 1.0, 3);
  CHECK(r.converged);
  CHECK(std::abs(r.value(0) - 2.0 / 3.0) < 1e-10);
  const double peak = 1e-3 / 1e-3 * (std::atan(0.7 / 1e-3) + std::atan(0.3 / 1e-3));
  CHECK(std::abs(r.value(1) - peak) < 1e-9);
  CHECK(std::abs(r.value(2) - (std::polar(1.0, 5.0) - 1.0) / (5.0 * kI)) < 1e-12);
  CHECK(r.error < 1e-9);
}

TEST_CASE("Richardson extrapolation in sqrt(delta)") {
  std::vector<double> d{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<cdouble> v;
  for (double x : d) v.push_back(cdouble(2.0, 1.0) + 3.0 * std::sqrt(x) - 4.0 * x);
  const auto e = richardson_sqrt(d, v);
  CHECK(std::abs(e.value - cdouble(2.0, 1.0)) < 1e-12);
  // The linear fit misses the delta term by 4 sqrt(d1 d2).
  CHECK(e.error == doctest::Approx(4.0 * std::sqrt(1e-5 * 1e-6)).epsilon(1e-6));
}

TEST_CASE("closed pairing on S^3: circle oracle") {
  const auto z1 = catalog_function("z1");
  const auto r = divisor_pairing_closed(*z1, named_form("dtheta2"), "dtheta2");
  CHECK(std::abs(r.value - 2.0 * kPi) < 0.01 * 2.0 * kPi);
  CHECK(std::abs(r.value - 2.0 * kPi) < 3.0 * r.err_est);
  CHECK(r.monotone);
  const auto d = zero_set_direct(*z1, named_form("dtheta2"), "dtheta2");
  CHECK(std::abs(d.value - 2.0 * kPi) < 1e-12);

  const auto z2 = catalog_function("z2");
  const auto s = divisor_pairing_closed(*z2, named_form("dtheta1"), "dtheta1");
  CHECK(std::abs(s.value - 2.0 * kPi) < 0.01 * 2.0 * kPi);
}

TEST_CASE("closed pairing vanishes on exact forms and for nonvanishing f") {
  for (const auto& name : {"z1", "z1+iz2-1/2", "z1*z2"}) {
    const auto f = catalog_function(name);
    const auto r = divisor_pairing_closed(*f, named_form("exact1"), "exact1");
    CHECK(std::abs(r.value) <= std::max(3.0 * r.err_est, 1e-10));
  }
  const auto g = catalog_function("2+z1");
  for (const auto& id : {"poly1", "dtheta1", "contact"}) {
    const auto r = divisor_pairing_closed(*g, named_form(id), id);
    CHECK(std::abs(r.value) <= std::max(3.0 * r.err_est, 1e-10));
  }
}

TEST_CASE("C_f is invariant under constant rescaling") {
  const AffineFunction f(vec2(1.0, 0.5), cdouble(0.2, -0.1), "f");
  const cdouble c(-1.5, 2.0);
  const AffineFunction cf(c * f.a(), c * f.b(), "cf");
  for (const auto& id : {"mixed2", "weighted11"}) {
    const auto a = current_cf(f, named_form(id), id);
    const auto b = current_cf(cf, named_form(id), id);
    CHECK(std::abs(a.value - b.value) < 1e-9);
  }
}

TEST_CASE("closed pairing matches the zero-set integral across the catalog") {
  for (const auto& name : catalog_names()) {
    const auto f = catalog_function(name);
    for (const auto& id : {"dtheta1", "dtheta2", "poly1", "contact"}) {
      CAPTURE(name);
      CAPTURE(id);
      const auto r = divisor_pairing_closed(*f, named_form(id), id);
      const auto d = zero_set_direct(*f, named_form(id), id);
      CHECK(std::abs(r.value - d.value) <= tolerance(r, d));
    }
  }
}

TEST_CASE("boundary pairing on the ball: disc oracles") {
  const auto u = catalog_function("z1-1/2");
  const auto r = divisor_pairing_boundary(*u, named_form("area2"), "area2");
  CHECK(std::abs(r.value - 0.75 * kPi) < 0.01 * 0.75 * kPi);
  CHECK(r.monotone);

  const auto c = catalog_function("z1-(0.3+0.4i)");
  const auto s = divisor_pairing_boundary(*c, named_form("area2"), "area2");
  CHECK(std::abs(s.value - kPi * 0.75) < 0.01 * kPi * 0.75);
  CHECK(std::abs(zero_set_direct(*c, named_form("area2"), "area2").value - kPi * 0.75) < 1e-12);

  // No zeros on the closed ball.
  const auto g = catalog_function("2+z1");
  for (const auto& id : {"area2", "weighted11", "cross11"}) {
    const auto t = divisor_pairing_boundary(*g, named_form(id), id);
    CHECK(std::abs(t.value) <= std::max(3.0 * t.err_est, 1e-8));
  }
  // psi ^ du = 0.
  const auto t = divisor_pairing_boundary(*u, named_form("area1"), "area1");
  CHECK(std::abs(t.value) < 1e-10);
}

TEST_CASE("boundary pairing matches the zero-set integral across the catalog") {
  for (const auto& name : catalog_names()) {
    const auto f = catalog_function(name);
    for (const auto& id : {"area1", "area2", "weighted11", "vanish11", "cross11"}) {
      CAPTURE(name);
      CAPTURE(id);
      const auto r = divisor_pairing_boundary(*f, named_form(id), id);
      const auto d = zero_set_direct(*f, named_form(id), id);
      CHECK(std::abs(r.value - d.value) <= tolerance(r, d));
      CHECK(r.monotone);
    }
  }
}

TEST_CASE("products pair as the sum of their factors") {
  const auto p = catalog_function("z1*z2");
  const auto a = catalog_function("z1"), b = catalog_function("z2");
  const auto psi = named_form("weighted11");
  const auto rp = divisor_pairing_boundary(*p, psi, "weighted11");
  const auto ra = divisor_pairing_boundary(*a, psi, "weighted11");
  const auto rb = divisor_pairing_boundary(*b, psi, "weighted11");
  CHECK(std::abs(rp.value - ra.value - rb.value) < 1e-12);
  const auto dp = zero_set_direct(*p, psi, "weighted11");
  CHECK(std::abs(dp.value - zero_set_direct(*a, psi, "").value - zero_set_direct(*b, psi, "").value) < 1e-12);
}

TEST_CASE("pairings are linear in the test form") {
  const auto f = catalog_function("z1+iz2-1/2");
  const cdouble c(0.7, -1.3);
  const auto p1 = named_form("weighted11"), p2 = named_form("cross11");
  const auto lhs = divisor_pairing_boundary(*f, p1 + c * p2, "combo");
  const auto a = divisor_pairing_boundary(*f, p1, "weighted11");
  const auto b = divisor_pairing_boundary(*f, p2, "cross11");
  CHECK(std::abs(lhs.value - a.value - c * b.value) < 1e-8);

  const auto q1 = named_form("poly1"), q2 = named_form("dtheta1");
  const auto l2 = divisor_pairing_closed(*f, q1 + c * q2, "combo");
  const auto a2 = divisor_pairing_closed(*f, q1, "poly1");
  const auto b2 = divisor_pairing_closed(*f, q2, "dtheta1");
  CHECK(std::abs(l2.value - a2.value - c * b2.value) < 1e-8);
}

TEST_CASE("pairing records and error paths") {
  const auto f = catalog_function("z1");
  const auto r = divisor_pairing_closed(*f, named_form("dtheta2"), "dtheta2");
  const auto j = to_json(r);
  CHECK(j.at("function") == "z1");
  CHECK(j.at("psi_id") == "dtheta2");
  CHECK(j.at("method") == "regularized");
  CHECK(j.at("value_re").get<double>() == doctest::Approx(r.value.real()));
  CHECK(j.at("value_im").get<double>() == doctest::Approx(r.value.imag()));
  CHECK(j.at("err_est").get<double>() == doctest::Approx(r.err_est));

  CHECK_THROWS_AS(divisor_pairing_closed(*f, named_form("area2"), "area2"), Error);
  CHECK_THROWS_AS(current_cf(*f, named_form("poly1"), "poly1"), Error);
  CHECK_THROWS_AS(divisor_pairing_boundary(*f, named_form("mixed2"), "mixed2"), Error);
  const AffineFunction tangent(vec2(1.0, 0.0), -1.0, "z1-1");
  CHECK_THROWS_AS(divisor_pairing_boundary(tangent, named_form("area2"), "area2"), Error);
  CHECK_THROWS_AS(named_form("nope"), Error);
}

TEST_CASE("horizontal test form annihilates the Reeb field") {
  const AmbientPolyForm psi = named_form("horizontal1");
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const SpherePoint x = random_sphere_point(1, rng);
    CHECK(std::abs(psi.eval(x.z, {reeb_field(x)})) < 1e-14);
    CHECK(std::abs(psi.eval(x.z, {random_horizontal(x, rng)})) > 1e-8);
  }
}
