#include "crlab/currents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "crlab/quadrature.hpp"

namespace crlab {

AffineFunction::AffineFunction(CVec a, cdouble b, std::string name)
    : a_(std::move(a)), b_(b), name_(std::move(name)) {
  if (a_.size() != 2) throw Error("catalog functions live on C^2");
  if (a_.norm() == 0.0) throw Error("affine function with a = 0 has no zero set");
}

Polynomial AffineFunction::polynomial() const {
  Polynomial p = Polynomial::constant(1, b_);
  for (int j = 0; j < 2; ++j) p += a_(j) * Polynomial::z(1, j);
  return p;
}

Eigen::MatrixXcd AffineFunction::unitary() const {
  const double r = a_.norm();
  Eigen::MatrixXcd U(2, 2);
  U << std::conj(a_(0)) / r, -a_(1) / r, std::conj(a_(1)) / r, a_(0) / r;
  return U;
}

CVec AffineFunction::foot() const { return -b_ * a_.conjugate() / a_.squaredNorm(); }

CVec AffineFunction::direction() const {
  CVec e(2);
  e << a_(1), -a_(0);
  return e / a_.norm();
}

double AffineFunction::radius() const {
  const double s = 1.0 - foot().squaredNorm();
  return s >= 0.0 ? std::sqrt(s) : -1.0;
}

ProductFunction::ProductFunction(std::vector<AffineFunction> factors, std::string name)
    : factors_(std::move(factors)), name_(std::move(name)) {
  if (factors_.empty()) throw Error("empty product");
}

cdouble ProductFunction::value(const CVec& z) const {
  cdouble v = 1.0;
  for (const auto& f : factors_) v *= f.value(z);
  return v;
}

CVec ProductFunction::gradient(const CVec& z) const {
  CVec g = CVec::Zero(2);
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    cdouble rest = 1.0;
    for (std::size_t j = 0; j < factors_.size(); ++j)
      if (j != i) rest *= factors_[j].value(z);
    g += rest * factors_[i].a();
  }
  return g;
}

Polynomial ProductFunction::polynomial() const {
  Polynomial p = Polynomial::constant(1, 1.0);
  for (const auto& f : factors_) p = p * f.polynomial();
  return p;
}

namespace {

AffineFunction affine(cdouble a0, cdouble a1, cdouble b, const std::string& name) {
  CVec a(2);
  a << a0, a1;
  return AffineFunction(a, b, name);
}

using Maker = std::function<std::unique_ptr<HolomorphicFunction>()>;

const std::map<std::string, Maker>& registry() {
  static const std::map<std::string, Maker> r = [] {
    std::map<std::string, Maker> m;
    auto add_affine = [&](const std::string& name, cdouble a0, cdouble a1, cdouble b) {
      m[name] = [=] { return std::make_unique<AffineFunction>(affine(a0, a1, b, name)); };
    };
    add_affine("z1", 1.0, 0.0, 0.0);
    add_affine("z2", 0.0, 1.0, 0.0);
    add_affine("z1-1/2", 1.0, 0.0, -0.5);
    add_affine("z1-(0.3+0.4i)", 1.0, 0.0, cdouble(-0.3, -0.4));
    add_affine("2+z1", 1.0, 0.0, 2.0);
    add_affine("z1+z2", 1.0, 1.0, 0.0);
    add_affine("z1+iz2-1/2", 1.0, kI, -0.5);
    m["z1*z2"] = [] {
      return std::make_unique<ProductFunction>(
          std::vector<AffineFunction>{affine(1.0, 0.0, 0.0, "z1"), affine(0.0, 1.0, 0.0, "z2")}, "z1*z2");
    };
    m["(z1-1/2)*(z2+i/3)"] = [] {
      return std::make_unique<ProductFunction>(
          std::vector<AffineFunction>{affine(1.0, 0.0, -0.5, "z1-1/2"), affine(0.0, 1.0, kI / 3.0, "z2+i/3")},
          "(z1-1/2)*(z2+i/3)");
    };
    return m;
  }();
  return r;
}

using Form = AmbientPolyForm;

Form form_registry(const std::string& id) {
  const int n = 1;
  const auto X = [](int j) { return Polynomial::x(1, j); };
  const auto Y = [](int j) { return Polynomial::y(1, j); };
  const auto dx = [](int j) { return Form::dx(1, j); };
  const auto dy = [](int j) { return Form::dy(1, j); };
  const auto dz = [](int j) { return Form::dz(1, j); };
  const auto dzb = [](int j) { return Form::dzbar(1, j); };
  const cdouble h(0.0, 0.5);
  if (id == "dtheta1") return X(0) * dy(0) - Y(0) * dx(0);
  if (id == "dtheta2") return X(1) * dy(1) - Y(1) * dx(1);
  if (id == "poly1") return (X(0) * X(0)) * dx(1) + (Y(0) * Y(1)) * dx(0) - X(1) * dy(1);
  if (id == "exact1") return Form::function(X(0) * X(0) * X(1) + Y(0) * Y(1) * Y(1)).d();
  if (id == "contact") return Form::contact(n);
  if (id == "area1") return h * wedge(dz(0), dzb(0));
  if (id == "area2") return h * wedge(dz(1), dzb(1));
  if (id == "mixed2") return X(0) * wedge(dy(0), dx(1)) + Y(1) * wedge(dx(0), dx(1));
  if (id == "weighted11") {
    const Polynomial one = Polynomial::constant(n, 1.0);
    return h * ((one + Polynomial::abs2(n, 0)) * wedge(dz(1), dzb(1)) +
                (Polynomial::zbar(n, 0) * Polynomial::z(n, 1)) * wedge(dz(0), dzb(1)) +
                (Polynomial::z(n, 0) * Polynomial::zbar(n, 1)) * wedge(dz(1), dzb(0)));
  }
  if (id == "vanish11") {
    const Polynomial g = Polynomial::constant(n, 1.0) - Polynomial::abs2(n, 0) - Polynomial::abs2(n, 1);
    return g * (h * wedge(dz(1), dzb(1)));
  }
  if (id == "vanish33") {
    const Polynomial g = Polynomial::constant(n, 1.0) - Polynomial::abs2(n, 0) - Polynomial::abs2(n, 1);
    return (g * g * g) * (h * wedge(dz(1), dzb(1)));
  }
  if (id == "cross11") return h * wedge(dz(0), dzb(1));
  // Re(z0 dz1 - z1 dz0): annihilates the Reeb field.
  if (id == "horizontal1") return X(0) * dx(1) - Y(0) * dy(1) - X(1) * dx(0) + Y(1) * dy(0);
  if (id == "holo20") return wedge(dz(0), dz(1));
  throw Error("unknown test form: " + id);
}

const std::vector<std::string> kFormIds{"dtheta1", "dtheta2", "poly1",      "exact1",   "contact", "area1",
                                        "area2",   "mixed2",  "weighted11", "vanish11", "vanish33", "cross11", "horizontal1", "holo20"};

// Hopf frame (2 d/du, d/dtheta_0, d/dtheta_1) at (sqrt(u) e^{i t0}, sqrt(1-u) e^{i t1}).
void hopf_frame(double u, cdouble e0, cdouble e1, CVec& w, std::vector<CVec>& F) {
  const double su = std::sqrt(u), sv = std::sqrt(1.0 - u);
  w.resize(2);
  w << su * e0, sv * e1;
  F.resize(3);
  F[0].resize(2);
  F[1].resize(2);
  F[2].resize(2);
  F[0] << e0 / su, -e1 / sv;
  F[1] << kI * su * e0, 0.0;
  F[2] << 0.0, kI * sv * e1;
}

// A function of w_0 with one output per regularization parameter.
using Factor = std::function<void(cdouble w0, Eigen::VectorXcd& out)>;

struct Integral {
  Eigen::VectorXcd value;
  double error = 0.0;
};

AdaptiveOptions inner_options(const PairingOptions& opt) {
  AdaptiveOptions a;
  a.abs_tol = opt.abs_tol;
  a.rel_tol = opt.rel_tol;
  a.initial_intervals = 8;
  a.max_intervals = 4000;
  return a;
}

AdaptiveOptions outer_options(const PairingOptions& opt) {
  AdaptiveOptions a;
  a.abs_tol = opt.abs_tol;
  a.rel_tol = opt.rel_tol;
  a.initial_intervals = 4;
  a.max_intervals = 4000;
  return a;
}

// Inner integrals int_0^{2 pi} s(r e^{i phi}) e^{i k phi} dphi for |k| <= K.
Integral angular_moments(const Factor& s, double r, int K, Eigen::Index D, const PairingOptions& opt) {
  const int modes = 2 * K + 1;
  Eigen::VectorXcd sv(D);
  auto f = [&](double phi, Eigen::VectorXcd& out) {
    const cdouble e = std::polar(1.0, phi);
    s(r * e, sv);
    cdouble ek = std::pow(e, -K);
    for (int j = 0; j < modes; ++j, ek *= e)
      for (Eigen::Index d = 0; d < D; ++d) out(d * modes + j) = sv(d) * ek;
  };
  const auto res = integrate_adaptive(f, 0.0, 2.0 * kPi, D * modes, inner_options(opt));
  return {res.value, res.error};
}

// int_{S^3} s(w_0) omega where omega(w, F) is the density against
// (1/2) du dtheta_0 dtheta_1 and a trigonometric polynomial of degree <= K in
// each angle.
Integral sphere_singular(const std::function<cdouble(const CVec&, const std::vector<CVec>&)>& omega, int K,
                         const Factor& s, Eigen::Index D, const PairingOptions& opt) {
  const int M = 2 * K + 2, modes = 2 * K + 1;
  double inner_err = 0.0;
  auto outer = [&](double u, Eigen::VectorXcd& out) {
    std::vector<cdouble> g(M, 0.0);
    CVec w;
    std::vector<CVec> F;
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) {
        hopf_frame(u, std::polar(1.0, 2.0 * kPi * a / M), std::polar(1.0, 2.0 * kPi * b / M), w, F);
        g[a] += omega(w, F) * (2.0 * kPi / M);
      }
    std::vector<cdouble> P(modes, 0.0);
    double pnorm = 0.0;
    for (int j = 0; j < modes; ++j) {
      for (int a = 0; a < M; ++a) P[j] += g[a] * std::polar(1.0, -2.0 * kPi * (j - K) * a / M);
      P[j] /= static_cast<double>(M);
      pnorm += std::abs(P[j]);
    }
    const Integral I = angular_moments(s, std::sqrt(u), K, D, opt);
    inner_err = std::max(inner_err, 0.5 * pnorm * I.error);
    for (Eigen::Index d = 0; d < D; ++d) {
      cdouble v = 0.0;
      for (int j = 0; j < modes; ++j) v += P[j] * I.value(d * modes + j);
      out(d) = 0.5 * v;
    }
  };
  const auto res = integrate_adaptive(outer, 0.0, 1.0, D, outer_options(opt));
  return {res.value, res.error + inner_err};
}

// int_D s(w_0) Omega for a 4-form Omega on C^2: the w_1 integral over the
// disc |w_1|^2 < 1 - |w_0|^2 is done in closed form.
Integral ball_singular(const Form& Omega, const Factor& s, Eigen::Index D, const PairingOptions& opt) {
  struct Term {
    int k, p, g;
    cdouble c;
  };
  std::vector<Term> terms;
  int K = 0;
  for (const auto& [idx, poly] : Omega.terms()) {
    // dw0 ^ dw1 ^ dw0bar ^ dw1bar = 4 dV.
    for (const auto& [e, c] : poly.terms()) {
      if (e[1] != e[3]) continue;
      const int g = e[1];
      terms.push_back({e[0] - e[2], e[0] + e[2], g, 4.0 * kPi * c / (g + 1.0)});
      K = std::max(K, std::abs(e[0] - e[2]));
    }
    (void)idx;
  }
  const int modes = 2 * K + 1;
  double inner_err = 0.0;
  auto outer = [&](double rho, Eigen::VectorXcd& out) {
    std::vector<cdouble> Q(modes, 0.0);
    double qnorm = 0.0;
    for (const auto& t : terms) Q[t.k + K] += t.c * std::pow(rho, t.p) * std::pow(1.0 - rho * rho, t.g + 1);
    for (const auto& q : Q) qnorm += std::abs(q);
    const Integral I = angular_moments(s, rho, K, D, opt);
    inner_err = std::max(inner_err, rho * qnorm * I.error);
    for (Eigen::Index d = 0; d < D; ++d) {
      cdouble v = 0.0;
      for (int j = 0; j < modes; ++j) v += Q[j] * I.value(d * modes + j);
      out(d) = rho * v;
    }
  };
  const auto res = integrate_adaptive(outer, 0.0, 1.0, D, outer_options(opt));
  return {res.value, res.error + inner_err};
}

struct Raw {
  std::vector<cdouble> reg;
  double quad_err = 0.0;
  bool monotone = true;
};

void add_raw(Raw& acc, const Raw& r) {
  if (acc.reg.empty()) acc.reg.assign(r.reg.size(), 0.0);
  for (std::size_t i = 0; i < r.reg.size(); ++i) acc.reg[i] += r.reg[i];
  acc.quad_err += r.quad_err;
  acc.monotone = acc.monotone && r.monotone;
}

// The pieces shared by both pairings for one affine factor, in rotated
// coordinates where f = |a| w_0 + b.
struct Rotated {
  const AffineFunction& f;
  const PairingOptions& opt;
  Eigen::MatrixXcd U;
  double A;
  cdouble b;
  std::vector<double> delta;  // absolute
  Eigen::Index D;

  Rotated(const AffineFunction& fn, const PairingOptions& o) : f(fn), opt(o), U(fn.unitary()), A(fn.a().norm()), b(fn.b()) {
    const double s2 = 0.5 * A * A + std::norm(b);
    for (double d : opt.deltas) delta.push_back(d * s2);
    D = static_cast<Eigen::Index>(delta.size());
  }

  Factor cauchy() const {
    return [this](cdouble w0, Eigen::VectorXcd& out) {
      const cdouble v = A * w0 + b;
      for (Eigen::Index d = 0; d < D; ++d) out(d) = std::conj(v) / (std::norm(v) + delta[d]);
    };
  }
  Factor half_log() const {
    return [this](cdouble w0, Eigen::VectorXcd& out) {
      const double v2 = std::norm(A * w0 + b);
      for (Eigen::Index d = 0; d < D; ++d) out(d) = 0.5 * std::log(v2 + delta[d]);
    };
  }
  Form pullback(const Form& psi) const { return pullback_linear(psi, U); }
  Form dw0() const { return A * Form::dz(1, 0); }

  Integral sphere(const Form& omega, const Factor& s) const {
    const CompiledForm cf(omega);
    const int K = omega.coefficient_degree() + omega.degree() + 1;
    return sphere_singular([&](const CVec& w, const std::vector<CVec>& F) { return cf.eval(w, F); }, K, s, D, opt);
  }

  bool log_trap() const {
    const Integral L = sphere_singular([](const CVec&, const std::vector<CVec>&) { return cdouble(1.0); }, 0,
                                       half_log(), D, opt);
    for (Eigen::Index d = 1; d < D; ++d)
      if (!(L.value(d).real() < L.value(d - 1).real())) return false;
    return true;
  }
};

void check_degrees(const Form& psi, int degree) {
  if (psi.n() != 1) throw Error("pairings are implemented on C^2");
  if (psi.degree() != degree) throw Error("test form has the wrong degree");
}

std::vector<const AffineFunction*> factors_of(const HolomorphicFunction& f) {
  if (const auto* a = dynamic_cast<const AffineFunction*>(&f)) return {a};
  if (const auto* p = dynamic_cast<const ProductFunction*>(&f)) {
    std::vector<const AffineFunction*> out;
    for (const auto& g : p->factors()) out.push_back(&g);
    return out;
  }
  throw Error("function is not in the catalog: " + f.name());
}

Raw cf_raw(const AffineFunction& f, const Form& psi, const PairingOptions& opt) {
  const double R = f.radius();
  if (R >= 0.0 && R < 1e-9) throw Error("zero set is tangent to the sphere: " + f.name());
  Rotated rot(f, opt);
  const Integral J = rot.sphere(wedge(rot.dw0(), rot.pullback(psi)), rot.cauchy());
  Raw r;
  const cdouble c = 1.0 / (2.0 * kPi * kI);
  for (Eigen::Index d = 0; d < rot.D; ++d) r.reg.push_back(c * J.value(d));
  r.quad_err = J.error / (2.0 * kPi);
  r.monotone = rot.log_trap();
  return r;
}

Raw boundary_raw(const AffineFunction& f, const Form& psi, const PairingOptions& opt) {
  const double R = f.radius();
  if (R >= 0.0 && R < 1e-9) throw Error("not regular with respect to the boundary: " + f.name());
  Rotated rot(f, opt);
  const Form pw = rot.pullback(psi);
  const Integral T1 = rot.sphere(wedge(rot.dw0(), pw), rot.cauchy());
  const Integral T2 = rot.sphere(pw.delbar(), rot.half_log());
  const Integral T3 = ball_singular(pw.delbar().del(), rot.half_log(), rot.D, opt);
  Raw r;
  const cdouble c = kI / kPi;
  for (Eigen::Index d = 0; d < rot.D; ++d) r.reg.push_back(c * (-0.5 * T1.value(d) - T2.value(d) + T3.value(d)));
  r.quad_err = (0.5 * T1.error + T2.error + T3.error) / kPi;
  r.monotone = rot.log_trap();
  return r;
}

PairingResult finish(const HolomorphicFunction& f, const std::string& psi_id, const std::string& method, const Raw& raw,
                     const PairingOptions& opt) {
  PairingResult res;
  res.function = f.name();
  res.psi_id = psi_id;
  res.method = method;
  res.deltas = opt.deltas;
  res.regularized = raw.reg;
  res.quad_err = raw.quad_err;
  res.monotone = raw.monotone;
  const auto ex = richardson_sqrt(opt.deltas, raw.reg);
  res.value = ex.value;
  res.err_est = ex.error + raw.quad_err;
  return res;
}

}  // namespace

std::unique_ptr<HolomorphicFunction> catalog_function(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw Error("function is not in the catalog: " + name);
  return it->second();
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

AmbientPolyForm named_form(const std::string& id) { return form_registry(id); }

std::vector<std::string> form_names() { return kFormIds; }

nlohmann::json to_json(const PairingResult& r) {
  return {{"function", r.function},  {"psi_id", r.psi_id},      {"value_re", r.value.real()},
          {"value_im", r.value.imag()}, {"err_est", r.err_est}, {"method", r.method}};
}

Extrapolation richardson_sqrt(const std::vector<double>& deltas, const std::vector<cdouble>& values) {
  if (deltas.size() != values.size() || deltas.empty()) throw Error("extrapolation needs matching samples");
  std::vector<std::size_t> order(deltas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return deltas[i] < deltas[j]; });
  auto fit = [&](std::size_t m) {
    cdouble v = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double ti = std::sqrt(deltas[order[i]]);
      double l = 1.0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) {
          const double tj = std::sqrt(deltas[order[j]]);
          l *= -tj / (ti - tj);
        }
      v += l * values[order[i]];
    }
    return v;
  };
  const std::size_t m = std::min<std::size_t>(3, deltas.size());
  if (m == 1) return {values[order[0]], 0.0};
  const cdouble hi = fit(m), lo = fit(m - 1);
  return {hi, std::abs(hi - lo)};
}

PairingResult current_cf(const HolomorphicFunction& f, const AmbientPolyForm& psi, const std::string& psi_id,
                         const PairingOptions& opt) {
  check_degrees(psi, 2);
  const auto factors = factors_of(f);
  Raw raw;
  for (const auto* g : factors) add_raw(raw, cf_raw(*g, psi, opt));
  return finish(f, psi_id, factors.size() > 1 ? "regularized-factor-sum" : "regularized", raw, opt);
}

PairingResult divisor_pairing_closed(const HolomorphicFunction& f, const AmbientPolyForm& psi,
                                     const std::string& psi_id, const PairingOptions& opt) {
  check_degrees(psi, 1);
  return current_cf(f, psi.d(), psi_id, opt);
}

PairingResult divisor_pairing_boundary(const HolomorphicFunction& u, const AmbientPolyForm& psi,
                                       const std::string& psi_id, const PairingOptions& opt) {
  check_degrees(psi, 2);
  if (!(psi - psi.type_part(1, 1)).is_zero()) throw Error("boundary pairing needs a (1,1)-form");
  const auto factors = factors_of(u);
  Raw raw;
  for (const auto* g : factors) add_raw(raw, boundary_raw(*g, psi, opt));
  return finish(u, psi_id, factors.size() > 1 ? "three-term-factor-sum" : "three-term", raw, opt);
}

PairingResult zero_set_direct(const HolomorphicFunction& f, const AmbientPolyForm& psi, const std::string& psi_id,
                              const PairingOptions& opt) {
  if (psi.n() != 1 || (psi.degree() != 1 && psi.degree() != 2)) throw Error("direct pairing needs a 1- or 2-form");
  PairingResult res;
  res.function = f.name();
  res.psi_id = psi_id;
  res.method = "direct";
  const CompiledForm cf(psi);
  for (const auto* g : factors_of(f)) {
    const double R = g->radius();
    if (R <= 0.0) continue;
    const auto rule = psi.degree() == 1 ? circle_quadrature(g->foot(), g->direction(), R, opt.direct_level)
                                        : disc_quadrature(g->foot(), g->direction(), R, opt.direct_level);
    res.value += form_pair(cf, rule);
  }
  return res;
}

}  // namespace crlab
