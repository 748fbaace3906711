#pragma once

#include <map>
#include <string>
#include <vector>

#include "crlab/common.hpp"

namespace crlab {

// Polynomial in z_0..z_n and their conjugates. An exponent vector has length
// 2(n+1): holomorphic exponents first, then antiholomorphic ones.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, cdouble c);
  static Polynomial z(int n, int j);
  static Polynomial zbar(int n, int j);
  static Polynomial x(int n, int j);  // Re z_j
  static Polynomial y(int n, int j);  // Im z_j
  static Polynomial abs2(int n, int j);

  int n() const { return n_; }
  const std::map<Exponents, cdouble>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponents& e, cdouble c);
  Polynomial d_z(int j) const;
  Polynomial d_zbar(int j) const;
  Polynomial conj() const;
  cdouble eval(const CVec& z) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(cdouble c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(cdouble c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  int n_ = 1;
  std::map<Exponents, cdouble> terms_;
};

// Differential form on C^{n+1} with polynomial coefficients in the basis
// dz_0..dz_n, dzbar_0..dzbar_n (covector indices 0..n, n+1..2n+1).
class AmbientPolyForm {
 public:
  using Indices = std::vector<int>;

  AmbientPolyForm() = default;
  AmbientPolyForm(int n, int degree) : n_(n), degree_(degree) {}

  static AmbientPolyForm function(const Polynomial& p);
  static AmbientPolyForm dz(int n, int j);
  static AmbientPolyForm dzbar(int n, int j);
  static AmbientPolyForm dx(int n, int j);
  static AmbientPolyForm dy(int n, int j);
  // The contact form (1/2i) sum(conj(z_j) dz_j - z_j d conj(z_j)).
  static AmbientPolyForm contact(int n);

  int n() const { return n_; }
  int degree() const { return degree_; }
  const std::map<Indices, Polynomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Indices idx, const Polynomial& coeff);
  AmbientPolyForm d() const;
  AmbientPolyForm del() const;
  AmbientPolyForm delbar() const;
  // Component of bidegree (p, q).
  AmbientPolyForm type_part(int p, int q) const;
  AmbientPolyForm conj() const;
  // Largest |coefficient| over all terms, as a rough size for zero tests.
  double max_coefficient() const;
  int coefficient_degree() const;

  // Value at z on the given vectors (complex coordinates of real vectors).
  cdouble eval(const CVec& z, const std::vector<CVec>& vectors) const;

  AmbientPolyForm& operator+=(const AmbientPolyForm& o);
  AmbientPolyForm& operator-=(const AmbientPolyForm& o);
  AmbientPolyForm& operator*=(cdouble c);
  friend AmbientPolyForm operator+(AmbientPolyForm a, const AmbientPolyForm& b) { return a += b; }
  friend AmbientPolyForm operator-(AmbientPolyForm a, const AmbientPolyForm& b) { return a -= b; }
  friend AmbientPolyForm operator*(cdouble c, AmbientPolyForm a) { return a *= c; }
  friend AmbientPolyForm operator*(const Polynomial& p, const AmbientPolyForm& a);

 private:
  AmbientPolyForm derivative(bool holo, bool anti) const;

  int n_ = 1;
  int degree_ = 0;
  std::map<Indices, Polynomial> terms_;
};

AmbientPolyForm wedge(const AmbientPolyForm& a, const AmbientPolyForm& b);

// Substitution z = U w for a complex-linear map U, and the pullback of a form
// under it.
Polynomial substitute_linear(const Polynomial& p, const Eigen::MatrixXcd& U);
AmbientPolyForm pullback_linear(const AmbientPolyForm& form, const Eigen::MatrixXcd& U);

// Flattened form for repeated evaluation.
class CompiledForm {
 public:
  CompiledForm() = default;
  explicit CompiledForm(const AmbientPolyForm& form);

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  cdouble eval(const CVec& z, const std::vector<CVec>& vectors) const;
  // Coefficients at z, in the order of indices().
  void coefficients(const CVec& z, std::vector<cdouble>& out) const;
  const std::vector<std::vector<int>>& indices() const { return idx_; }

 private:
  struct Mono {
    std::vector<int> e;
    cdouble c;
  };
  int n_ = 1;
  int degree_ = 0;
  int max_exp_ = 0;
  std::vector<std::vector<int>> idx_;
  std::vector<std::vector<Mono>> terms_;
};

// Determinant of a small square matrix given row-major.
cdouble small_det(const std::vector<cdouble>& m, int p);

// (alpha ^ psi)(V_0..V_p) for a 1-form value list alpha(V_a).
cdouble wedge_one_form(const std::vector<cdouble>& alpha_values, const CompiledForm& psi,
                       const CVec& z, const std::vector<CVec>& vectors);

// C^r size of a form: sup over sample points of the largest coefficient
// derivative of order <= r in the dz/dzbar basis.
double form_cr_norm(const AmbientPolyForm& form, int r, const std::vector<CVec>& points);

}  // namespace crlab
