#include "crlab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crlab {

namespace {

constexpr double kDropTol = 0.0;

void accumulate(std::map<Polynomial::Exponents, cdouble>& terms, const Polynomial::Exponents& e,
                cdouble c) {
  auto [it, inserted] = terms.emplace(e, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kDropTol) terms.erase(it);
}

// Sorts idx in place and returns the permutation sign, or 0 on a repeat.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

}  // namespace

Polynomial Polynomial::constant(int n, cdouble c) {
  Polynomial p(n);
  if (c != 0.0) p.add_term(Exponents(2 * (n + 1), 0), c);
  return p;
}

Polynomial Polynomial::z(int n, int j) {
  Polynomial p(n);
  Exponents e(2 * (n + 1), 0);
  e[j] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::zbar(int n, int j) {
  Polynomial p(n);
  Exponents e(2 * (n + 1), 0);
  e[n + 1 + j] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::x(int n, int j) { return 0.5 * (z(n, j) + zbar(n, j)); }

Polynomial Polynomial::y(int n, int j) { return cdouble(0.0, -0.5) * (z(n, j) - zbar(n, j)); }

Polynomial Polynomial::abs2(int n, int j) { return z(n, j) * zbar(n, j); }

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

void Polynomial::add_term(const Exponents& e, cdouble c) {
  if (static_cast<int>(e.size()) != 2 * (n_ + 1)) throw Error("exponent vector has wrong length");
  accumulate(terms_, e, c);
}

Polynomial Polynomial::d_z(int j) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[j] == 0) continue;
    Exponents f = e;
    f[j] -= 1;
    out.add_term(f, c * static_cast<double>(e[j]));
  }
  return out;
}

Polynomial Polynomial::d_zbar(int j) const {
  Polynomial out(n_);
  const int k = n_ + 1 + j;
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponents f = e;
    f[k] -= 1;
    out.add_term(f, c * static_cast<double>(e[k]));
  }
  return out;
}

Polynomial Polynomial::conj() const {
  Polynomial out(n_);
  const int m = n_ + 1;
  for (const auto& [e, c] : terms_) {
    Exponents f(e.size());
    for (int j = 0; j < m; ++j) {
      f[j] = e[m + j];
      f[m + j] = e[j];
    }
    out.add_term(f, std::conj(c));
  }
  return out;
}

cdouble Polynomial::eval(const CVec& z) const {
  const int m = n_ + 1;
  cdouble acc = 0.0;
  for (const auto& [e, c] : terms_) {
    cdouble t = c;
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < e[j]; ++a) t *= z(j);
      for (int a = 0; a < e[m + j]; ++a) t *= std::conj(z(j));
    }
    acc += t;
  }
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) accumulate(terms_, e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) accumulate(terms_, e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cdouble c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.n());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Polynomial::Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

AmbientPolyForm AmbientPolyForm::function(const Polynomial& p) {
  AmbientPolyForm f(p.n(), 0);
  if (!p.is_zero()) f.add_term({}, p);
  return f;
}

AmbientPolyForm AmbientPolyForm::dz(int n, int j) {
  AmbientPolyForm f(n, 1);
  f.add_term({j}, Polynomial::constant(n, 1.0));
  return f;
}

AmbientPolyForm AmbientPolyForm::dzbar(int n, int j) {
  AmbientPolyForm f(n, 1);
  f.add_term({n + 1 + j}, Polynomial::constant(n, 1.0));
  return f;
}

AmbientPolyForm AmbientPolyForm::dx(int n, int j) { return 0.5 * (dz(n, j) + dzbar(n, j)); }

AmbientPolyForm AmbientPolyForm::dy(int n, int j) {
  return cdouble(0.0, -0.5) * (dz(n, j) - dzbar(n, j));
}

AmbientPolyForm AmbientPolyForm::contact(int n) {
  AmbientPolyForm f(n, 1);
  for (int j = 0; j <= n; ++j) {
    f += Polynomial::zbar(n, j) * dz(n, j);
    f -= Polynomial::z(n, j) * dzbar(n, j);
  }
  return cdouble(0.0, -0.5) * f;
}

void AmbientPolyForm::add_term(Indices idx, const Polynomial& coeff) {
  if (static_cast<int>(idx.size()) != degree_) throw Error("form term has wrong degree");
  for (int i : idx)
    if (i < 0 || i > 2 * n_ + 1) throw Error("covector index out of range");
  const int sign = sort_sign(idx);
  if (sign == 0 || coeff.is_zero()) return;
  auto it = terms_.find(idx);
  if (it == terms_.end()) {
    Polynomial c = coeff;
    if (sign < 0) c *= -1.0;
    terms_.emplace(idx, c);
    return;
  }
  if (sign > 0)
    it->second += coeff;
  else
    it->second -= coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

AmbientPolyForm AmbientPolyForm::derivative(bool holo, bool anti) const {
  AmbientPolyForm out(n_, degree_ + 1);
  for (const auto& [idx, c] : terms_) {
    for (int j = 0; j <= n_; ++j) {
      if (holo) {
        Indices w{j};
        w.insert(w.end(), idx.begin(), idx.end());
        out.add_term(w, c.d_z(j));
      }
      if (anti) {
        Indices w{n_ + 1 + j};
        w.insert(w.end(), idx.begin(), idx.end());
        out.add_term(w, c.d_zbar(j));
      }
    }
  }
  return out;
}

AmbientPolyForm AmbientPolyForm::d() const { return derivative(true, true); }
AmbientPolyForm AmbientPolyForm::del() const { return derivative(true, false); }
AmbientPolyForm AmbientPolyForm::delbar() const { return derivative(false, true); }

AmbientPolyForm AmbientPolyForm::type_part(int p, int q) const {
  AmbientPolyForm out(n_, degree_);
  if (p + q != degree_) return out;
  for (const auto& [idx, c] : terms_) {
    const int holo = static_cast<int>(std::count_if(idx.begin(), idx.end(), [&](int i) { return i <= n_; }));
    if (holo == p) out.add_term(idx, c);
  }
  return out;
}

AmbientPolyForm AmbientPolyForm::conj() const {
  AmbientPolyForm out(n_, degree_);
  for (const auto& [idx, c] : terms_) {
    Indices w;
    for (int i : idx) w.push_back(i <= n_ ? i + n_ + 1 : i - n_ - 1);
    out.add_term(w, c.conj());
  }
  return out;
}

double AmbientPolyForm::max_coefficient() const {
  double m = 0.0;
  for (const auto& [idx, c] : terms_)
    for (const auto& [e, v] : c.terms()) m = std::max(m, std::abs(v));
  return m;
}

int AmbientPolyForm::coefficient_degree() const {
  int d = 0;
  for (const auto& [idx, c] : terms_) d = std::max(d, c.degree());
  return d;
}

cdouble AmbientPolyForm::eval(const CVec& z, const std::vector<CVec>& vectors) const {
  return CompiledForm(*this).eval(z, vectors);
}

AmbientPolyForm& AmbientPolyForm::operator+=(const AmbientPolyForm& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) {
    n_ = o.n_;
    degree_ = o.degree_;
  }
  if (o.degree_ != degree_ || o.n_ != n_) throw Error("adding forms of different degree");
  for (const auto& [idx, c] : o.terms_) add_term(idx, c);
  return *this;
}

AmbientPolyForm& AmbientPolyForm::operator-=(const AmbientPolyForm& o) {
  return *this += (-1.0) * o;
}

AmbientPolyForm& AmbientPolyForm::operator*=(cdouble c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, p] : terms_) p *= c;
  return *this;
}

AmbientPolyForm operator*(const Polynomial& p, const AmbientPolyForm& a) {
  AmbientPolyForm out(a.n(), a.degree());
  for (const auto& [idx, c] : a.terms()) out.add_term(idx, p * c);
  return out;
}

AmbientPolyForm wedge(const AmbientPolyForm& a, const AmbientPolyForm& b) {
  if (a.n() != b.n()) throw Error("wedge of forms on different spaces");
  AmbientPolyForm out(a.n(), a.degree() + b.degree());
  for (const auto& [ia, ca] : a.terms())
    for (const auto& [ib, cb] : b.terms()) {
      AmbientPolyForm::Indices w = ia;
      w.insert(w.end(), ib.begin(), ib.end());
      out.add_term(w, ca * cb);
    }
  return out;
}

Polynomial substitute_linear(const Polynomial& p, const Eigen::MatrixXcd& U) {
  const int n = p.n(), m = n + 1;
  if (U.rows() != m || U.cols() != m) throw Error("linear substitution has the wrong size");
  std::vector<Polynomial> image(2 * m, Polynomial(n));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      image[j] += U(j, k) * Polynomial::z(n, k);
      image[m + j] += std::conj(U(j, k)) * Polynomial::zbar(n, k);
    }
  Polynomial out(n);
  for (const auto& [e, c] : p.terms()) {
    Polynomial t = Polynomial::constant(n, c);
    for (int v = 0; v < 2 * m; ++v)
      for (int a = 0; a < e[v]; ++a) t = t * image[v];
    out += t;
  }
  return out;
}

AmbientPolyForm pullback_linear(const AmbientPolyForm& form, const Eigen::MatrixXcd& U) {
  const int n = form.n(), m = n + 1;
  std::vector<AmbientPolyForm> image;
  for (int j = 0; j < m; ++j) {
    AmbientPolyForm f(n, 1);
    for (int k = 0; k < m; ++k) f += U(j, k) * AmbientPolyForm::dz(n, k);
    image.push_back(f);
  }
  for (int j = 0; j < m; ++j) {
    AmbientPolyForm f(n, 1);
    for (int k = 0; k < m; ++k) f += std::conj(U(j, k)) * AmbientPolyForm::dzbar(n, k);
    image.push_back(f);
  }
  AmbientPolyForm out(n, form.degree());
  for (const auto& [idx, c] : form.terms()) {
    AmbientPolyForm t = AmbientPolyForm::function(substitute_linear(c, U));
    for (int v : idx) t = wedge(t, image[v]);
    out += t;
  }
  return out;
}

CompiledForm::CompiledForm(const AmbientPolyForm& form) : n_(form.n()), degree_(form.degree()) {
  for (const auto& [idx, c] : form.terms()) {
    idx_.push_back(idx);
    std::vector<Mono> monos;
    for (const auto& [e, v] : c.terms()) {
      monos.push_back({e, v});
      for (int x : e) max_exp_ = std::max(max_exp_, x);
    }
    terms_.push_back(std::move(monos));
  }
}

void CompiledForm::coefficients(const CVec& z, std::vector<cdouble>& out) const {
  const int m = n_ + 1;
  const int stride = max_exp_ + 1;
  // powers[(var) * stride + e], var in [0, 2m)
  cdouble powers[64];
  std::vector<cdouble> heap;
  cdouble* pw = powers;
  if (2 * m * stride > 64) {
    heap.resize(2 * m * stride);
    pw = heap.data();
  }
  for (int j = 0; j < m; ++j) {
    const cdouble a = z(j), b = std::conj(z(j));
    pw[j * stride] = 1.0;
    pw[(m + j) * stride] = 1.0;
    for (int e = 1; e <= max_exp_; ++e) {
      pw[j * stride + e] = pw[j * stride + e - 1] * a;
      pw[(m + j) * stride + e] = pw[(m + j) * stride + e - 1] * b;
    }
  }
  out.resize(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    cdouble acc = 0.0;
    for (const auto& mono : terms_[t]) {
      cdouble v = mono.c;
      for (int var = 0; var < 2 * m; ++var)
        if (mono.e[var] != 0) v *= pw[var * stride + mono.e[var]];
      acc += v;
    }
    out[t] = acc;
  }
}

cdouble small_det(const std::vector<cdouble>& a, int p) {
  switch (p) {
    case 0:
      return 1.0;
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    default: {
      Eigen::MatrixXcd m(p, p);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = a[i * p + j];
      return m.determinant();
    }
  }
}

cdouble CompiledForm::eval(const CVec& z, const std::vector<CVec>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) throw Error("form evaluated on wrong number of vectors");
  if (terms_.empty()) return 0.0;
  const int m = n_ + 1;
  std::vector<cdouble> coeff;
  coefficients(z, coeff);
  // covector values: row i = dzeta_i, column b = vector b
  std::vector<cdouble> cov(2 * m * degree_);
  for (int b = 0; b < degree_; ++b)
    for (int j = 0; j < m; ++j) {
      cov[j * degree_ + b] = vectors[b](j);
      cov[(m + j) * degree_ + b] = std::conj(vectors[b](j));
    }
  std::vector<cdouble> minor(degree_ * degree_);
  cdouble acc = 0.0;
  for (std::size_t t = 0; t < idx_.size(); ++t) {
    for (int a = 0; a < degree_; ++a)
      for (int b = 0; b < degree_; ++b) minor[a * degree_ + b] = cov[idx_[t][a] * degree_ + b];
    acc += coeff[t] * small_det(minor, degree_);
  }
  return acc;
}

cdouble wedge_one_form(const std::vector<cdouble>& alpha, const CompiledForm& psi, const CVec& z,
                       const std::vector<CVec>& vectors) {
  const int p = psi.degree() + 1;
  if (static_cast<int>(vectors.size()) != p || static_cast<int>(alpha.size()) != p)
    throw Error("wedge_one_form: wrong number of vectors");
  cdouble acc = 0.0;
  std::vector<CVec> rest(p - 1);
  for (int a = 0; a < p; ++a) {
    int r = 0;
    for (int b = 0; b < p; ++b)
      if (b != a) rest[r++] = vectors[b];
    const cdouble term = alpha[a] * psi.eval(z, rest);
    acc += (a % 2 == 0) ? term : -term;
  }
  return acc;
}

double form_cr_norm(const AmbientPolyForm& form, int r, const std::vector<CVec>& points) {
  std::vector<Polynomial> polys;
  for (const auto& [idx, c] : form.terms()) polys.push_back(c);
  std::vector<Polynomial> layer = polys;
  std::vector<Polynomial> all = polys;
  const int m = form.n() + 1;
  for (int order = 1; order <= r; ++order) {
    std::vector<Polynomial> next;
    for (const auto& p : layer)
      for (int j = 0; j < m; ++j) {
        next.push_back(p.d_z(j));
        next.push_back(p.d_zbar(j));
      }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  double sup = 0.0;
  for (const auto& z : points)
    for (const auto& p : all) sup = std::max(sup, std::abs(p.eval(z)));
  return sup;
}

}  // namespace crlab
