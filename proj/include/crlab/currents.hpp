#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "crlab/forms.hpp"

namespace crlab {

// Explicit holomorphic polynomials on C^2 with known zero sets.
class HolomorphicFunction {
 public:
  virtual ~HolomorphicFunction() = default;
  virtual const std::string& name() const = 0;
  virtual cdouble value(const CVec& z) const = 0;
  virtual CVec gradient(const CVec& z) const = 0;
  virtual Polynomial polynomial() const = 0;
};

// f(z) = a . z + b with a != 0.
class AffineFunction : public HolomorphicFunction {
 public:
  AffineFunction(CVec a, cdouble b, std::string name = "");

  const std::string& name() const override { return name_; }
  cdouble value(const CVec& z) const override { return (a_.array() * z.array()).sum() + b_; }
  CVec gradient(const CVec&) const override { return a_; }
  Polynomial polynomial() const override;

  const CVec& a() const { return a_; }
  cdouble b() const { return b_; }
  // Unitary U with f(U w) = |a| w_0 + b.
  Eigen::MatrixXcd unitary() const;
  // {f = 0} = {foot + t direction}; it meets the closed unit ball in a disc
  // of radius radius() (negative when the line misses the ball).
  CVec foot() const;
  CVec direction() const;
  double radius() const;

 private:
  CVec a_;
  cdouble b_;
  std::string name_;
};

class ProductFunction : public HolomorphicFunction {
 public:
  ProductFunction(std::vector<AffineFunction> factors, std::string name = "");

  const std::string& name() const override { return name_; }
  cdouble value(const CVec& z) const override;
  CVec gradient(const CVec& z) const override;
  Polynomial polynomial() const override;
  const std::vector<AffineFunction>& factors() const { return factors_; }

 private:
  std::vector<AffineFunction> factors_;
  std::string name_;
};

std::unique_ptr<HolomorphicFunction> catalog_function(const std::string& name);
std::vector<std::string> catalog_names();

// Named polynomial test forms on C^2.
AmbientPolyForm named_form(const std::string& id);
std::vector<std::string> form_names();

struct PairingOptions {
  // Regularization parameters relative to the mean of |f|^2 over S^3.
  std::vector<double> deltas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int direct_level = 48;
};

struct PairingResult {
  std::string function;
  std::string psi_id;
  std::string method;
  cdouble value;
  double err_est = 0.0;
  double quad_err = 0.0;
  std::vector<double> deltas;
  std::vector<cdouble> regularized;
  // The log-term trap: int log(|f|^2 + delta) over S^3 decreased along the schedule.
  bool monotone = true;
};

nlohmann::json to_json(const PairingResult& r);

struct Extrapolation {
  cdouble value;
  double error = 0.0;
};
// Polynomial extrapolation to delta -> 0 in t = sqrt(delta) from the three
// smallest deltas; the error is the gap to the linear fit through the two
// smallest.
Extrapolation richardson_sqrt(const std::vector<double>& deltas, const std::vector<cdouble>& values);

// (1/2 pi i) int_{S^3} df/f ^ psi for a 2-form psi.
PairingResult current_cf(const HolomorphicFunction& f, const AmbientPolyForm& psi, const std::string& psi_id,
                         const PairingOptions& opt = {});
// (Z_f, psi) = C_f(d psi) for a 1-form psi.
PairingResult divisor_pairing_closed(const HolomorphicFunction& f, const AmbientPolyForm& psi,
                                     const std::string& psi_id, const PairingOptions& opt = {});
// (i/pi)[-int_{bD} du/(2u) ^ psi - int_{bD} log|u| dbar psi + int_D log|u| ddbar psi]
// for a (1,1)-form psi on the unit ball.
PairingResult divisor_pairing_boundary(const HolomorphicFunction& u, const AmbientPolyForm& psi,
                                       const std::string& psi_id, const PairingOptions& opt = {});
// Integral of psi over the zero set: the circle on S^3 for a 1-form, the
// disc in the ball for a 2-form.
PairingResult zero_set_direct(const HolomorphicFunction& f, const AmbientPolyForm& psi, const std::string& psi_id,
                              const PairingOptions& opt = {});

}  // namespace crlab
