#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace crlab {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cdouble kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Hermitian pairing <x,y> = sum_j x_j conj(y_j).
inline cdouble herm(const CVec& x, const CVec& y) { return y.dot(x); }

// Real Euclidean inner product of C^{n+1} viewed as R^{2n+2}.
inline double real_dot(const CVec& x, const CVec& y) { return herm(x, y).real(); }

// Neumaier variant of Kahan summation.
template <typename T>
struct CompensatedSum {
  T sum{};
  T comp{};

  void add(T value) {
    if constexpr (std::is_same_v<T, cdouble>) {
      double re = sum.real(), im = sum.imag();
      double cre = comp.real(), cim = comp.imag();
      step(re, cre, value.real());
      step(im, cim, value.imag());
      sum = {re, im};
      comp = {cre, cim};
    } else {
      step(sum, comp, value);
    }
  }
  CompensatedSum& operator+=(T value) {
    add(value);
    return *this;
  }
  T value() const { return sum + comp; }

 private:
  static void step(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
};

}  // namespace crlab
