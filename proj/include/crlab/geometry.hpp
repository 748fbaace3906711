#pragma once

#include <random>
#include <vector>

#include "crlab/common.hpp"

namespace crlab {

// Unit vector of C^{n+1}.
struct SpherePoint {
  CVec z;

  SpherePoint() = default;
  explicit SpherePoint(CVec v);

  int n() const { return static_cast<int>(z.size()) - 1; }
  RVec real() const;
  static SpherePoint from_real(const RVec& x);
};

struct BallPoint {
  CVec z;
  bool boundary = false;

  BallPoint() = default;
  explicit BallPoint(CVec v);
  int n() const { return static_cast<int>(z.size()) - 1; }
};

// Real tangent vector of the sphere, stored through its complex coordinates.
struct TangentVector {
  SpherePoint base;
  CVec v;

  TangentVector(SpherePoint x, CVec v);
  RVec real() const;
  static TangentVector from_real(const SpherePoint& x, const RVec& v);
};

RVec to_real(const CVec& v);
CVec from_real(const RVec& x);

// Contact data of the sphere: xi = (1/2i) sum(conj(z) dz - z d conj(z)).
double contact_form(const SpherePoint& x, const CVec& v);
CVec reeb_field(const SpherePoint& x);
double dxi(const CVec& v, const CVec& w);
double contact_volume(const SpherePoint& x, const std::vector<CVec>& vs);
double levi_form(const CVec& v, const CVec& w);

// Positively oriented orthonormal frame {T, e1, J e1, ...} of T_x S^{2n+1}.
std::vector<CVec> tangent_frame(const SpherePoint& x);
// Complex orthonormal basis of the complex tangent space (x^perp).
std::vector<CVec> holomorphic_frame(const SpherePoint& x);

SpherePoint random_sphere_point(int n, std::mt19937_64& rng);
CVec random_tangent(const SpherePoint& x, std::mt19937_64& rng);
CVec random_horizontal(const SpherePoint& x, std::mt19937_64& rng);
BallPoint random_ball_point(int n, std::mt19937_64& rng);
Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

double sphere_area(int n);

}  // namespace crlab
