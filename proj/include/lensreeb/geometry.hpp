#pragma once

// Ambient structures on R^4 = C^2 and on the unit sphere S^3.
//
// Coordinates are ordered (x1, x2, y1, y2) everywhere.  Two complex views are
// used: the "z-view" z1 = x1 + i y1, z2 = x2 + i y2 (the one the deck actions
// g_{p,q} rotate) and the "w-view" w1 = x1 + i x2, w2 = y1 + i y2 (Lagrangian
// pairing, rotated by the Henon-Heiles symmetry).
//
// Sign conventions:
//   omega0 = sum dy_i ^ dx_i,   lambda0 = 1/2 sum (y_i dx_i - x_i dy_i),
// so d lambda0 = omega0 and, in the z-view, omega0(u, v) = -Im <u, v>_C and
// lambda0_p(v) = -1/2 Im <p, v>_C.  The complex structure compatible with
// omega0 is multiplication by -i.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensreeb {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

/// Free tangent vector in the (x1, x2, y1, y2) basis.
using TangentVector = Vec4;

struct PhasePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;

  static PhasePoint from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  static PhasePoint from_z(Complex z1, Complex z2) {
    return {z1.real(), z2.real(), z1.imag(), z2.imag()};
  }
  static PhasePoint from_w(Complex w1, Complex w2) {
    return {w1.real(), w1.imag(), w2.real(), w2.imag()};
  }

  Vec4 vec() const { return {x1, x2, y1, y2}; }
  Complex z1() const { return {x1, y1}; }
  Complex z2() const { return {x2, y2}; }
  Complex w1() const { return {x1, x2}; }
  Complex w2() const { return {y1, y2}; }
  double norm() const { return vec().norm(); }
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tangent vector from its z-view components (v1 along z1, v2 along z2).
inline TangentVector tangent_from_z(Complex v1, Complex v2) {
  return {v1.real(), v2.real(), v1.imag(), v2.imag()};
}

double symplectic_form(const TangentVector& u, const TangentVector& v);
double liouville(const PhasePoint& p, const TangentVector& v);

/// Covector of lambda0 at p, i.e. lambda0_p(v) = <liouville_covector(p), v>.
Vec4 liouville_covector(const PhasePoint& p);

/// g_{p,q}^n: (z1, z2) -> (e^{2 pi i n/p} z1, e^{2 pi i q n/p} z2).
/// Throws GeometryError unless p >= 1 and gcd(p, q) = 1.
PhasePoint deck_action(int p_order, int q_twist, int n, const PhasePoint& pt);
/// Linear part of g_{p,q}^n (the map is linear, so this is also its differential).
Mat4 deck_matrix(int p_order, int q_twist, int n);

/// \hat g_{3,1}^n: rotates w1 = x1 + i x2 and w2 = y1 + i y2 by 2 pi n / 3.
PhasePoint hat_action(int n, const PhasePoint& pt);
Mat4 hat_matrix(int n);

/// Orthogonal map conjugating \hat g_{3,1} to g_{3,2}.
PhasePoint psi(const PhasePoint& pt);
const Mat4& psi_matrix();

/// Oriented frame of xi_std at a point of S^3.
struct FramePair {
  PhasePoint base;
  TangentVector f1;
  TangentVector f2;
};

/// Global trivialization of xi_std: f1 = (-conj z2, conj z1), f2 = -i f1.
/// Requires |p| = 1 within 1e-9.
FramePair global_xi_frame(const PhasePoint& p);

/// Same f1 formula evaluated at any nonzero point (no S^3 check).
TangentVector global_f1(const PhasePoint& p);

/// Stereographic projection S^3 -> R^3 from `pole`.
///
/// An orthogonal map R taking `pole` to e4 = (0, 0, 0, 1) is applied first,
/// then q -> (q1, q2, q3) / (1 - q4).
class Stereographic {
 public:
  explicit Stereographic(const PhasePoint& pole);

  Vec3 project(const PhasePoint& p) const;
  PhasePoint unproject(const Vec3& x) const;
  const PhasePoint& pole() const { return pole_; }

  /// +1 if the projection carries the lambda0 ^ d lambda0 orientation of S^3
  /// to the standard orientation of R^3, -1 otherwise.
  int orientation_sign() const { return orientation_sign_; }

 private:
  PhasePoint pole_;
  Mat4 rotation_;  // orthogonal, rotation_ * pole = e4
  int orientation_sign_ = 1;
};

Vec3 stereographic(const PhasePoint& p, const PhasePoint& pole);

/// Unit vector on S^3 maximizing the minimum distance to the given samples,
/// chosen from a fixed deterministic candidate set.
PhasePoint choose_pole(const std::vector<PhasePoint>& avoid);

}  // namespace lensreeb
