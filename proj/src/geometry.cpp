#include "lensreeb/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace lensreeb {

namespace {

Complex unit_phase(double turns) {
  const double a = 2.0 * std::numbers::pi * turns;
  return {std::cos(a), std::sin(a)};
}

// Reduces n modulo p so that g^p = id holds exactly for the returned phase.
double turns_mod(long long numerator, int p) {
  long long r = numerator % p;
  if (r < 0) r += p;
  return static_cast<double>(r) / static_cast<double>(p);
}

Mat4 plane_rotation(Complex a, Complex b, bool w_view) {
  // Multiplication by a on the first complex coordinate and b on the second.
  Mat4 m = Mat4::Zero();
  if (!w_view) {
    // z1 = (x1, y1) -> indices (0, 2); z2 = (x2, y2) -> (1, 3)
    m(0, 0) = a.real(); m(0, 2) = -a.imag();
    m(2, 0) = a.imag(); m(2, 2) = a.real();
    m(1, 1) = b.real(); m(1, 3) = -b.imag();
    m(3, 1) = b.imag(); m(3, 3) = b.real();
  } else {
    // w1 = (x1, x2) -> (0, 1); w2 = (y1, y2) -> (2, 3)
    m(0, 0) = a.real(); m(0, 1) = -a.imag();
    m(1, 0) = a.imag(); m(1, 1) = a.real();
    m(2, 2) = b.real(); m(2, 3) = -b.imag();
    m(3, 2) = b.imag(); m(3, 3) = b.real();
  }
  return m;
}

}  // namespace

double symplectic_form(const TangentVector& u, const TangentVector& v) {
  return u[2] * v[0] - u[0] * v[2] + u[3] * v[1] - u[1] * v[3];
}

Vec4 liouville_covector(const PhasePoint& p) {
  return 0.5 * Vec4(p.y1, p.y2, -p.x1, -p.x2);
}

double liouville(const PhasePoint& p, const TangentVector& v) {
  return liouville_covector(p).dot(v);
}

Mat4 deck_matrix(int p_order, int q_twist, int n) {
  if (p_order < 1) throw GeometryError("deck_action: order p must be >= 1");
  if (std::gcd(p_order, q_twist) != 1) {
    throw GeometryError("deck_action: p and q must be coprime (got p=" + std::to_string(p_order) +
                        ", q=" + std::to_string(q_twist) + ")");
  }
  const Complex a = unit_phase(turns_mod(n, p_order));
  const Complex b = unit_phase(turns_mod(static_cast<long long>(q_twist) * n, p_order));
  return plane_rotation(a, b, false);
}

PhasePoint deck_action(int p_order, int q_twist, int n, const PhasePoint& pt) {
  return PhasePoint::from_vec(deck_matrix(p_order, q_twist, n) * pt.vec());
}

Mat4 hat_matrix(int n) {
  const Complex a = unit_phase(turns_mod(n, 3));
  return plane_rotation(a, a, true);
}

PhasePoint hat_action(int n, const PhasePoint& pt) {
  return PhasePoint::from_vec(hat_matrix(n) * pt.vec());
}

const Mat4& psi_matrix() {
  static const Mat4 m = [] {
    const double s = 1.0 / std::numbers::sqrt2;
    Mat4 r;
    // rows: images (x1, x2, y1, y2) as functions of (x1, x2, y1, y2)
    r << s, 0, 0, -s,
        -s, 0, 0, -s,
         0, s, s, 0,
         0, s, -s, 0;
    return r;
  }();
  return m;
}

PhasePoint psi(const PhasePoint& pt) { return PhasePoint::from_vec(psi_matrix() * pt.vec()); }

TangentVector global_f1(const PhasePoint& p) {
  return tangent_from_z(-std::conj(p.z2()), std::conj(p.z1()));
}

FramePair global_xi_frame(const PhasePoint& p) {
  if (std::abs(p.norm() - 1.0) > 1e-9) {
    throw GeometryError("global_xi_frame: point is not on S^3 (|p| = " + std::to_string(p.norm()) +
                        ")");
  }
  const Complex v1 = -std::conj(p.z2());
  const Complex v2 = std::conj(p.z1());
  const Complex minus_i(0.0, -1.0);
  return {p, tangent_from_z(v1, v2), tangent_from_z(minus_i * v1, minus_i * v2)};
}

Stereographic::Stereographic(const PhasePoint& pole) : pole_(pole) {
  const Vec4 n = pole.vec();
  if (std::abs(n.norm() - 1.0) > 1e-9) throw GeometryError("stereographic: pole is not on S^3");

  // Orthonormal basis whose last element is the pole.
  std::array<Vec4, 4> basis;
  basis[3] = n;
  int filled = 0;
  for (int k = 0; k < 4 && filled < 3; ++k) {
    Vec4 e = Vec4::Unit(k);
    e -= e.dot(n) * n;
    for (int j = 0; j < filled; ++j) e -= e.dot(basis[j]) * basis[j];
    if (e.norm() > 1e-6) basis[filled++] = e.normalized();
  }
  for (int j = 0; j < 4; ++j) rotation_.row(j) = basis[j].transpose();
  if (rotation_.determinant() < 0.0) rotation_.row(0) *= -1.0;

  // Orientation: compare the image of a lambda0 ^ d lambda0 positive basis at
  // the antipode (Reeb direction, f1, f2) with the standard orientation.
  const PhasePoint base = PhasePoint::from_vec(-n);
  const FramePair fr = global_xi_frame(base);
  const Vec4 reeb(2 * base.y1, 2 * base.y2, -2 * base.x1, -2 * base.x2);
  const double h = 1e-6;
  Eigen::Matrix3d jac;
  const std::array<Vec4, 3> dirs = {reeb, fr.f1, fr.f2};
  for (int c = 0; c < 3; ++c) {
    const Vec4 plus = (base.vec() + h * dirs[c]).normalized();
    const Vec4 minus = (base.vec() - h * dirs[c]).normalized();
    jac.col(c) = (project(PhasePoint::from_vec(plus)) - project(PhasePoint::from_vec(minus))) / (2 * h);
  }
  orientation_sign_ = jac.determinant() > 0.0 ? 1 : -1;
}

Vec3 Stereographic::project(const PhasePoint& p) const {
  const Vec4 q = rotation_ * p.vec();
  const double denom = 1.0 - q[3];
  if (denom < 1e-12) throw GeometryError("stereographic: point coincides with the pole");
  return Vec3(q[0], q[1], q[2]) / denom;
}

PhasePoint Stereographic::unproject(const Vec3& x) const {
  const double r2 = x.squaredNorm();
  const Vec4 q(2 * x[0] / (r2 + 1), 2 * x[1] / (r2 + 1), 2 * x[2] / (r2 + 1), (r2 - 1) / (r2 + 1));
  return PhasePoint::from_vec(rotation_.transpose() * q);
}

Vec3 stereographic(const PhasePoint& p, const PhasePoint& pole) {
  if (std::abs(p.norm() - 1.0) > 1e-9) throw GeometryError("stereographic: point is not on S^3");
  if ((p.vec() - pole.vec()).norm() <= 1e-6) {
    throw GeometryError("stereographic: point is within 1e-6 of the pole");
  }
  return Stereographic(pole).project(p);
}

PhasePoint choose_pole(const std::vector<PhasePoint>& avoid) {
  std::vector<Vec4> candidates;
  for (int k = 0; k < 4; ++k) {
    candidates.push_back(Vec4::Unit(k));
    candidates.push_back(-Vec4::Unit(k));
  }
  // Fixed pseudo-random directions; Box-Muller on raw mt19937 words keeps the
  // set identical across standard libraries.
  std::mt19937 gen(20240611u);
  auto uniform = [&gen] { return (static_cast<double>(gen()) + 0.5) / 4294967296.0; };
  for (int k = 0; k < 256; ++k) {
    Vec4 v;
    for (int j = 0; j < 4; j += 2) {
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      const double a = 2.0 * std::numbers::pi * uniform();
      v[j] = r * std::cos(a);
      v[j + 1] = r * std::sin(a);
    }
    candidates.push_back(v.normalized());
  }
  Vec4 best = candidates.front();
  double best_dist = -1.0;
  for (const Vec4& c : candidates) {
    double d = std::numeric_limits<double>::infinity();
    for (const PhasePoint& p : avoid) d = std::min(d, (p.vec().normalized() - c).norm());
    if (d > best_dist) {
      best_dist = d;
      best = c;
    }
  }
  return PhasePoint::from_vec(best);
}

}  // namespace lensreeb
