#pragma once

// Closed-form data for the irrational ellipsoid
//   E(r1, r2) = { |z1|^2 / r1^2 + |z2|^2 / r2^2 = 1 }
// and its quotient by g_{p,1}.  Upstairs (on S^3-type level) and downstairs
// (on the lens space) quantities are stored side by side and labelled; no
// other part of the library divides by p.

#include "lensreeb/geometry.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lensreeb {

struct OrbitRecord {
  std::string name;          // "P1" | "P2"
  double radius = 0.0;       // r_i
  double period_upstairs = 0.0;    // pi r_i^2 (Reeb period, equal to the action)
  double period_downstairs = 0.0;  // pi r_i^2 / p
  double rho_disk = 0.0;           // 1 + r_i^2 / r_j^2, simple upstairs orbit, disk class
  int mu_disk = 0;                 // index of the simple upstairs orbit (= P_i^p) in the disk class
};

struct RationalWitness {
  long long numerator = 0;
  long long denominator = 1;
};

struct EllipsoidData {
  double r1 = 0.0, r2 = 0.0;
  int p = 0;
  double ratio = 0.0;  // r2^2 / r1^2
  int k = 0;           // ratio in (k - 1, k)
  OrbitRecord p1, p2;
  /// Downstairs P1 in the equivariant class of its p-th iterate:
  /// mu(P1^p) = 2p - 1 and rotation number (p - 1 + r1^2/r2^2)/p.
  int mu_p1_p_equivariant = 0;
  double rho_p1_downstairs_equivariant = 0.0;
  /// Downstairs self-linking numbers of P1, P2 (quoted values, not computed).
  double sl_downstairs = 0.0;
  std::optional<RationalWitness> rational;  // set when r2^2/r1^2 looks rational
  std::vector<std::string> warnings;

  /// The simple upstairs orbit, Reeb time t in [0, pi r_i^2), on H = 1.
  PhasePoint orbit_point(int which, double t) const;
  std::vector<PhasePoint> sample_orbit(int which, int samples) const;
};

/// Requires 0 < r1 <= r2 and p >= 2 (std::invalid_argument otherwise);
/// r1 = r2 or a rational ratio with denominator <= 1e6 only adds a warning.
EllipsoidData ellipsoid_oracle(double r1, double r2, int p);

/// Best rational approximation with denominator <= max_den that matches x to
/// rel_tol, by continued fractions.
std::optional<RationalWitness> rational_witness(double x, long long max_den = 1000000, double rel_tol = 1e-12);

nlohmann::json to_json(const EllipsoidData& d);

}  // namespace lensreeb
