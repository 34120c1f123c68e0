#include "lensreeb/ellipsoid_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lensreeb {

namespace {
constexpr double kPi = std::numbers::pi;

nlohmann::json orbit_json(const OrbitRecord& o) {
  return {{"name", o.name},
          {"radius", o.radius},
          {"period_upstairs", o.period_upstairs},
          {"period_downstairs", o.period_downstairs},
          {"rho_disk_upstairs", o.rho_disk},
          {"mu_disk_upstairs", o.mu_disk}};
}
}  // namespace

std::optional<RationalWitness> rational_witness(double x, long long max_den, double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents h/k
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const long long ai = (long long)a;
    const long long h = ai * h0 + h1, k = ai * k0 + k1;
    if (k > max_den) break;
    h1 = h0, h0 = h, k1 = k0, k0 = k;
    if (std::abs(x - double(h) / double(k)) <= rel_tol * std::max(1.0, std::abs(x))) return RationalWitness{h, k};
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

PhasePoint EllipsoidData::orbit_point(int which, double t) const {
  // X_H runs clockwise in each z_j-line; on H = 1 Reeb and Hamiltonian time agree.
  if (which == 1) return PhasePoint::from_z(std::polar(r1, -2 * t / (r1 * r1)), 0.0);
  if (which == 2) return PhasePoint::from_z(0.0, std::polar(r2, -2 * t / (r2 * r2)));
  throw std::invalid_argument("orbit_point: which must be 1 or 2");
}

std::vector<PhasePoint> EllipsoidData::sample_orbit(int which, int samples) const {
  if (samples < 1) throw std::invalid_argument("sample_orbit: samples must be positive");
  const double period = which == 1 ? p1.period_upstairs : p2.period_upstairs;
  std::vector<PhasePoint> out;
  for (int j = 0; j < samples; ++j) out.push_back(orbit_point(which, period * j / samples));
  return out;
}

EllipsoidData ellipsoid_oracle(double r1, double r2, int p) {
  if (!(r1 > 0 && r2 > 0 && std::isfinite(r1) && std::isfinite(r2))) {
    throw std::invalid_argument("oracle: radii must be positive");
  }
  if (r1 > r2) throw std::invalid_argument("oracle: requires r1 <= r2");
  if (p < 2) throw std::invalid_argument("oracle: requires p >= 2");

  EllipsoidData d;
  d.r1 = r1, d.r2 = r2, d.p = p;
  d.ratio = (r2 * r2) / (r1 * r1);
  d.k = int(std::floor(d.ratio)) + 1;
  d.rational = rational_witness(d.ratio);
  if (r1 == r2) d.warnings.push_back("r1 = r2: the level is a round sphere and every orbit is degenerate");
  if (d.rational) {
    d.warnings.push_back("r2^2/r1^2 is within 1e-12 of " + std::to_string(d.rational->numerator) + "/" +
                         std::to_string(d.rational->denominator) + ": iterates may be degenerate");
  }

  const double inv = 1.0 / d.ratio;  // r1^2 / r2^2
  d.p1 = {"P1", r1, kPi * r1 * r1, kPi * r1 * r1 / p, 1 + inv, 2 * int(std::floor(1 + inv)) + 1};
  d.p2 = {"P2", r2, kPi * r2 * r2, kPi * r2 * r2 / p, 1 + d.ratio, 2 * d.k + 1};
  if (r1 == r2) d.p1.mu_disk = d.p2.mu_disk = 3;  // lower endpoint of the degenerate value

  d.mu_p1_p_equivariant = 2 * p - 1;
  d.rho_p1_downstairs_equivariant = (p - 1 + inv) / p;
  d.sl_downstairs = -1.0 / p;
  return d;
}

nlohmann::json to_json(const EllipsoidData& d) {
  nlohmann::json j;
  j["model"] = "ellipsoid";
  j["r1"] = d.r1;
  j["r2"] = d.r2;
  j["p"] = d.p;
  j["ratio_r2sq_over_r1sq"] = d.ratio;
  j["k"] = d.k;
  j["mu_p1_p"] = d.p1.mu_disk;
  j["mu_p2_p"] = d.p2.mu_disk;
  j["upstairs"] = {{"P1", orbit_json(d.p1)}, {"P2", orbit_json(d.p2)}};
  j["downstairs"] = {
      {"P1",
       {{"period", d.p1.period_downstairs},
        {"mu_iterate_p_equivariant_class", d.mu_p1_p_equivariant},
        {"rho_equivariant_class", d.rho_p1_downstairs_equivariant},
        {"self_linking", d.sl_downstairs}}},
      {"P2", {{"period", d.p2.period_downstairs}, {"self_linking", d.sl_downstairs}}},
  };
  if (d.rational) {
    j["rational_witness"] = {{"numerator", d.rational->numerator}, {"denominator", d.rational->denominator}};
  } else {
    j["rational_witness"] = nullptr;
  }
  j["warnings"] = d.warnings;
  return j;
}

}  // namespace lensreeb
