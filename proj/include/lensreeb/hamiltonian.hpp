#pragma once

// Hamiltonian models on R^4 with exact derivatives, and the Hamiltonian and
// Reeb vector fields they induce on energy levels.

#include "lensreeb/geometry.hpp"
#include "lensreeb/polynomial.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <variant>

namespace lensreeb {

/// H = (y1^2 + y2^2)/2 + V(x1, x2).
struct Mechanical {
  PolynomialPotential potential;
};

/// H = (x1^2 + y1^2)/r1^2 + (x2^2 + y2^2)/r2^2.
struct Ellipsoid {
  double r1 = 1.0;
  double r2 = 1.0;
};

/// H given directly as a polynomial in (x1, x2, y1, y2).
struct GeneralPolynomial {
  Polynomial4 h;
};

class HamiltonianModel {
 public:
  using Kind = std::variant<Mechanical, Ellipsoid, GeneralPolynomial>;

  HamiltonianModel(std::string name, Kind kind);

  const std::string& name() const { return name_; }
  const Kind& kind() const { return kind_; }
  bool is_mechanical() const { return std::holds_alternative<Mechanical>(kind_); }
  /// Throws std::logic_error for non-mechanical models.
  const PolynomialPotential& potential() const;

  double value(const PhasePoint& p) const;
  Vec4 gradient(const PhasePoint& p) const;
  Mat4 hessian(const PhasePoint& p) const;

 private:
  std::string name_;
  Kind kind_;
};

struct Evaluation {
  double value = 0.0;
  TangentVector gradient = TangentVector::Zero();
};

Evaluation evaluate(const HamiltonianModel& model, const PhasePoint& p);

/// X_H defined by i_{X_H} omega0 = -dH: x_i' = dH/dy_i, y_i' = -dH/dx_i.
TangentVector hamiltonian_field(const HamiltonianModel& model, const PhasePoint& p);

/// Jacobian of X_H at p.
Mat4 hamiltonian_field_jacobian(const HamiltonianModel& model, const PhasePoint& p);

class ReebError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lambda0(X_H)(p); positive on starshaped levels.
double reeb_normalizer(const HamiltonianModel& model, const PhasePoint& p);

inline constexpr double kStarshapedThreshold = 1e-8;

/// X_lambda = X_H / lambda0(X_H).  Throws ReebError when |lambda0(X_H)| is
/// below kStarshapedThreshold (the level is not transverse to the radial
/// direction at p).
TangentVector reeb_field(const HamiltonianModel& model, const PhasePoint& p);

/// Jacobian of the Reeb field (as a field on R^4) at p.
Mat4 reeb_field_jacobian(const HamiltonianModel& model, const PhasePoint& p);

HamiltonianModel henon_heiles();
HamiltonianModel harmonic_oscillator();
/// The g_{4,1}-invariant decoupled example, with its vanishing cubic term dropped.
HamiltonianModel decoupled_z4();
HamiltonianModel ellipsoid(double r1, double r2);

/// Built-in names: "henon-heiles", "harmonic", "decoupled-z4", "ellipsoid".
HamiltonianModel builtin_model(const std::string& name, double r1 = 1.0, double r2 = 1.0);

/// Parses {"kind": "mechanical"|"ellipsoid"|"polynomial", ...}.  Mechanical
/// models take "potential": [[a, b, c], ...]; polynomial models take
/// "terms": [[e1, e2, e3, e4, c], ...]; ellipsoids take "r1", "r2".
/// Coefficients may be numbers or strings "p/q".  Unknown keys are rejected.
HamiltonianModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const HamiltonianModel& model);

}  // namespace lensreeb
