#pragma once

// Periodic orbits: symmetric shooting, generic Gauss-Newton closure, and
// verification of discrete symmetries.

#include "lensreeb/hamiltonian.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensreeb {

enum class SymmetryKind {
  None,        // Gauss-Newton on (x0, T) from a seed
  Rotational,  // mechanical models with a 2 pi / p rotation symmetry (Henon-Heiles: p = 3)
  Reversible,  // mechanical models even in x1: orbits meeting x1 = 0 perpendicularly twice
};

struct OrbitSearch {
  SymmetryKind kind = SymmetryKind::None;
  int p = 3;
  /// Scan window on the section, as fractions of the top of the Hill
  /// region on the positive x2-axis.
  double scan_lo = 0.05;
  double scan_hi = 0.999;
  int scan_points = 200;
  std::optional<PhasePoint> seed;  // required for SymmetryKind::None
  double tol = 1e-12;              // integrator tolerance
  int samples = 2048;              // stored samples per period
  double max_return_time = 100.0;  // give up on a section return after this time
};

struct SymmetryTag {
  std::string kind = "none";  // "none" | "z_p" | "reversible"
  int p = 0;
  std::string action;         // "hat" | "deck" for z_p
  double residual = 0.0;
};

struct PeriodicOrbit {
  HamiltonianModel model;
  double energy = 0.0;
  std::vector<double> times;        // one period, times[0] = 0, last sample excluded
  std::vector<PhasePoint> states;
  double period = 0.0;              // Hamiltonian time
  double reeb_action = 0.0;         // integral of lambda0(X_H) over one period
  double closure_residual = 0.0;    // |x(T) - x(0)|
  double section_residual = 0.0;    // shooting residual at convergence
  SymmetryTag symmetry;

  /// Periodic cubic Hermite interpolation with exact derivatives X_H.
  PhasePoint at(double t) const;
};

class OrbitNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OrbitNoConvergence : public std::runtime_error {
 public:
  OrbitNoConvergence(const std::string& what, std::vector<std::string> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<std::string> trace;
};

/// Finds a periodic orbit on H = E.  Rotational and reversible searches scan
/// the symmetric section x = (0, a), y = (y1, 0), y1 = +sqrt(2(E - V)), for
/// sign changes of the return residual and refine each bracket by Newton
/// with variational derivatives.  Candidates are verified (closure < 1e-8,
/// simple closed projection and symmetry residual < 1e-6 for rotational
/// orbits); the smallest residual wins, ties going to the shorter period.
PeriodicOrbit find_periodic_orbit(const HamiltonianModel& model, double energy, const OrbitSearch& search);

/// Periodic orbit through the seed's neighbourhood by Gauss-Newton on
/// (x0, T) with an energy and a phase condition.
PeriodicOrbit refine_periodic_orbit(const HamiltonianModel& model, double energy, const PhasePoint& seed,
                                    double tol = 1e-12, int samples = 2048);

enum class SymmetryAction { Deck, Hat };

/// min over shifts s near kT/p (k = 1..p-1) of max_t |g(x(t)) - x(t + s)|,
/// with g = g_{p,q} (Deck) or the Henon-Heiles rotation (Hat, p must be 3).
double check_zp_symmetry(const PeriodicOrbit& orbit, SymmetryAction action, int p, int q = 1);

/// max_t |rho(x(t)) - x(-t)| for rho(x1, x2, y1, y2) = (-x1, x2, y1, -y2).
double check_reversibility(const PeriodicOrbit& orbit);

/// True when the x1x2-projection of the samples has no crossings between
/// non-adjacent segments.
bool projection_is_simple(const PeriodicOrbit& orbit);

}  // namespace lensreeb
