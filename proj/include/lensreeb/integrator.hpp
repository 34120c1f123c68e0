#pragma once

// Numerical flows of Hamiltonian models.

#include "lensreeb/hamiltonian.hpp"

#include <stdexcept>
#include <vector>

namespace lensreeb {

enum class TimeParam { Hamiltonian, Reeb };

struct IntegrateOptions {
  TimeParam time = TimeParam::Hamiltonian;
  /// Restore H = H(p0) by a gradient projection after every accepted step.
  bool project_energy = false;
  /// 0 records every accepted step; otherwise a uniform grid of samples + 1
  /// points on [0, t_final] evaluated from the dense output.
  int samples = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  int interpolant_order = 4;  // Dormand-Prince dense output
  double energy0 = 0.0;
  double max_energy_drift = 0.0;
  std::size_t steps = 0;
};

class StepUnderflowError : public std::runtime_error {
 public:
  StepUnderflowError(const std::string& what, PhasePoint last, double t)
      : std::runtime_error(what), last_state(last), last_time(t) {}
  PhasePoint last_state;
  double last_time;
};

/// Adaptive Dormand-Prince 5(4) integration with absolute and relative
/// tolerance tol in [1e-14, 1e-4].  Throws std::invalid_argument for a
/// tolerance outside that range and StepUnderflowError when the step size
/// collapses (the last state reached is attached).
Trajectory integrate(const HamiltonianModel& model, const PhasePoint& p0, double t_final, double tol,
                     const IntegrateOptions& options = {});

struct VariationalSample {
  double t = 0.0;
  PhasePoint x;
  Mat4 phi = Mat4::Identity();  // derivative of the time-t flow map at x0
  double action = 0.0;          // integral of lambda0 along the path so far
};

/// Flow together with its linearization, evaluated at the requested
/// (increasing, non-negative) times.
std::vector<VariationalSample> variational_flow(const HamiltonianModel& model, const PhasePoint& x0,
                                                const std::vector<double>& times, double tol,
                                                TimeParam time = TimeParam::Hamiltonian);

/// Energy drift bound: 100 * tol * t_final * scale(H) with scale = max(1, |H(p0)|).
double drift_bound(double tol, double t_final, double energy);

}  // namespace lensreeb
