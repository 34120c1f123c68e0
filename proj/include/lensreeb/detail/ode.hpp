#pragma once

// Thin stepping wrapper around odeint's dense-output Dormand-Prince 5(4) pair.
// Exposes single steps, dense evaluation inside the last step, state
// replacement (for projections) and event location.

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace lensreeb::detail {

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

template <std::size_t N>
class DenseIntegrator {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(const State&, State&, double)>;

  DenseIntegrator(Rhs rhs, double tol)
      : rhs_(std::move(rhs)),
        stepper_(boost::numeric::odeint::make_dense_output(tol, tol, boost::numeric::odeint::runge_kutta_dopri5<State>())) {}

  void start(const State& y0, double t0, double dt0) {
    stepper_.initialize(y0, t0, dt0);
    started_ = true;
  }

  /// Performs one accepted step; returns (t_old, t_new).
  std::pair<double, double> step() {
    const double t_before = stepper_.current_time();
    std::pair<double, double> r;
    try {
      r = stepper_.do_step(std::ref(rhs_));
    } catch (const std::exception& e) {
      throw StepFailure(std::string("integrator: step size control failed: ") + e.what(), t_before);
    }
    if (!(std::abs(r.second - r.first) > 1e-14 * std::max(1.0, std::abs(r.first)))) {
      throw StepFailure("integrator: step size underflow", r.first);
    }
    for (double v : stepper_.current_state()) {
      if (!std::isfinite(v)) throw StepFailure("integrator: non-finite state", r.second);
    }
    return r;
  }

  State at(double t) const {
    State y;
    stepper_.calc_state(t, y);
    return y;
  }

  const State& current() const { return stepper_.current_state(); }
  const State& previous() const { return stepper_.previous_state(); }
  double time() const { return stepper_.current_time(); }
  double previous_time() const { return stepper_.previous_time(); }
  double step_size() const { return stepper_.current_time_step(); }

  /// Replaces the current state (e.g. after a projection) and restarts.
  void reset_state(const State& y) { stepper_.initialize(y, stepper_.current_time(), stepper_.current_time_step()); }

 private:
  Rhs rhs_;
  boost::numeric::odeint::result_of::make_dense_output<boost::numeric::odeint::runge_kutta_dopri5<State>>::type stepper_;
  bool started_ = false;
};

/// Locates a zero of g(at(t)) in [t0, t1] given a sign change at the ends.
template <std::size_t N, class G>
double locate_event(const DenseIntegrator<N>& integ, G&& g, double t0, double t1) {
  double g0 = g(integ.at(t0));
  double lo = t0, hi = t1;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(integ.at(mid));
    if ((gm > 0.0) == (g0 > 0.0) && gm != 0.0) {
      lo = mid;
      g0 = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lensreeb::detail
