#include "lensreeb/integrator.hpp"

#include "lensreeb/detail/ode.hpp"
#include "lensreeb/detail/variational.hpp"

#include <algorithm>
#include <cmath>

namespace lensreeb {

namespace {

using Integ = detail::DenseIntegrator<4>;
using State = Integ::State;

State to_state(const PhasePoint& p) { return {p.x1, p.x2, p.y1, p.y2}; }
PhasePoint to_point(const State& s) { return {s[0], s[1], s[2], s[3]}; }

PhasePoint project_to_level(const HamiltonianModel& model, PhasePoint p, double energy) {
  for (int it = 0; it < 3; ++it) {
    const Vec4 g = model.gradient(p);
    const double f = model.value(p) - energy;
    if (f == 0.0 || g.squaredNorm() == 0.0) break;
    p = PhasePoint::from_vec(p.vec() - f / g.squaredNorm() * g);
  }
  return p;
}

}  // namespace

double drift_bound(double tol, double t_final, double energy) {
  return 100.0 * tol * std::abs(t_final) * std::max(1.0, std::abs(energy));
}

Trajectory integrate(const HamiltonianModel& model, const PhasePoint& p0, double t_final, double tol,
                     const IntegrateOptions& options) {
  if (!(tol >= 1e-14 && tol <= 1e-4)) throw std::invalid_argument("integrate: tol must lie in [1e-14, 1e-4]");
  if (!(t_final > 0.0)) throw std::invalid_argument("integrate: t_final must be positive");
  if (options.samples < 0) throw std::invalid_argument("integrate: samples must be >= 0");

  Integ integ(
      [&](const State& s, State& ds, double) {
        const PhasePoint p = to_point(s);
        const Vec4 f = options.time == TimeParam::Reeb ? reeb_field(model, p) : hamiltonian_field(model, p);
        for (int i = 0; i < 4; ++i) ds[i] = f[i];
      },
      tol);
  Trajectory tr;
  tr.energy0 = model.value(p0);
  auto record = [&](double t, const PhasePoint& p) {
    tr.times.push_back(t);
    tr.states.push_back(p);
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(model.value(p) - tr.energy0));
  };

  integ.start(to_state(p0), 0.0, std::min(1e-3, t_final / 16));
  record(0.0, p0);
  int next_sample = 1;
  try {
    while (true) {
      const auto [t_old, t_new] = integ.step();
      ++tr.steps;
      if (options.samples > 0) {
        while (next_sample <= options.samples) {
          const double ts = t_final * next_sample / options.samples;
          if (ts > t_new) break;
          PhasePoint p = to_point(integ.at(ts));
          if (options.project_energy) p = project_to_level(model, p, tr.energy0);
          record(ts, p);
          ++next_sample;
        }
      } else {
        PhasePoint p = to_point(integ.at(std::min(t_new, t_final)));
        if (options.project_energy) p = project_to_level(model, p, tr.energy0);
        record(std::min(t_new, t_final), p);
      }
      if (options.project_energy && t_new < t_final) {
        integ.reset_state(to_state(project_to_level(model, to_point(integ.current()), tr.energy0)));
      }
      if (t_new >= t_final) break;
      (void)t_old;
    }
  } catch (const detail::StepFailure& e) {
    throw StepUnderflowError(e.what(), to_point(integ.current()), integ.time());
  } catch (const ReebError& e) {
    throw StepUnderflowError(std::string("integrate: Reeb field undefined along the trajectory: ") + e.what(),
                             to_point(integ.current()), integ.time());
  }
  return tr;
}

}  // namespace lensreeb

namespace lensreeb {

namespace detail {

VarIntegrator::Rhs variational_rhs(const HamiltonianModel& model, TimeParam time) {
  return [&model, time](const VarIntegrator::State& s, VarIntegrator::State& ds, double) {
    const PhasePoint p{s[0], s[1], s[2], s[3]};
    Vec4 f;
    Mat4 jac;
    if (time == TimeParam::Reeb) {
      f = reeb_field(model, p);
      jac = reeb_field_jacobian(model, p);
    } else {
      f = hamiltonian_field(model, p);
      jac = hamiltonian_field_jacobian(model, p);
    }
    const Eigen::Map<const Mat4> phi(s.data() + 4);
    Eigen::Map<Mat4> dphi(ds.data() + 4);
    dphi.noalias() = jac * phi;
    for (int i = 0; i < 4; ++i) ds[i] = f[i];
    ds[20] = liouville(p, f);
  };
}

VarIntegrator::State variational_initial(const PhasePoint& x0) {
  VarIntegrator::State s{};
  s[0] = x0.x1;
  s[1] = x0.x2;
  s[2] = x0.y1;
  s[3] = x0.y2;
  Eigen::Map<Mat4>(s.data() + 4).setIdentity();
  return s;
}

VariationalSample variational_sample(const VarIntegrator::State& s, double t) {
  VariationalSample v;
  v.t = t;
  v.x = {s[0], s[1], s[2], s[3]};
  v.phi = Eigen::Map<const Mat4>(s.data() + 4);
  v.action = s[20];
  return v;
}

}  // namespace detail

std::vector<VariationalSample> variational_flow(const HamiltonianModel& model, const PhasePoint& x0,
                                                const std::vector<double>& times, double tol, TimeParam time) {
  if (!(tol >= 1e-14 && tol <= 1e-4)) throw std::invalid_argument("variational_flow: tol must lie in [1e-14, 1e-4]");
  std::vector<VariationalSample> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw std::invalid_argument("variational_flow: times must be non-negative and increasing");
  }
  detail::VarIntegrator integ(detail::variational_rhs(model, time), tol);
  const auto s0 = detail::variational_initial(x0);
  integ.start(s0, 0.0, 1e-3);
  std::size_t k = 0;
  while (k < times.size() && times[k] == 0.0) out.push_back(detail::variational_sample(s0, times[k++]));
  try {
    while (k < times.size()) {
      const auto [t_old, t_new] = integ.step();
      (void)t_old;
      while (k < times.size() && times[k] <= t_new) {
        out.push_back(detail::variational_sample(integ.at(times[k]), times[k]));
        ++k;
      }
    }
  } catch (const detail::StepFailure& e) {
    const auto& c = integ.current();
    throw StepUnderflowError(e.what(), {c[0], c[1], c[2], c[3]}, integ.time());
  }
  return out;
}

}  // namespace lensreeb
