#include "lensreeb/orbits.hpp"

#include "lensreeb/detail/variational.hpp"
#include "lensreeb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace lensreeb {

namespace {

using detail::VarIntegrator;

struct EventHit {
  double t = 0.0;
  VariationalSample sample;
};

// Integrates the variational system from x0 until g crosses zero in the
// requested direction with accept(x) true, after t_min and before t_max.
std::optional<EventHit> flow_to_event(const HamiltonianModel& model, const PhasePoint& x0, double tol,
                                      const std::function<double(const Vec4&)>& g, bool decreasing,
                                      const std::function<bool(const Vec4&)>& accept, double t_min, double t_max) {
  VarIntegrator integ(detail::variational_rhs(model, TimeParam::Hamiltonian), tol);
  integ.start(detail::variational_initial(x0), 0.0, 1e-3);
  auto head = [](const VarIntegrator::State& s) { return Vec4(s[0], s[1], s[2], s[3]); };
  double g_prev = g(x0.vec());
  try {
    while (integ.time() < t_max) {
      const auto [t_old, t_new] = integ.step();
      const double g_new = g(head(integ.current()));
      const bool crossed = decreasing ? (g_prev > 0.0 && g_new <= 0.0) : (g_prev < 0.0 && g_new >= 0.0);
      if (crossed && t_new > t_min) {
        const double te = detail::locate_event(
            integ, [&](const VarIntegrator::State& s) { return g(head(s)); }, t_old, t_new);
        const auto s = integ.at(te);
        if (te > t_min && accept(head(s))) return EventHit{te, detail::variational_sample(s, te)};
      }
      g_prev = g_new;
    }
  } catch (const detail::StepFailure&) {
    return std::nullopt;
  }
  return std::nullopt;
}

PhasePoint hermite(const PhasePoint& a, const Vec4& fa, const PhasePoint& b, const Vec4& fb, double h, double s) {
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return PhasePoint::from_vec(h00 * a.vec() + h10 * h * fa + h01 * b.vec() + h11 * h * fb);
}

// Builds the sampled orbit through x0 with Hamiltonian period T.
PeriodicOrbit sample_orbit(const HamiltonianModel& model, double energy, const PhasePoint& x0, double period,
                           double tol, int samples) {
  std::vector<double> times(samples + 1);
  for (int i = 0; i <= samples; ++i) times[i] = period * i / samples;
  const auto flow = variational_flow(model, x0, times, tol);
  PeriodicOrbit orbit{model, energy};
  orbit.period = period;
  orbit.times.assign(times.begin(), times.end() - 1);
  for (int i = 0; i < samples; ++i) orbit.states.push_back(flow[i].x);
  orbit.reeb_action = flow.back().action;
  orbit.closure_residual = (flow.back().x.vec() - x0.vec()).norm();
  return orbit;
}

double section_top(const PolynomialPotential& v, double energy) {
  // Smallest a > 0 with V(0, a) = E.
  double lo = 0.0, hi = 0.0;
  const double da = 1e-3;
  for (double a = da; a < 10.0; a += da) {
    if (v.value(0.0, a) >= energy) {
      hi = a;
      lo = a - da;
      break;
    }
  }
  if (hi == 0.0) throw std::invalid_argument("find_periodic_orbit: the level does not meet the positive x2-axis");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (v.value(0.0, mid) < energy) lo = mid;
    else hi = mid;
  }
  return lo;
}

struct ShotResult {
  bool ok = false;
  double residual = 0.0;
  double derivative = 0.0;
  double tau = 0.0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

PhasePoint PeriodicOrbit::at(double t) const {
  const std::size_t n = states.size();
  const double h = period / static_cast<double>(n);
  double u = std::fmod(t, period);
  if (u < 0.0) u += period;
  std::size_t i = std::min(n - 1, static_cast<std::size_t>(u / h));
  const double s = (u - static_cast<double>(i) * h) / h;
  const PhasePoint& a = states[i];
  const PhasePoint& b = states[(i + 1) % n];
  return hermite(a, hamiltonian_field(model, a), b, hamiltonian_field(model, b), h, s);
}

double check_zp_symmetry(const PeriodicOrbit& orbit, SymmetryAction action, int p, int q) {
  if (p < 2) throw std::invalid_argument("check_zp_symmetry: p must be >= 2");
  if (action == SymmetryAction::Hat && p != 3) throw std::invalid_argument("check_zp_symmetry: the hat action has order 3");
  const Mat4 g = action == SymmetryAction::Hat ? hat_matrix(1) : deck_matrix(p, q, 1);
  const double period = orbit.period;
  std::vector<Vec4> images;
  images.reserve(orbit.states.size());
  for (const auto& x : orbit.states) images.push_back(g * x.vec());
  auto residual = [&](double s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
      worst = std::max(worst, (images[i] - orbit.at(orbit.times[i] + s).vec()).norm());
    }
    return worst;
  };
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < p; ++k) {
    const double centre = period * k / p;
    const double half = 0.02 * period;
    double s_best = centre;
    double r_best = residual(centre);
    for (int j = -20; j <= 20; ++j) {
      const double s = centre + half * j / 20.0;
      const double r = residual(s);
      if (r < r_best) {
        r_best = r;
        s_best = s;
      }
    }
    // Golden-section refinement around the best coarse shift.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = s_best - half / 20.0, hi = s_best + half / 20.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = residual(c), fd = residual(d);
    for (int it = 0; it < 60; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = residual(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = residual(d);
      }
    }
    best = std::min({best, r_best, fc, fd});
  }
  return best;
}

double check_reversibility(const PeriodicOrbit& orbit) {
  double worst = 0.0;
  for (std::size_t i = 0; i < orbit.states.size(); ++i) {
    const PhasePoint& x = orbit.states[i];
    const Vec4 rho(-x.x1, x.x2, x.y1, -x.y2);
    worst = std::max(worst, (rho - orbit.at(-orbit.times[i]).vec()).norm());
  }
  return worst;
}

bool projection_is_simple(const PeriodicOrbit& orbit) {
  const std::size_t n = orbit.states.size();
  auto pt = [&](std::size_t i) { return Eigen::Vector2d(orbit.states[i % n].x1, orbit.states[i % n].x2); };
  auto cross = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] * b[1] - a[1] * b[0]; };
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = pt(i), b = pt(i + 1);
    const Eigen::Vector2d lo = a.cwiseMin(b), hi = a.cwiseMax(b);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // closing segment is adjacent to the first
      const Eigen::Vector2d c = pt(j), d = pt(j + 1);
      if (c.cwiseMax(d)[0] < lo[0] || c.cwiseMin(d)[0] > hi[0] || c.cwiseMax(d)[1] < lo[1] ||
          c.cwiseMin(d)[1] > hi[1]) {
        continue;
      }
      const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
      const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
      if ((d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0)) return false;
    }
  }
  return true;
}

PeriodicOrbit refine_periodic_orbit(const HamiltonianModel& model, double energy, const PhasePoint& seed, double tol,
                                    int samples) {
  const Vec4 f0 = hamiltonian_field(model, seed);
  if (f0.norm() < 1e-12) throw std::invalid_argument("refine_periodic_orbit: seed is an equilibrium");
  const Vec4 s0 = seed.vec();
  auto plane = [&](const Vec4& x) { return (x - s0).dot(f0); };
  const auto ret = flow_to_event(model, seed, tol, plane, false, [](const Vec4&) { return true; }, 1e-6, 1e3);
  if (!ret) throw OrbitNotFound("refine_periodic_orbit: no return to the seed hyperplane");

  Vec4 x = s0;
  double period = ret->t;
  std::vector<std::string> trace;
  double norm_f = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 40; ++it) {
    const auto end = variational_flow(model, PhasePoint::from_vec(x), {period}, tol).back();
    Eigen::Matrix<double, 6, 1> res;
    res.head<4>() = end.x.vec() - x;
    res[4] = model.value(PhasePoint::from_vec(x)) - energy;
    res[5] = (x - s0).dot(f0);
    norm_f = res.norm();
    trace.push_back("iter " + std::to_string(it) + ": |F| = " + fmt(norm_f) + ", T = " + fmt(period));
    if (norm_f < 1e-12) break;
    Eigen::Matrix<double, 6, 5> jac = Eigen::Matrix<double, 6, 5>::Zero();
    jac.topLeftCorner<4, 4>() = end.phi - Mat4::Identity();
    jac.block<4, 1>(0, 4) = hamiltonian_field(model, end.x);
    jac.block<1, 4>(4, 0) = model.gradient(PhasePoint::from_vec(x)).transpose();
    jac.block<1, 4>(5, 0) = f0.transpose();
    const Eigen::Matrix<double, 5, 1> step = jac.colPivHouseholderQr().solve(-res);
    x += step.head<4>();
    period += step[4];
    if (step.norm() < 1e-15) break;
  }
  if (!(norm_f < 1e-9)) throw OrbitNoConvergence("refine_periodic_orbit: Gauss-Newton did not converge", trace);
  PeriodicOrbit orbit = sample_orbit(model, energy, PhasePoint::from_vec(x), period, tol, samples);
  orbit.section_residual = norm_f;
  if (orbit.closure_residual >= 1e-8) {
    throw OrbitNoConvergence("refine_periodic_orbit: closure residual " + fmt(orbit.closure_residual), trace);
  }
  return orbit;
}

PeriodicOrbit find_periodic_orbit(const HamiltonianModel& model, double energy, const OrbitSearch& search) {
  if (search.kind == SymmetryKind::None) {
    if (!search.seed) throw std::invalid_argument("find_periodic_orbit: a seed is required without symmetry");
    return refine_periodic_orbit(model, energy, *search.seed, search.tol, search.samples);
  }
  if (!model.is_mechanical()) throw std::invalid_argument("find_periodic_orbit: symmetric searches need a mechanical model");
  if (search.scan_points < 2 || !(search.scan_lo > 0.0) || !(search.scan_hi <= 1.0) || search.scan_lo >= search.scan_hi) {
    throw std::invalid_argument("find_periodic_orbit: invalid scan window");
  }
  const PolynomialPotential& v = model.potential();
  const double a_top = section_top(v, energy);
  const bool rotational = search.kind == SymmetryKind::Rotational;
  if (rotational && search.p != 3) throw std::invalid_argument("find_periodic_orbit: rotational search supports p = 3");

  // Mirror ray at angle pi/2 - pi/p; the arc from the positive x2-axis to it
  // is 1/(2p) of the orbit.  Reversible orbits return to x1 = 0 after half a period.
  const double angle = std::numbers::pi / 2 - std::numbers::pi / search.p;
  const Eigen::Vector2d d(std::cos(angle), std::sin(angle));
  std::function<double(const Vec4&)> g;
  std::function<bool(const Vec4&)> accept;
  Vec4 grad_g;
  Vec4 residual_dir;
  if (rotational) {
    g = [d](const Vec4& x) { return d[0] * x[1] - d[1] * x[0]; };
    accept = [d](const Vec4& x) { return d[0] * x[0] + d[1] * x[1] > 0.0; };
    grad_g = Vec4(-d[1], d[0], 0, 0);
    residual_dir = Vec4(0, 0, d[0], d[1]);
  } else {
    g = [](const Vec4& x) { return x[0]; };
    accept = [](const Vec4&) { return true; };
    grad_g = Vec4(1, 0, 0, 0);
    residual_dir = Vec4(0, 0, 0, 1);
  }
  const double arcs = rotational ? 2.0 * search.p : 2.0;

  auto shoot = [&](double a) {
    ShotResult r;
    const double y1 = std::sqrt(std::max(0.0, 2.0 * (energy - v.value(0.0, a))));
    if (y1 <= 0.0) return r;
    const PhasePoint x0{0.0, a, y1, 0.0};
    const auto hit = flow_to_event(model, x0, search.tol, g, true, accept, 1e-9, search.max_return_time);
    if (!hit) return r;
    const Vec4 dx0(0.0, 1.0, -v.gradient(0.0, a)[1] / y1, 0.0);
    const Vec4 f = hamiltonian_field(model, hit->sample.x);
    const Vec4 dx = hit->sample.phi * dx0;
    const double dtau = -grad_g.dot(dx) / grad_g.dot(f);
    r.ok = true;
    r.residual = residual_dir.dot(hit->sample.x.vec());
    r.derivative = residual_dir.dot(dx + f * dtau);
    r.tau = hit->t;
    return r;
  };

  std::vector<double> as(search.scan_points);
  std::vector<ShotResult> shots(search.scan_points);
  for (int i = 0; i < search.scan_points; ++i) {
    as[i] = a_top * (search.scan_lo + (search.scan_hi - search.scan_lo) * i / (search.scan_points - 1));
    shots[i] = shoot(as[i]);
  }

  std::vector<std::string> trace;
  std::vector<PeriodicOrbit> accepted;
  int brackets = 0;
  for (int i = 0; i + 1 < search.scan_points; ++i) {
    if (!shots[i].ok || !shots[i + 1].ok) continue;
    if ((shots[i].residual > 0.0) == (shots[i + 1].residual > 0.0)) continue;
    // Discontinuous jumps (the event switches branches) show up as a large
    // change in return time; skip those brackets.
    if (std::abs(shots[i].tau - shots[i + 1].tau) > 0.5 * std::max(shots[i].tau, shots[i + 1].tau)) continue;
    ++brackets;
    double lo = as[i], hi = as[i + 1];
    double r_lo = shots[i].residual;
    double a = 0.5 * (lo + hi);
    ShotResult s = shoot(a);
    bool converged = false;
    for (int it = 0; it < 60 && s.ok; ++it) {
      if (std::abs(s.residual) < 1e-13) {
        converged = true;
        break;
      }
      if ((s.residual > 0.0) == (r_lo > 0.0)) {
        lo = a;
        r_lo = s.residual;
      } else {
        hi = a;
      }
      double next = a - s.residual / s.derivative;
      if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
      if (std::abs(next - a) < 1e-15 * a_top) {
        a = next;
        s = shoot(a);
        converged = std::abs(s.residual) < 1e-10;
        break;
      }
      a = next;
      s = shoot(a);
    }
    trace.push_back("bracket [" + fmt(as[i]) + ", " + fmt(as[i + 1]) + "]: a = " + fmt(a) +
                    ", residual = " + fmt(s.residual) + (converged ? "" : " (no convergence)"));
    if (!converged) continue;

    const double y1 = std::sqrt(2.0 * (energy - v.value(0.0, a)));
    PeriodicOrbit orbit = sample_orbit(model, energy, {0.0, a, y1, 0.0}, arcs * s.tau, search.tol, search.samples);
    orbit.section_residual = std::abs(s.residual);
    if (orbit.closure_residual >= 1e-8) {
      trace.back() += ", closure " + fmt(orbit.closure_residual);
      continue;
    }
    if (rotational) {
      orbit.symmetry = {"z_p", search.p, "hat", check_zp_symmetry(orbit, SymmetryAction::Hat, 3)};
      if (orbit.symmetry.residual >= 1e-6 || !projection_is_simple(orbit)) {
        trace.back() += ", rejected (symmetry " + fmt(orbit.symmetry.residual) + ")";
        continue;
      }
    } else {
      orbit.symmetry = {"reversible", 0, "", check_reversibility(orbit)};
      if (orbit.symmetry.residual >= 1e-6) continue;
    }
    accepted.push_back(std::move(orbit));
  }
  if (brackets == 0) {
    throw OrbitNotFound("find_periodic_orbit: no sign change of the section residual in the scan window");
  }
  if (accepted.empty()) throw OrbitNoConvergence("find_periodic_orbit: no bracket produced an accepted orbit", trace);
  const auto best = std::min_element(accepted.begin(), accepted.end(), [](const auto& x, const auto& y) {
    if (x.section_residual != y.section_residual) return x.section_residual < y.section_residual;
    return x.period < y.period;
  });
  return *best;
}

}  // namespace lensreeb
