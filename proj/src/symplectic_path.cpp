#include "lensreeb/symplectic_path.hpp"

#include "lensreeb/integrator.hpp"

#include <cmath>
#include <numbers>

namespace lensreeb {

Mat2 standard_j() {
  Mat2 j;
  j << 0, -1, 1, 0;
  return j;
}

namespace {

SymplecticPath make_grid(std::size_t intervals) {
  SymplecticPath path;
  path.t.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) path.t[i] = double(i) / double(intervals);
  path.phi.reserve(intervals + 1);
  return path;
}

void finish(SymplecticPath& path) {
  path.max_det_error = 0.0;
  for (const Mat2& m : path.phi) path.max_det_error = std::max(path.max_det_error, std::abs(m.determinant() - 1.0));
}

}  // namespace

SymplecticPath variational_path(const PeriodicOrbit& orbit, FrameProvider& frame, int n_periods,
                                const PathOptions& options) {
  if (n_periods < 1) throw std::invalid_argument("variational_path: n_periods must be >= 1");
  if (options.samples_per_period < 16) throw std::invalid_argument("variational_path: too few samples");
  const std::size_t intervals = std::size_t(n_periods) * options.samples_per_period;
  const double period = orbit.reeb_action;  // lambda0(X_lambda) = 1
  if (!(period > 0.0)) throw PathError("variational_path: orbit has non-positive action");

  std::vector<double> times(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) times[i] = period * n_periods * double(i) / double(intervals);
  const PhasePoint x0 = orbit.states.front();
  const auto flow = variational_flow(orbit.model, x0, times, options.tol, TimeParam::Reeb);

  const double closure = (flow.back().x.vec() - x0.vec()).norm();
  if (closure > options.closure_tol) {
    throw PathError("variational_path: flow does not close up (|x(nT) - x(0)| = " + std::to_string(closure) + ")");
  }

  frame.reset();
  const FramePair f0 = frame.frame(x0);
  SymplecticPath path = make_grid(intervals);
  path.frame = frame.label();
  path.periods = n_periods;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const VariationalSample& s = flow[i];
    const FramePair f = i == 0 ? f0 : frame.frame(s.x);
    Mat2 m;
    for (int c = 0; c < 2; ++c) {
      const TangentVector v = c == 0 ? f0.f1 : f0.f2;
      const TangentVector w = reeb_projection(orbit.model, s.x, s.phi * v);
      m(0, c) = symplectic_form(w, f.f2);
      m(1, c) = symplectic_form(f.f1, w);
    }
    path.phi.push_back(m);
  }
  finish(path);
  if (path.max_det_error > options.det_tol) {
    throw PathError("variational_path: |det - 1| = " + std::to_string(path.max_det_error) + " exceeds tolerance");
  }
  return path;
}

SymplecticPath iterate_path(const SymplecticPath& path, int n) {
  if (n < 1) throw std::invalid_argument("iterate_path: n must be >= 1");
  const std::size_t m = path.size() - 1;
  SymplecticPath out = make_grid(m * n);
  out.frame = path.frame;
  out.periods = path.periods * n;
  Mat2 power = Mat2::Identity();
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = (j == 0 ? 0 : 1); i <= m; ++i) out.phi.push_back(path.phi[i] * power);
    power = path.end() * power;
  }
  finish(out);
  return out;
}

SymplecticPath quotient_path(const SymplecticPath& path, int p) {
  const std::size_t m = path.size() - 1;
  if (p < 1 || m % std::size_t(p) != 0) throw std::invalid_argument("quotient_path: grid not divisible by p");
  SymplecticPath out = make_grid(m / p);
  out.frame = path.frame + "/Z" + std::to_string(p);
  out.periods = 1;
  for (std::size_t i = 0; i <= m / p; ++i) out.phi.push_back(path.phi[i]);
  finish(out);
  return out;
}

SymplecticPath rotation_path(double theta, int samples) {
  SymplecticPath out = make_grid(samples);
  for (double t : out.t) out.phi.push_back(Eigen::Rotation2Dd(2 * std::numbers::pi * theta * t).toRotationMatrix());
  finish(out);
  return out;
}

SymplecticPath path_from_potential(const std::function<Mat2(double)>& S, int samples, int substeps) {
  SymplecticPath out = make_grid(samples);
  const Mat2 j = standard_j();
  auto rhs = [&](double t, const Mat2& y) -> Mat2 { return j * S(t) * y; };
  Mat2 y = Mat2::Identity();
  out.phi.push_back(y);
  const double h = 1.0 / (double(samples) * substeps);
  double t = 0.0;
  for (int i = 0; i < samples; ++i) {
    for (int s = 0; s < substeps; ++s) {
      const Mat2 k1 = rhs(t, y);
      const Mat2 k2 = rhs(t + h / 2, y + h / 2 * k1);
      const Mat2 k3 = rhs(t + h / 2, y + h / 2 * k2);
      const Mat2 k4 = rhs(t + h, y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      t = (double(i) * substeps + s + 1) * h;
    }
    out.phi.push_back(y);
  }
  finish(out);
  return out;
}

}  // namespace lensreeb
