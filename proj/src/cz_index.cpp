#include "lensreeb/cz_index.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lensreeb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = 1e-9;            // shift of the rotation interval
constexpr double kFlag = 1e-6;           // degenerate / near-boundary flags
constexpr double kNonNegative = -1e-12;  // eigenvalues above count as >= 0

double turn_of(const Vec2& a, const Vec2& b) {
  // Signed angle from a to b in (-pi, pi].
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

Vec2 direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

template <class F>
double golden_extremum(F&& f, double lo, double hi, bool maximize) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto val = [&](double x) { return maximize ? -f(x) : f(x); };
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = val(a), fb = val(b);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      hi = b, b = a, fb = fa;
      a = hi - g * (hi - lo), fa = val(a);
    } else {
      lo = a, a = b, fa = fb;
      b = lo + g * (hi - lo), fb = val(b);
    }
  }
  return f(0.5 * (lo + hi));
}

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

int winding_of_loop(const std::vector<Complex>& values) {
  const std::size_t n = values.size();
  if (n < 3) throw ResolutionError("winding: need at least three samples");
  double peak = 0.0;
  for (const Complex& v : values) peak = std::max(peak, std::abs(v));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = values[i], b = values[(i + 1) % n];
    if (std::abs(a) <= 1e-12 * peak || peak == 0.0) throw ResolutionError("winding: section vanishes");
    const double d = std::arg(b / a);
    if (std::abs(d) > kPi / 2) throw ResolutionError("winding: sampling too coarse (turn > pi/2 between samples)");
    total += d;
  }
  return int(std::lround(total / kTwoPi));
}

}  // namespace

double angle_increment(const SymplecticPath& path, const Vec2& v) {
  double total = 0.0;
  Vec2 prev = path.phi.front() * v;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2 cur = path.phi[i] * v;
    const double d = turn_of(prev, cur);
    if (std::abs(d) > kPi / 2) throw ResolutionError("angle_increment: sampling too coarse (turn > pi/2 between samples)");
    total += d;
    prev = cur;
  }
  return total / kTwoPi;
}

GeometricIndex geometric_index(const SymplecticPath& path, int fan) {
  if (fan < 8) throw std::invalid_argument("geometric_index: fan too small");
  if (path.size() < 3) throw ResolutionError("geometric_index: path too short");
  auto delta = [&](double a) { return angle_increment(path, direction(a)); };
  std::vector<double> vals(fan);
  const double step = kPi / fan;
  for (int j = 0; j < fan; ++j) vals[j] = delta(j * step);
  const int jmin = int(std::min_element(vals.begin(), vals.end()) - vals.begin());
  const int jmax = int(std::max_element(vals.begin(), vals.end()) - vals.begin());

  GeometricIndex out;
  out.delta_min = std::min(vals[jmin], golden_extremum(delta, (jmin - 1) * step, (jmin + 1) * step, false));
  out.delta_max = std::max(vals[jmax], golden_extremum(delta, (jmax - 1) * step, (jmax + 1) * step, true));

  const double lo = out.delta_min - kEps, hi = out.delta_max - kEps;
  const double k = std::floor(hi);
  out.index = k > lo ? int(2 * k) : int(2 * k + 1);

  const Mat2& m = path.end();
  const double tr = m.trace();
  const Complex disc = std::sqrt(Complex(tr * tr - 4.0 * m.determinant(), 0.0));
  const Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  out.degenerate = std::abs(l1 - 1.0) < kFlag || std::abs(l2 - 1.0) < kFlag;
  out.near_boundary = distance_to_integer(out.delta_min) < kFlag || distance_to_integer(out.delta_max) < kFlag;
  return out;
}

const char* to_string(MonodromyKind kind) {
  switch (kind) {
    case MonodromyKind::Elliptic: return "elliptic";
    case MonodromyKind::Hyperbolic: return "hyperbolic";
    case MonodromyKind::Parabolic: return "parabolic";
  }
  return "?";
}

RotationNumber rotation_number(const SymplecticPath& path) {
  const Mat2& m = path.end();
  const double tr = m.trace();
  RotationNumber out;
  if (std::abs(tr) < 2.0 - 1e-12) {
    out.kind = MonodromyKind::Elliptic;
    Eigen::EigenSolver<Mat2> es(m);
    const Eigen::Vector2cd w = es.eigenvectors().col(0);
    Mat2 p;
    p.col(0) = w.real();
    p.col(1) = w.imag();
    // phi(1) P = P R with R a rotation, so phi(1) P u(s) = P u(s + sigma)
    // and the asymptotic turning is deg(P) (sigma + k).  The integer k is
    // read off the turning of one direction; the lift of s -> arg P u(s) is
    // exact because P u(s + 1/2) = -P u(s).
    const double deg = p.determinant() > 0 ? 1.0 : -1.0;
    auto u = [](double s) { return direction(2 * kPi * s); };
    auto lift = [&](double x) {  // arg P u(x) - arg P u(0), in turns
      const double m = std::floor(2 * x);
      const Vec2 a = p * u(m / 2), b = p * u(x);
      double t = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
      if (deg > 0 && t < 0) t += 2 * kPi;
      if (deg < 0 && t > 0) t -= 2 * kPi;
      return deg * m / 2 + t / (2 * kPi);
    };
    const Vec2 image = p.inverse() * (m * p.col(0));
    double sigma = std::atan2(image.y(), image.x()) / (2 * kPi);
    if (sigma < 0) sigma += 1;
    const double turned = angle_increment(path, p.col(0));
    const double k = std::round((turned - lift(sigma)) * deg);
    out.rho = deg * (sigma + k);
    return out;
  }
  out.kind = std::abs(tr) > 2.0 + 1e-12 ? MonodromyKind::Hyperbolic : MonodromyKind::Parabolic;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0));
  const double lambda = 0.5 * (tr + (tr >= 0 ? disc : -disc));
  Vec2 a(m(0, 1), lambda - m(0, 0)), b(lambda - m(1, 1), m(1, 0));
  Vec2 v = a.norm() > b.norm() ? a : b;
  if (v.norm() < 1e-14) v = Vec2(1, 0);  // phi(1) = +-I
  out.rho = angle_increment(path, v.normalized());
  return out;
}

RotationNumber rotation_number(const SymplecticPath& path, int n_periods) {
  return rotation_number(iterate_path(path, n_periods));
}

std::vector<Mat2> path_to_symmetric_potential(const SymplecticPath& path, double* defect) {
  const std::size_t n = path.size();
  if (n < 6) throw ResolutionError("path_to_symmetric_potential: path too short");
  const double h = 1.0 / double(n - 1);
  const Mat2 j = standard_j();
  std::vector<Mat2> out(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Mat2 d;
    const auto& f = path.phi;
    if (i >= 2 && i + 2 < n) {
      d = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    } else if (i < 2) {
      d = (-25 * f[i] + 48 * f[i + 1] - 36 * f[i + 2] + 16 * f[i + 3] - 3 * f[i + 4]) / (12 * h);
    } else {
      d = (25 * f[i] - 48 * f[i - 1] + 36 * f[i - 2] - 16 * f[i - 3] + 3 * f[i - 4]) / (12 * h);
    }
    const Mat2 s = -j * d * f[i].inverse();
    worst = std::max(worst, (s - s.transpose()).norm() / std::max(1.0, s.norm()));
    out[i] = 0.5 * (s + s.transpose());
  }
  if (defect) *defect = worst;
  return out;
}

SpectralIndex spectral_index(const std::vector<Mat2>& S, int n_modes) {
  const int n = int(S.size());
  if (n_modes < 16 || n_modes % 2 != 0) throw std::invalid_argument("spectral_index: n_modes must be even and >= 16");
  if (n < n_modes) throw ResolutionError("spectral_index: fewer samples than modes");
  const int K = n_modes / 2 - 1;
  const int M = 2 * K;  // largest coefficient index needed

  // S e = alpha e + beta conj(e) in complex notation e = e1 + i e2.
  std::vector<Complex> alpha_hat(2 * M + 1), beta_hat(2 * M + 1);
  double s_norm = 0.0;
  for (const Mat2& s : S) s_norm = std::max(s_norm, s.operatorNorm());
  for (int m = -M; m <= M; ++m) {
    if (2 * std::abs(m) >= n) continue;
    Complex a = 0, b = 0;
    for (int t = 0; t < n; ++t) {
      const Complex e = std::polar(1.0, -kTwoPi * double(m) * t / n);
      const Mat2& s = S[t];
      a += 0.5 * (s(0, 0) + s(1, 1)) * e;
      b += Complex(0.5 * (s(0, 0) - s(1, 1)), s(0, 1)) * e;
    }
    alpha_hat[m + M] = a / double(n);
    beta_hat[m + M] = b / double(n);
  }

  // Real unknowns (Re c_k, Im c_k), k = -K..K; L = diag(2 pi k) - S.
  const int dim = 2 * (2 * K + 1);
  std::vector<double> L(std::size_t(dim) * dim, 0.0);  // column-major
  auto at = [&](int r, int c) -> double& { return L[std::size_t(c) * dim + r]; };
  for (int k = -K; k <= K; ++k) {
    const int r = 2 * (k + K);
    at(r, r) += kTwoPi * k;
    at(r + 1, r + 1) += kTwoPi * k;
    for (int m = -K; m <= K; ++m) {
      const int c = 2 * (m + K);
      const Complex a = alpha_hat[k - m + M], b = beta_hat[k + m + M];
      at(r, c) -= a.real() + b.real();
      at(r, c + 1) -= -a.imag() + b.imag();
      at(r + 1, c) -= a.imag() + b.imag();
      at(r + 1, c + 1) -= a.real() - b.real();
    }
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = r + 1; c < dim; ++c) {
      const double v = 0.5 * (at(r, c) + at(c, r));
      at(r, c) = at(c, r) = v;
    }
  }

  const double window = kTwoPi * 6 + s_norm;
  std::vector<double> w(dim), z(std::size_t(dim) * dim);
  std::vector<lapack_int> support(2 * std::size_t(dim));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'U', dim, L.data(), dim, -window, window, 0, 0,
                                         0.0, &found, w.data(), z.data(), dim, support.data());
  if (info != 0) throw IndexError("spectral_index: eigensolver failed (info " + std::to_string(info) + ")");

  SpectralIndex out;
  const int grid0 = std::max(1024, 4 * (2 * K + 1));
  for (lapack_int e = 0; e < found; ++e) {
    const double* x = z.data() + std::size_t(e) * dim;
    // Winding of e(t) = sum c_k e^{2 pi i k t}, refining the grid if needed.
    int wind = 0;
    for (int grid = grid0;; grid *= 2) {
      std::vector<Complex> vals(grid);
      for (int g = 0; g < grid; ++g) {
        const Complex step = std::polar(1.0, kTwoPi * g / grid);
        Complex phase = std::pow(step, -K), acc = 0;
        for (int k = -K; k <= K; ++k) {
          acc += Complex(x[2 * (k + K)], x[2 * (k + K) + 1]) * phase;
          phase *= step;
        }
        vals[g] = acc;
      }
      try {
        wind = winding_of_loop(vals);
        break;
      } catch (const ResolutionError&) {
        if (grid >= 64 * grid0) throw;
      }
    }
    out.spectrum.emplace_back(w[e], wind);
  }

  auto neg = std::find_if(out.spectrum.rbegin(), out.spectrum.rend(), [](auto& p) { return p.first < kNonNegative; });
  auto pos = std::find_if(out.spectrum.begin(), out.spectrum.end(), [](auto& p) { return p.first >= kNonNegative; });
  if (neg == out.spectrum.rend() || pos == out.spectrum.end()) throw IndexError("spectral_index: empty spectral window");
  out.eta_negative = neg->first;
  out.winding_negative = neg->second;
  out.eta_nonnegative = pos->first;
  out.winding_nonnegative = pos->second;
  out.index = out.winding_negative + out.winding_nonnegative;
  out.degenerate = std::abs(out.eta_nonnegative) < kFlag;

  out.windings_consistent = true;
  for (int k = -5; k <= 5; ++k) {
    const auto c = std::count_if(out.spectrum.begin(), out.spectrum.end(), [k](auto& p) { return p.second == k; });
    if (c != 2) out.windings_consistent = false;
  }
  return out;
}

SpectralIndex spectral_index(const SymplecticPath& path, int n_modes) {
  auto s = path_to_symmetric_potential(path);
  s.pop_back();  // periodic: S(1) = S(0)
  return spectral_index(s, n_modes);
}

int iterate_index(double rho, MonodromyKind kind, int n) {
  if (n < 1) throw std::invalid_argument("iterate_index: n must be >= 1");
  const double x = n * rho;
  if (kind == MonodromyKind::Elliptic) {
    if (distance_to_integer(x) < kEps) throw IndexError("iterate_index: iterate is degenerate (n rho is an integer)");
    return int(2 * std::floor(x) + 1);
  }
  if (distance_to_integer(2 * rho) > 1e-6) {
    throw IndexError("iterate_index: rotation number of a hyperbolic path must be a half-integer");
  }
  return int(std::lround(2 * x));
}

int shift_class(int index, int w) { return index + 2 * w; }

int winding(const std::vector<Complex>& section, const std::vector<Complex>& reference) {
  if (section.size() != reference.size()) throw std::invalid_argument("winding: sample counts differ");
  std::vector<Complex> ratio(section.size());
  for (std::size_t i = 0; i < section.size(); ++i) {
    if (std::abs(reference[i]) < 1e-300) throw ResolutionError("winding: reference vanishes");
    ratio[i] = section[i] / reference[i];
  }
  return winding_of_loop(ratio);
}

int winding(const std::vector<TangentVector>& section, const std::vector<FramePair>& frames) {
  if (section.size() != frames.size()) throw std::invalid_argument("winding: sample counts differ");
  std::vector<Complex> c(section.size());
  for (std::size_t i = 0; i < section.size(); ++i) {
    c[i] = {symplectic_form(section[i], frames[i].f2), symplectic_form(frames[i].f1, section[i])};
  }
  return winding_of_loop(c);
}

Complex EquivariantFrame::section(int p, double t) { return -std::polar(1.0, -kTwoPi * (p - 1) * t); }
Complex EquivariantFrame::reference(double t) { return -std::polar(1.0, -kTwoPi * t); }

double EquivariantFrame::equivariance_residual() const {
  double worst = 0.0;
  const Complex g = std::polar(1.0, kTwoPi / p);
  for (double s : t) worst = std::max(worst, std::abs(section(p, s + 1.0 / p) - g * section(p, s)));
  return worst;
}

EquivariantFrame equivariant_frame(int p, int samples) {
  if (p < 2) throw std::invalid_argument("equivariant_frame: p must be >= 2");
  if (samples < 8) throw std::invalid_argument("equivariant_frame: too few samples");
  EquivariantFrame out;
  out.p = p;
  for (int j = 0; j < samples; ++j) {
    const double t = double(j) / samples;
    out.t.push_back(t);
    out.z.push_back(EquivariantFrame::section(p, t));
    out.z1.push_back(EquivariantFrame::reference(t));
  }
  return out;
}

std::function<TangentVector(const PhasePoint&)> equivariant_section(int p) {
  if (p < 2) throw std::invalid_argument("equivariant_section: p must be >= 2");
  // Complex conjugation intertwines the counterclockwise picture with the
  // clockwise flow used here and preserves lambda0, so it carries Z along.
  return [p](const PhasePoint& x) {
    const double s = -std::arg(x.z1()) / kTwoPi;
    return tangent_from_z(0.0, std::conj(EquivariantFrame::section(p, s)));
  };
}

int disk_class_index(const PeriodicOrbit& orbit, const SpanningDisk& disk, int n, const PathOptions& options) {
  auto frame = disk_frame(orbit.model, disk);
  const SymplecticPath path = variational_path(orbit, *frame, n, options);
  const GeometricIndex g = geometric_index(path);
  if (g.degenerate) throw IndexError("disk_class_index: iterate " + std::to_string(n) + " is degenerate");
  return g.index;
}

}  // namespace lensreeb
