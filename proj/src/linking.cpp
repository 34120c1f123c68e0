#include "lensreeb/linking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lensreeb {

namespace {

constexpr double kPi = std::numbers::pi;

// Signed solid angle subtended by segment pair (a0 a1), (b0 b1), in units of
// 4 pi: the exact Gauss integral over the two segments.
double segment_pair(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 r13 = b0 - a0, r14 = b1 - a0, r23 = b0 - a1, r24 = b1 - a1;
  Vec3 n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (Vec3& v : n) {
    const double len = v.norm();
    if (len < 1e-300) return 0.0;  // coplanar configuration contributes nothing
    v /= len;
  }
  double omega = 0.0;
  for (int i = 0; i < 4; ++i) omega += std::asin(std::clamp(n[i].dot(n[(i + 1) % 4]), -1.0, 1.0));
  const double s = (b1 - b0).cross(a1 - a0).dot(r13);
  if (s == 0.0) return 0.0;
  return (s > 0 ? omega : -omega) / (4 * kPi);
}

}  // namespace

ClosedCurve ClosedCurve::sample(const std::function<PhasePoint(double)>& f, int n) {
  if (n < 3) throw std::invalid_argument("ClosedCurve::sample: need at least 3 samples");
  ClosedCurve c;
  c.points.reserve(n);
  for (int j = 0; j < n; ++j) c.points.push_back(f(double(j) / n));
  return c;
}

void ClosedCurve::validate() const {
  if (points.size() < 3) throw LinkingError("curve: fewer than 3 samples");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(points[i].norm() - 1.0) > 1e-8) throw LinkingError("curve: sample off S^3");
    const double chord = (points[(i + 1) % points.size()].vec() - points[i].vec()).norm();
    if (chord >= 0.1) throw LinkingError("curve: chord length >= 0.1 (resample the curve)");
  }
}

ClosedCurve ClosedCurve::reversed() const {
  ClosedCurve c{points};
  std::reverse(c.points.begin(), c.points.end());
  return c;
}

LinkResult gauss_link(const ClosedCurve& a, const ClosedCurve& b, const LinkOptions& options) {
  a.validate();
  b.validate();
  LinkResult out;
  double sep = INFINITY;
  for (const PhasePoint& p : a.points) {
    for (const PhasePoint& q : b.points) sep = std::min(sep, (p.vec() - q.vec()).squaredNorm());
  }
  out.separation = std::sqrt(sep);
  if (out.separation <= options.min_separation) {
    throw LinkingError("gauss_link: curves too close (separation " + std::to_string(out.separation) + ")");
  }

  std::vector<PhasePoint> all = a.points;
  all.insert(all.end(), b.points.begin(), b.points.end());
  out.pole = options.pole ? *options.pole : choose_pole(all);
  const Stereographic chart(out.pole);
  out.orientation_sign = chart.orientation_sign();
  std::vector<Vec3> pa, pb;
  for (const PhasePoint& p : a.points) pa.push_back(chart.project(p));
  for (const PhasePoint& p : b.points) pb.push_back(chart.project(p));

  const std::size_t na = pa.size(), nb = pb.size();
  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nb; ++j) row += segment_pair(pa[i], pa[(i + 1) % na], pb[j], pb[(j + 1) % nb]);
    total += row;
  }
  out.segment_pairs = na * nb;
  out.raw = out.orientation_sign * total;
  out.value = int(std::lround(out.raw));
  if (std::abs(out.raw - out.value) > options.snap_tol) {
    throw LinkingError("gauss_link: result " + std::to_string(out.raw) + " is not near an integer (under-resolved)");
  }
  return out;
}

ClosedCurve xi_pushoff(const ClosedCurve& k, const std::vector<TangentVector>& section, double eps) {
  if (!(eps >= 1e-4 && eps <= 1e-2)) throw std::invalid_argument("xi_pushoff: eps must lie in [1e-4, 1e-2]");
  if (section.size() != k.size()) throw std::invalid_argument("xi_pushoff: one section value per sample required");
  ClosedCurve out;
  out.points.reserve(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Vec4 p = k.points[i].vec();
    Vec4 v = section[i] - section[i].dot(p) * p / p.squaredNorm();
    const double len = v.norm();
    if (len < 1e-10) throw LinkingError("xi_pushoff: section vanishes");
    v /= len;
    out.points.push_back(PhasePoint::from_vec(std::cos(eps) * p + std::sin(eps) * v));
  }
  double sep = INFINITY;
  for (const PhasePoint& p : out.points) {
    for (const PhasePoint& q : k.points) sep = std::min(sep, (p.vec() - q.vec()).norm());
  }
  if (sep < 0.5 * eps) throw LinkingError("xi_pushoff: pushoff meets the curve (eps too large for its curvature)");
  return out;
}

std::vector<TangentVector> disk_section(const ClosedCurve& k, const SpanningDisk& disk,
                                        const DiskFrameOptions& options) {
  auto frame = disk_frame(ellipsoid(1.0, 1.0), disk, options);
  std::vector<TangentVector> out;
  out.reserve(k.size());
  for (const PhasePoint& p : k.points) out.push_back(frame->frame(p).f1);
  return out;
}

SelfLinkResult self_linking(const ClosedCurve& k, const SpanningDisk& disk, const SelfLinkOptions& options) {
  k.validate();
  SelfLinkResult out;
  out.min_transversality = INFINITY;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Vec4 chord = k.points[(i + 1) % k.size()].vec() - k.points[i].vec();
    const PhasePoint mid = PhasePoint::from_vec(0.5 * (k.points[(i + 1) % k.size()].vec() + k.points[i].vec()));
    out.min_transversality = std::min(out.min_transversality, std::abs(liouville(mid, chord.normalized())));
  }
  if (out.min_transversality <= 1e-6) throw LinkingError("self_linking: curve is not transverse to xi");
  if (!disk.is_immersed()) throw LinkingError("self_linking: disk is not immersed");
  const ClosedCurve pushed = xi_pushoff(k, disk_section(k, disk, options.disk), options.eps);
  out.link = gauss_link(pushed, k, options.link);
  out.value = out.link.value;
  return out;
}

ClosedCurve hopf_fibre(const PhasePoint& p, int samples) {
  const double r = p.norm();
  if (r == 0.0) throw std::invalid_argument("hopf_fibre: zero point");
  const Complex z1 = p.z1() / r, z2 = p.z2() / r;
  return ClosedCurve::sample(
      [&](double t) {
        const Complex e = std::polar(1.0, -2 * kPi * t);
        return PhasePoint::from_z(e * z1, e * z2);
      },
      samples);
}

}  // namespace lensreeb
