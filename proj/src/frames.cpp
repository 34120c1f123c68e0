#include "lensreeb/frames.hpp"

#include <cmath>
#include <numbers>

namespace lensreeb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Below this norm a projected frame vector is considered degenerate.
constexpr double kDegenerateNorm = 1e-3;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

}  // namespace

std::pair<Vec4, Vec4> xi_normals(const HamiltonianModel& model, const PhasePoint& p) {
  Vec4 n1 = liouville_covector(p);
  const double l = n1.norm();
  if (l < 1e-14) throw FrameError("frames: lambda0 vanishes at the base point");
  n1 /= l;
  Vec4 n2 = model.gradient(p);
  n2 -= n2.dot(n1) * n1;
  const double g = n2.norm();
  if (g < 1e-10) throw FrameError("frames: dH is parallel to lambda0; xi is not defined");
  return {n1, n2 / g};
}

TangentVector project_to_xi(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& v) {
  const auto [n1, n2] = xi_normals(model, p);
  return v - v.dot(n1) * n1 - v.dot(n2) * n2;
}

TangentVector reeb_projection(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& v) {
  return v - liouville(p, v) * reeb_field(model, p);
}

FramePair complete_frame(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& f1_in) {
  const auto [n1, n2] = xi_normals(model, p);
  TangentVector f1 = f1_in - f1_in.dot(n1) * n1 - f1_in.dot(n2) * n2;
  const double len = f1.norm();
  if (len < kDegenerateNorm * std::max(1.0, f1_in.norm())) throw FrameError("frames: first frame vector leaves xi");
  f1 /= len;
  // The remaining direction of xi, from the basis vector with the largest residual.
  TangentVector best = TangentVector::Zero();
  for (int i = 0; i < 4; ++i) {
    TangentVector e = TangentVector::Unit(i);
    e -= e.dot(n1) * n1 + e.dot(n2) * n2 + e.dot(f1) * f1;
    if (e.norm() > best.norm()) best = e;
  }
  best.normalize();
  const double w = symplectic_form(f1, best);
  if (std::abs(w) < 1e-8) throw FrameError("frames: xi is not symplectic at the base point");
  return {p, f1, best / w};
}

PhasePoint SpanningDisk::boundary(double theta) const { return u_(std::polar(1.0, theta)); }

bool SpanningDisk::is_immersed(int radial, int angular) const {
  const double h = 1e-6;
  for (int i = 1; i < radial; ++i) {
    const double r = double(i) / radial;
    for (int j = 0; j < angular; ++j) {
      const Complex z = std::polar(r, kTwoPi * j / angular);
      const Vec4 du = (u_(z + h).vec() - u_(z - h).vec()) / (2 * h);
      const Vec4 dv = (u_(z + Complex(0, h)).vec() - u_(z - Complex(0, h)).vec()) / (2 * h);
      const double gram = du.squaredNorm() * dv.squaredNorm() - std::pow(du.dot(dv), 2);
      if (!(gram > 1e-10)) return false;
    }
  }
  return true;
}

SpanningDisk ellipsoid_disk_p1(double r1, double r2) {
  return SpanningDisk(
      [r1, r2](Complex z) { return PhasePoint::from_z(r1 * z, r2 * std::sqrt(std::max(0.0, 1.0 - std::norm(z)))); },
      "ellipsoid-p1");
}

SpanningDisk ellipsoid_disk_p2(double r1, double r2) {
  return SpanningDisk(
      [r1, r2](Complex z) { return PhasePoint::from_z(r1 * std::sqrt(std::max(0.0, 1.0 - std::norm(z))), r2 * z); },
      "ellipsoid-p2");
}

namespace {

class GlobalFrame final : public FrameProvider {
 public:
  explicit GlobalFrame(const HamiltonianModel& model) : model_(model) {}

  FramePair frame(const PhasePoint& x) override {
    // Symplectic projection onto xi = span{x, X_H}^omega.
    const TangentVector v = global_f1(x);
    const TangentVector xh = hamiltonian_field(model_, x);
    const TangentVector xv = x.vec();
    const double two_h = symplectic_form(xv, xh);
    if (std::abs(two_h) < kStarshapedThreshold) throw FrameError("frames: level not transverse to the radial field");
    const double beta = symplectic_form(xv, v) / two_h;
    const double alpha = -symplectic_form(xh, v) / two_h;
    return complete_frame(model_, x, v - alpha * xv - beta * xh);
  }
  std::string label() const override { return "global"; }

 private:
  HamiltonianModel model_;
};

class DiskFrame final : public FrameProvider {
 public:
  DiskFrame(const HamiltonianModel& model, SpanningDisk disk, DiskFrameOptions options, int twist)
      : model_(model), disk_(std::move(disk)), options_(options), twist_(twist) {
    if (options_.radial_steps < 2 || options_.search_samples < 8) throw std::invalid_argument("disk_frame: bad options");
    // Reference vector at the centre: the coordinate direction best inside xi.
    const PhasePoint c = disk_(0.0);
    double best = -1;
    for (int i = 0; i < 4; ++i) {
      const TangentVector e = project_to_xi(model_, c, TangentVector::Unit(i));
      if (e.norm() > best) {
        best = e.norm();
        centre_f1_ = e.normalized();
      }
    }
  }

  FramePair frame(const PhasePoint& x) override {
    const double theta = locate(x);
    TangentVector f = centre_f1_;
    for (int k = 1; k <= options_.radial_steps; ++k) {
      const PhasePoint q = disk_(std::polar(double(k) / options_.radial_steps, theta));
      f = project_to_xi(model_, q, f);
      const double n = f.norm();
      if (n < kDegenerateNorm) throw FrameError("frames: disk transport degenerates (xi turns too fast along a radius)");
      f /= n;
    }
    // Transport ends at u(e^{i theta}); carry the vector to x itself.
    FramePair fr = complete_frame(model_, x, f);
    if (twist_ != 0) {
      const Vec4 tangent = (disk_.boundary(theta + 1e-6).vec() - disk_.boundary(theta - 1e-6).vec());
      const double dir = tangent.dot(reeb_field(model_, x)) >= 0 ? 1.0 : -1.0;
      const double a = twist_ * dir * theta;
      const TangentVector f1 = std::cos(a) * fr.f1 + std::sin(a) * fr.f2;
      const TangentVector f2 = -std::sin(a) * fr.f1 + std::cos(a) * fr.f2;
      fr.f1 = f1;
      fr.f2 = f2;
    }
    return fr;
  }

  std::string label() const override {
    return twist_ == 0 ? "disk:" + disk_.label() : "disk:" + disk_.label() + "+twist(" + std::to_string(twist_) + ")";
  }
  void reset() override { tracking_ = false; }

 private:
  double mismatch(double theta, const PhasePoint& x) const { return (disk_.boundary(theta).vec() - x.vec()).norm(); }

  double refine(double lo, double hi, const PhasePoint& x) const {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    double fa = mismatch(a, x), fb = mismatch(b, x);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (fa < fb) {
        hi = b, b = a, fb = fa;
        a = hi - g * (hi - lo), fa = mismatch(a, x);
      } else {
        lo = a, a = b, fa = fb;
        b = lo + g * (hi - lo), fb = mismatch(b, x);
      }
    }
    return 0.5 * (lo + hi);
  }

  double locate(const PhasePoint& x) {
    const double step = kTwoPi / options_.search_samples;
    double theta = 0.0;
    if (tracking_) {
      theta = refine(theta_ - 4 * step, theta_ + 4 * step, x);
    }
    if (!tracking_ || mismatch(theta, x) > options_.boundary_tol) {
      int best = 0;
      double bd = mismatch(0.0, x);
      for (int i = 1; i < options_.search_samples; ++i) {
        const double d = mismatch(i * step, x);
        if (d < bd) bd = d, best = i;
      }
      theta = refine((best - 1) * step, (best + 1) * step, x);
    }
    const double d = mismatch(theta, x);
    if (d > options_.boundary_tol) {
      throw FrameError("frames: orbit point is " + std::to_string(d) + " away from the disk boundary");
    }
    theta_ = wrap_angle(theta);
    tracking_ = true;
    return theta_;
  }

  HamiltonianModel model_;
  SpanningDisk disk_;
  DiskFrameOptions options_;
  int twist_;
  TangentVector centre_f1_ = TangentVector::Zero();
  bool tracking_ = false;
  double theta_ = 0.0;
};

class SectionFrame final : public FrameProvider {
 public:
  SectionFrame(const HamiltonianModel& model, std::function<TangentVector(const PhasePoint&)> section, std::string label)
      : model_(model), section_(std::move(section)), label_(std::move(label)) {}
  FramePair frame(const PhasePoint& x) override { return complete_frame(model_, x, section_(x)); }
  std::string label() const override { return label_; }

 private:
  HamiltonianModel model_;
  std::function<TangentVector(const PhasePoint&)> section_;
  std::string label_;
};

}  // namespace

std::unique_ptr<FrameProvider> global_frame(const HamiltonianModel& model) {
  return std::make_unique<GlobalFrame>(model);
}

std::unique_ptr<FrameProvider> disk_frame(const HamiltonianModel& model, SpanningDisk disk, DiskFrameOptions options,
                                          int twist) {
  return std::make_unique<DiskFrame>(model, std::move(disk), options, twist);
}

std::unique_ptr<FrameProvider> section_frame(const HamiltonianModel& model,
                                             std::function<TangentVector(const PhasePoint&)> section, std::string label) {
  return std::make_unique<SectionFrame>(model, std::move(section), std::move(label));
}

}  // namespace lensreeb
