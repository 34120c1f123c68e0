#pragma once

// Symplectic frames of the contact structure xi = ker lambda0 ∩ ker dH along
// closed Reeb orbits: the global frame, disk frames obtained by radial
// transport over an explicit spanning disk, and frames built from a given
// non-vanishing section.

#include "lensreeb/hamiltonian.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace lensreeb {

/// Unit normals spanning the Euclidean complement of xi_p.
std::pair<Vec4, Vec4> xi_normals(const HamiltonianModel& model, const PhasePoint& p);

/// Euclidean projection onto xi_p.
TangentVector project_to_xi(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& v);

/// pi_lambda(v) = v - lambda0(v) X_lambda.
TangentVector reeb_projection(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& v);

/// Completes a nonzero f1 in xi_p to a frame: f2 is the vector of xi_p
/// Euclidean-orthogonal to f1 with omega0(f1, f2) = 1.
FramePair complete_frame(const HamiltonianModel& model, const PhasePoint& p, const TangentVector& f1);

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parametrized spanning disk u: closed unit disk -> level set.
class SpanningDisk {
 public:
  using Map = std::function<PhasePoint(Complex)>;
  SpanningDisk(Map u, std::string label = "disk") : u_(std::move(u)), label_(std::move(label)) {}

  PhasePoint operator()(Complex z) const { return u_(z); }
  PhasePoint boundary(double theta) const;
  const std::string& label() const { return label_; }

  /// Rank-2 check of the Jacobian on an interior polar grid.
  bool is_immersed(int radial = 16, int angular = 64) const;

 private:
  Map u_;
  std::string label_;
};

/// Disk u(z) = (r1 z, r2 sqrt(1 - |z|^2)) spanning the z1-circle of the ellipsoid.
SpanningDisk ellipsoid_disk_p1(double r1, double r2);
/// Disk u(z) = (r1 sqrt(1 - |z|^2), r2 z) spanning the z2-circle.
SpanningDisk ellipsoid_disk_p2(double r1, double r2);

/// A rule assigning a symplectic frame of xi to points of an orbit.  Frame
/// providers may carry tracking state and must be fed points in orbit order.
class FrameProvider {
 public:
  virtual ~FrameProvider() = default;
  virtual FramePair frame(const PhasePoint& x) = 0;
  virtual std::string label() const = 0;
  virtual void reset() {}
};

/// Global frame: f1 = (-conj z2, conj z1) projected symplectically to xi_p.
std::unique_ptr<FrameProvider> global_frame(const HamiltonianModel& model);

struct DiskFrameOptions {
  int radial_steps = 64;
  double boundary_tol = 1e-6;  // allowed |u(e^{i theta}) - x|
  int search_samples = 720;
};

/// Disk class: a frame at u(0) transported along radii with re-projection
/// into xi at every step.  Points are matched to the disk boundary by
/// tracking theta; a mismatch above boundary_tol throws FrameError.
/// A nonzero twist w rotates the frame by 2 pi w s, s in [0, 1) the position
/// along the boundary circle measured in the direction of the orbit.
std::unique_ptr<FrameProvider> disk_frame(const HamiltonianModel& model, SpanningDisk disk, DiskFrameOptions options = {},
                                          int twist = 0);

/// Frame whose first vector is the (xi-projected) section value at x.
std::unique_ptr<FrameProvider> section_frame(const HamiltonianModel& model,
                                             std::function<TangentVector(const PhasePoint&)> section, std::string label);

}  // namespace lensreeb
