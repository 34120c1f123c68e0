#pragma once

// Paths of 2x2 symplectic matrices: linearized Reeb flows along closed orbits
// written in a frame of xi, and synthetic paths for testing index engines.

#include "lensreeb/frames.hpp"
#include "lensreeb/orbits.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace lensreeb {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// phi sampled on the uniform grid t_i = i / (size - 1) of [0, 1], phi(0) = I.
struct SymplecticPath {
  std::vector<double> t;
  std::vector<Mat2> phi;
  std::string frame = "synthetic";
  int periods = 1;               // orbit periods covered by [0, 1]
  double max_det_error = 0.0;    // max |det phi - 1| over the samples

  std::size_t size() const { return phi.size(); }
  const Mat2& end() const { return phi.back(); }
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathOptions {
  int samples_per_period = 1024;
  double tol = 1e-12;            // integrator tolerance
  double det_tol = 1e-8;         // |det phi - 1| above this throws PathError
  double closure_tol = 1e-6;     // |x(nT) - x(0)| above this throws PathError
};

/// Linearized Reeb flow along n_periods of the orbit, projected by pi_lambda
/// and written in the frame: a = omega0(Phi v, f2(t)), b = omega0(f1(t), Phi v)
/// for v = f1(0), f2(0).  Time is rescaled so that one Reeb period is 1/n.
SymplecticPath variational_path(const PeriodicOrbit& orbit, FrameProvider& frame, int n_periods = 1,
                                const PathOptions& options = {});

/// phi_n(t) = phi(n t - j) phi(1)^j on [j/n, (j+1)/n].
SymplecticPath iterate_path(const SymplecticPath& path, int n);

/// The part of the path over [0, 1/p], rescaled to [0, 1].  Meaningful for
/// paths along p-fold covers written in a Z_p-equivariant frame, where it is
/// the path of the quotient orbit.  Requires (size - 1) divisible by p.
SymplecticPath quotient_path(const SymplecticPath& path, int p);

/// R(2 pi theta t).
SymplecticPath rotation_path(double theta, int samples = 1024);

/// Solution of phi' = J S(t) phi, phi(0) = I, J = [[0, -1], [1, 0]], by RK4
/// with `substeps` steps per sample.
SymplecticPath path_from_potential(const std::function<Mat2(double)>& S, int samples = 1024, int substeps = 8);

/// J = [[0, -1], [1, 0]].
Mat2 standard_j();

}  // namespace lensreeb
