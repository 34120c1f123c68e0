#pragma once

// Conley-Zehnder indices of symplectic paths: a geometric engine (rotation
// interval of the path), a spectral engine (winding numbers of eigenvectors
// of the asymptotic operator), rotation numbers, iteration laws, and changes
// of trivialization.

#include "lensreeb/symplectic_path.hpp"

#include <stdexcept>
#include <vector>

namespace lensreeb {

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampling too coarse or an eigenvector vanishing somewhere.
class ResolutionError : public IndexError {
 public:
  using IndexError::IndexError;
};

/// Total turning of t -> phi(t) v, in full turns.
double angle_increment(const SymplecticPath& path, const Vec2& v);

struct GeometricIndex {
  int index = 0;
  double delta_min = 0.0;  // rotation interval J = [delta_min, delta_max]
  double delta_max = 0.0;
  bool degenerate = false;     // phi(1) has an eigenvalue within 1e-6 of 1
  bool near_boundary = false;  // an endpoint of J within 1e-6 of an integer
};

/// With J_eps = J - 1e-9: index 2k if an integer k lies in J_eps, 2k - 1
/// if J_eps sits inside (k - 1, k).  The interval is found from a fan of
/// directions in [0, pi) refined by golden-section search.
GeometricIndex geometric_index(const SymplecticPath& path, int fan = 720);

enum class MonodromyKind { Elliptic, Hyperbolic, Parabolic };
const char* to_string(MonodromyKind kind);

struct RotationNumber {
  double rho = 0.0;
  MonodromyKind kind = MonodromyKind::Elliptic;
};

/// Rotation number of the path (per unit parameter), i.e. lim theta_v(n) /
/// 2 pi n of its periodic continuation.  Elliptic endpoints: the turning
/// averaged over directions equidistributed for phi(1); otherwise the
/// turning of a real eigenvector.
RotationNumber rotation_number(const SymplecticPath& path);
/// Rotation number of the n-fold iterate.
RotationNumber rotation_number(const SymplecticPath& path, int n_periods);

/// S(t) = -J phi'(t) phi(t)^{-1} by fourth-order finite differences on the
/// path grid (symmetrized).  `defect`, when given, receives the largest
/// relative asymmetry before symmetrization.
std::vector<Mat2> path_to_symmetric_potential(const SymplecticPath& path, double* defect = nullptr);

struct SpectralIndex {
  int index = 0;
  double eta_negative = 0.0;   // largest eigenvalue < 0
  double eta_nonnegative = 0.0;
  int winding_negative = 0;
  int winding_nonnegative = 0;
  bool degenerate = false;     // an eigenvalue within 1e-6 of 0
  /// Every winding k with |k| <= 5 carries exactly two eigenvalues of the
  /// computed window.
  bool windings_consistent = false;
  std::vector<std::pair<double, int>> spectrum;  // (eigenvalue, winding) in the window
};

/// Index of L_S = -J d/dt - S on 1-periodic loops, from samples S(j/N),
/// j = 0..N-1, using Fourier modes |k| <= n_modes / 2 - 1 (N >= n_modes).
/// Eigenvalues >= -1e-12 count as non-negative.
SpectralIndex spectral_index(const std::vector<Mat2>& S, int n_modes = 512);
/// Same, with S obtained from the path.
SpectralIndex spectral_index(const SymplecticPath& path, int n_modes = 512);

/// Elliptic: 2 floor(n rho) + 1 (n rho must not be an integer); otherwise
/// 2 n rho (2 rho must be an integer).
int iterate_index(double rho, MonodromyKind kind, int n);

/// Index in the class beta from the index in beta' and w = wind(beta', beta):
/// mu(beta) = mu(beta') + 2 w.
int shift_class(int index, int w);

/// Winding of `section` relative to the non-vanishing `reference`, both
/// complex-valued on a closed loop (the last sample precedes the first).
int winding(const std::vector<Complex>& section, const std::vector<Complex>& reference);
/// Winding of a section of xi along a loop in the given frames.
int winding(const std::vector<TangentVector>& section, const std::vector<FramePair>& frames);

/// The sections Z(t) = -e^{-2 pi i (p-1) t} and Z1(t) = -e^{-2 pi i t} of the
/// z2-line along the z1-circle t -> e^{2 pi i t}.  Z is Z_p-equivariant for
/// g_{p,1}: Z(t + 1/p) = e^{2 pi i/p} Z(t).  wind(Z, Z1) = 2 - p.
struct EquivariantFrame {
  int p = 0;
  std::vector<double> t;  // t_j = j / samples
  std::vector<Complex> z;
  std::vector<Complex> z1;

  static Complex section(int p, double t);
  static Complex reference(double t);
  /// max_j |Z(t_j + 1/p) - e^{2 pi i/p} Z(t_j)|.
  double equivariance_residual() const;
};
EquivariantFrame equivariant_frame(int p, int samples = 1024);

/// The section Z transported to the z1-circle of the ellipsoid, whose Reeb
/// flow runs clockwise in z1: the equivariant section of xi along P1.
std::function<TangentVector(const PhasePoint&)> equivariant_section(int p);

/// Geometric index of the n-fold iterate in the disk class; throws
/// IndexError when the iterate is degenerate.
int disk_class_index(const PeriodicOrbit& orbit, const SpanningDisk& disk, int n, const PathOptions& options = {});

}  // namespace lensreeb
