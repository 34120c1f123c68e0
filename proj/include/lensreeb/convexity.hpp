#pragma once

// Strict convexity of mechanical energy levels H = |y|^2/2 + V(x): the level
// S_E is strictly convex iff G_E > 0 on the Hill region B_E, where
//
//   G_E = 2(E - V)(V11 V22 - V12^2) + V11 V2^2 + V22 V1^2 - 2 V1 V2 V12.

#include "lensreeb/interval.hpp"
#include "lensreeb/polynomial.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lensreeb {

using Point2 = Eigen::Vector2d;

double g_e(const PolynomialPotential& potential, double energy, const Point2& x);
double g_e(const PotentialJet& jet, double energy, const Point2& x);

/// Interval enclosure of G_E over the box x1 in X1, x2 in X2.
Interval g_e_enclosure(const PotentialJet& jet, double energy, Interval x1, Interval x2);

struct Box2 {
  double x1_lo = 0.0, x1_hi = 0.0;
  double x2_lo = 0.0, x2_hi = 0.0;
};

class UnboundedRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HillOptions {
  int resolution = 512;           // grid points per axis
  double half_width = 2.0;        // search box [-R, R]^2
  double boundary_tol = 1e-8;     // |V - E| at every returned vertex
  double chord_tol = 1e-9;        // max deviation of a chord midpoint from the curve
};

/// Component of {V <= E} containing the origin, with its boundary loops.
class HillRegion {
 public:
  HillRegion(double energy, std::vector<std::vector<Point2>> loops, Box2 bbox, PolynomialPotential potential);

  double energy() const { return energy_; }
  const std::vector<std::vector<Point2>>& loops() const { return loops_; }
  const Box2& bounding_box() const { return bbox_; }

  /// V(x) <= E and x lies inside the traced boundary (even-odd rule).
  bool contains(const Point2& x) const;
  bool inside_boundary(const Point2& x) const;

 private:
  double energy_;
  std::vector<std::vector<Point2>> loops_;
  Box2 bbox_;
  PolynomialPotential potential_;
};

/// Traces the boundary of the origin component of {V < E} on a cell-centred
/// grid by flood fill and marching squares, then projects every vertex onto
/// V = E with Newton steps and refines chords adaptively.
/// Throws std::invalid_argument if E <= V(0) or resolution < 32, and
/// UnboundedRegionError if the component reaches the edge of the search box.
HillRegion hill_region(const PolynomialPotential& potential, double energy, const HillOptions& options = {});
inline HillRegion hill_region(const PolynomialPotential& potential, double energy, int resolution) {
  HillOptions o;
  o.resolution = resolution;
  return hill_region(potential, energy, o);
}

enum class CertificateStatus { ProvenPositive, Counterexample, Inconclusive };
std::string to_string(CertificateStatus s);

struct CertifiedCell {
  Box2 box;
  Interval g;  // enclosure of G_E over the box
};

struct Certificate {
  CertificateStatus status = CertificateStatus::Inconclusive;
  double energy = 0.0;
  /// Minimum of the certified lower bounds of G_E over accepted cells.
  double lower_bound = 0.0;
  std::size_t accepted_cells = 0;
  std::size_t discarded_cells = 0;
  std::size_t unresolved_cells = 0;
  int max_depth_reached = 0;
  std::optional<Point2> witness;      // counterexample point
  std::vector<CertifiedCell> cells;   // accepted cells, when requested
};

struct CertifyOptions {
  int max_depth = 16;
  bool keep_cells = false;
  HillOptions hill;
};

/// Adaptive quadtree over the Hill-region bounding box with interval
/// evaluation of V and G_E under outward rounding.  A cell is discarded when
/// V > E on all of it and accepted when G_E > 0 on all of it.  Cells still
/// undecided at max_depth make the result inconclusive; a cell centre with
/// V <= E inside the region and G_E <= 0 is returned as a counterexample.
Certificate certify_positive(const PolynomialPotential& potential, double energy, const CertifyOptions& options = {});
inline Certificate certify_positive(const PolynomialPotential& potential, double energy, int max_depth) {
  CertifyOptions o;
  o.max_depth = max_depth;
  return certify_positive(potential, energy, o);
}

struct GridScan {
  double min_g = 0.0;
  Point2 argmin = Point2::Zero();
  std::size_t points = 0;
};

/// Pointwise minimum of G_E over an n x n grid restricted to the region.
GridScan scan_g_e(const PolynomialPotential& potential, const HillRegion& region, int n);

}  // namespace lensreeb
