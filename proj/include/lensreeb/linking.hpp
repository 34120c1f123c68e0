#pragma once

// Linking numbers of closed curves on S^3, pushoffs along sections of xi and
// self-linking numbers of transverse unknots bounding explicit disks.
//
// Orientation convention: S^3 carries the orientation of lambda0 ^ d lambda0.
// With it, two Reeb fibres of the round sphere (Hopf fibres, oriented by the
// flow) link +1, and the round z1-circle has self-linking number -1.

#include "lensreeb/frames.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lensreeb {

class LinkingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed polygon on S^3; the last sample is joined back to the first.
struct ClosedCurve {
  std::vector<PhasePoint> points;

  /// Samples f(j / n), j = 0..n-1.
  static ClosedCurve sample(const std::function<PhasePoint(double)>& f, int n);

  /// Samples within 1e-8 of S^3 and chords shorter than 0.1; throws LinkingError.
  void validate() const;
  ClosedCurve reversed() const;
  std::size_t size() const { return points.size(); }
};

struct LinkOptions {
  double min_separation = 1e-5;  // curves closer than this are rejected
  double snap_tol = 0.1;         // |raw - nearest integer| above this is rejected
  std::optional<PhasePoint> pole;
};

struct LinkResult {
  int value = 0;
  double raw = 0.0;             // before rounding
  double separation = 0.0;      // min distance between samples of the two curves
  int orientation_sign = 1;     // of the stereographic chart used
  PhasePoint pole;
  std::size_t segment_pairs = 0;
};

/// Linking number via a stereographic chart avoiding both curves and the
/// exact Gauss integral of the two polygons (sum of signed solid angles of
/// segment pairs), corrected by the chart's orientation sign.
LinkResult gauss_link(const ClosedCurve& a, const ClosedCurve& b, const LinkOptions& options = {});

/// p -> cos(eps) p + sin(eps) v/|v|, v the tangential part of the section at p.
/// eps in [1e-4, 1e-2]; throws LinkingError when the section vanishes or the
/// pushoff comes within eps/2 of the curve.
ClosedCurve xi_pushoff(const ClosedCurve& k, const std::vector<TangentVector>& section, double eps);

struct SelfLinkOptions {
  double eps = 1e-3;
  DiskFrameOptions disk;
  LinkOptions link;
};

struct SelfLinkResult {
  int value = 0;
  LinkResult link;
  double min_transversality = 0.0;  // min |lambda0(K')| over unit chord directions
};

/// First vectors of the disk-class frame of xi_std along k.
std::vector<TangentVector> disk_section(const ClosedCurve& k, const SpanningDisk& disk,
                                        const DiskFrameOptions& options = {});

/// sl(K, u) = lk(K_eps, K) with K_eps the pushoff along the disk-class section.
SelfLinkResult self_linking(const ClosedCurve& k, const SpanningDisk& disk, const SelfLinkOptions& options = {});

/// Reeb orbit of the round sphere through p, t in [0, 1).
ClosedCurve hopf_fibre(const PhasePoint& p, int samples);

}  // namespace lensreeb
