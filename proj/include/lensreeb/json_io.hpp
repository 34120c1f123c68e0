#pragma once

// JSON documents emitted by the command-line tool and read back by tests.

#include "lensreeb/convexity.hpp"
#include "lensreeb/cz_index.hpp"
#include "lensreeb/linking.hpp"

#include "json.hpp"

namespace lensreeb {

nlohmann::json to_json(const PhasePoint& p);
PhasePoint phase_point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HillRegion& region);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const GridScan& scan);
/// Orbit summary with `samples` evenly spaced states (0: none).
nlohmann::json to_json(const PeriodicOrbit& orbit, int samples);
nlohmann::json to_json(const GeometricIndex& g);
nlohmann::json to_json(const SpectralIndex& s);
nlohmann::json to_json(const RotationNumber& r);
nlohmann::json to_json(const LinkResult& r);

/// [[x1, x2, y1, y2], ...]
nlohmann::json to_json(const ClosedCurve& c);
ClosedCurve curve_from_json(const nlohmann::json& j);

/// Disk given by samples on a polar grid:
///   {"radial": R, "angular": A, "points": [[x1, x2, y1, y2], ...]}
/// with R * A points, ring i = 1..R at radius i / R (row-major by ring) and
/// the centre given separately as "centre".  The map is bilinear in
/// (r, theta) and renormalized onto S^3.
SpanningDisk disk_from_json(const nlohmann::json& j);

}  // namespace lensreeb
