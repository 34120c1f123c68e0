#include "lensreeb/json_io.hpp"

#include <cmath>
#include <numbers>

namespace lensreeb {

using nlohmann::json;

json to_json(const PhasePoint& p) { return json::array({p.x1, p.x2, p.y1, p.y2}); }

PhasePoint phase_point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("expected a point [x1, x2, y1, y2]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

namespace {
json box_json(const Box2& b) { return {{"x1", {b.x1_lo, b.x1_hi}}, {"x2", {b.x2_lo, b.x2_hi}}}; }
}  // namespace

json to_json(const HillRegion& region) {
  json loops = json::array();
  for (const auto& loop : region.loops()) {
    json l = json::array();
    for (const Point2& q : loop) l.push_back({q.x(), q.y()});
    loops.push_back(std::move(l));
  }
  return {{"energy", region.energy()}, {"bounding_box", box_json(region.bounding_box())}, {"loops", loops}};
}

json to_json(const Certificate& c) {
  json j{{"status", to_string(c.status)},
         {"energy", c.energy},
         {"lower_bound", c.lower_bound},
         {"accepted_cells", c.accepted_cells},
         {"discarded_cells", c.discarded_cells},
         {"unresolved_cells", c.unresolved_cells},
         {"max_depth_reached", c.max_depth_reached}};
  j["witness"] = c.witness ? json{c.witness->x(), c.witness->y()} : json(nullptr);
  return j;
}

json to_json(const GridScan& scan) {
  return {{"min_g", scan.min_g},
          {"argmin", {scan.argmin.x(), scan.argmin.y()}},
          {"points", scan.points},
          {"positive", scan.min_g > 0.0}};
}

json to_json(const PeriodicOrbit& orbit, int samples) {
  json j{{"model", orbit.model.name()},
         {"energy", orbit.energy},
         {"period", orbit.period},
         {"reeb_action", orbit.reeb_action},
         {"closure_residual", orbit.closure_residual},
         {"section_residual", orbit.section_residual},
         {"initial_state", to_json(orbit.states.front())},
         {"symmetry",
          {{"kind", orbit.symmetry.kind},
           {"p", orbit.symmetry.p},
           {"action", orbit.symmetry.action},
           {"residual", orbit.symmetry.residual}}}};
  json s = json::array();
  for (int i = 0; i < samples; ++i) {
    const double t = orbit.period * i / samples;
    const PhasePoint x = orbit.at(t);
    s.push_back({t, x.x1, x.x2, x.y1, x.y2});
  }
  j["samples"] = s;
  return j;
}

json to_json(const GeometricIndex& g) {
  return {{"index", g.index},
          {"delta_min", g.delta_min},
          {"delta_max", g.delta_max},
          {"degenerate", g.degenerate},
          {"near_boundary", g.near_boundary}};
}

json to_json(const SpectralIndex& s) {
  return {{"index", s.index},
          {"eta_negative", s.eta_negative},
          {"eta_nonnegative", s.eta_nonnegative},
          {"winding_negative", s.winding_negative},
          {"winding_nonnegative", s.winding_nonnegative},
          {"degenerate", s.degenerate},
          {"windings_consistent", s.windings_consistent}};
}

json to_json(const RotationNumber& r) { return {{"rho", r.rho}, {"kind", to_string(r.kind)}}; }

json to_json(const LinkResult& r) {
  return {{"value", r.value},
          {"raw", r.raw},
          {"separation", r.separation},
          {"orientation_sign", r.orientation_sign},
          {"pole", to_json(r.pole)},
          {"segment_pairs", r.segment_pairs}};
}

json to_json(const ClosedCurve& c) {
  json j = json::array();
  for (const PhasePoint& p : c.points) j.push_back(to_json(p));
  return j;
}

ClosedCurve curve_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("curve: expected an array of points");
  ClosedCurve c;
  for (const auto& p : j) c.points.push_back(phase_point_from_json(p));
  c.validate();
  return c;
}

SpanningDisk disk_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("disk: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "radial" && it.key() != "angular" && it.key() != "points" && it.key() != "centre") {
      throw std::invalid_argument("disk: unknown key '" + it.key() + "'");
    }
  }
  const int nr = j.at("radial").get<int>(), na = j.at("angular").get<int>();
  if (nr < 1 || na < 3) throw std::invalid_argument("disk: need radial >= 1 and angular >= 3");
  const auto& pts = j.at("points");
  if (!pts.is_array() || pts.size() != std::size_t(nr) * na) throw std::invalid_argument("disk: expected radial * angular points");
  std::vector<Vec4> grid;
  for (const auto& p : pts) grid.push_back(phase_point_from_json(p).vec());
  const Vec4 centre = phase_point_from_json(j.at("centre")).vec();

  return SpanningDisk(
      [grid, centre, nr, na](Complex z) {
        const double r = std::min(1.0, std::abs(z)) * nr;
        double a = std::arg(z) / (2 * std::numbers::pi) * na;
        if (a < 0) a += na;
        const int i0 = std::min(int(std::floor(r)), nr - 1);
        const double fr = r - i0;
        const int j0 = int(std::floor(a)) % na, j1 = (j0 + 1) % na;
        const double fa = a - std::floor(a);
        auto ring = [&](int i, int jj) -> Vec4 { return i == 0 ? centre : grid[std::size_t(i - 1) * na + jj]; };
        const Vec4 inner = (1 - fa) * ring(i0, j0) + fa * ring(i0, j1);
        const Vec4 outer = (1 - fa) * ring(i0 + 1, j0) + fa * ring(i0 + 1, j1);
        return PhasePoint::from_vec(((1 - fr) * inner + fr * outer).normalized());
      },
      "sampled");
}

}  // namespace lensreeb
