#include "lensreeb/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace lensreeb {

namespace {

Point2 newton_project(const PolynomialPotential& v, double energy, Point2 x) {
  for (int it = 0; it < 60; ++it) {
    const double f = v.value(x[0], x[1]) - energy;
    const Point2 g = v.gradient(x[0], x[1]);
    const double g2 = g.squaredNorm();
    if (f == 0.0 || g2 < 1e-300) break;
    Point2 step = (f / g2) * g;
    // Near critical points of V the Newton step can be large; keep it local.
    const double n = step.norm();
    if (n > 1e-2) step *= 1e-2 / n;
    x -= step;
    if (n < 1e-17) break;
  }
  return x;
}

// Crossing of V = E on the segment from a (V < E) to b (V >= E).
Point2 edge_crossing(const PolynomialPotential& v, double energy, const Point2& a, const Point2& b) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point2 m = a + mid * (b - a);
    if (v.value(m[0], m[1]) < energy) lo = mid;
    else hi = mid;
  }
  return a + 0.5 * (lo + hi) * (b - a);
}

// First crossing of V = E along the gradient ray from m (uphill when
// V(m) < E, downhill otherwise), searched within max_dist and bisected.
// Following the ray rather than iterating Newton keeps the result on the
// branch of the level set nearest to m, even next to saddles of V.
std::optional<Point2> ray_project(const PolynomialPotential& v, double energy, const Point2& m, double max_dist) {
  const double f0 = v.value(m[0], m[1]) - energy;
  if (f0 == 0.0) return m;
  Point2 dir = v.gradient(m[0], m[1]);
  if (dir.norm() < 1e-300) return std::nullopt;
  dir.normalize();
  if (f0 > 0.0) dir = -dir;
  double lo = 0.0, hi = 0.0;
  for (double s = 1e-4 * max_dist; s <= max_dist * (1 + 1e-12); s *= 2.0) {
    const Point2 x = m + s * dir;
    if ((v.value(x[0], x[1]) - energy > 0.0) != (f0 > 0.0)) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi == 0.0) return std::nullopt;
  for (int it = 0; it < 80 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point2 x = m + mid * dir;
    if ((v.value(x[0], x[1]) - energy > 0.0) != (f0 > 0.0)) hi = mid;
    else lo = mid;
  }
  return m + 0.5 * (lo + hi) * dir;
}

void refine_chord(const PolynomialPotential& v, double energy, double tol, const Point2& a, const Point2& b, int depth,
                  std::vector<Point2>& out) {
  const double len = (b - a).norm();
  const Point2 m = 0.5 * (a + b);
  const auto mp = ray_project(v, energy, m, len);
  if (!mp || (*mp - m).norm() <= tol || depth >= 60) return;
  refine_chord(v, energy, tol, a, *mp, depth + 1, out);
  out.push_back(*mp);
  refine_chord(v, energy, tol, *mp, b, depth + 1, out);
}

// At critical energies the level set is singular at saddles of V, and no
// projection reaches the saddle itself.  Critical points of V with V = E
// lying within `reach` of a traced vertex are inserted into the loop.
// Critical points of V reached by Newton from loop vertices where the gradient
// is small.
std::vector<Point2> critical_points_near(const PolynomialPotential& v, double reach, const std::vector<Point2>& loop) {
  std::vector<Point2> found;
  for (const Point2& start : loop) {
    if (v.gradient(start[0], start[1]).norm() > 4.0 * reach) continue;
    Point2 x = start;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const Eigen::Vector2d g = v.gradient(x[0], x[1]);
      const Eigen::Matrix2d h = v.hessian(x[0], x[1]);
      if (std::abs(h.determinant()) < 1e-14) break;
      const Point2 step = h.partialPivLu().solve(g);
      x -= step;
      if (step.norm() < 1e-15) {
        ok = true;
        break;
      }
    }
    if (!ok || (x - start).norm() > reach) continue;
    bool dup = false;
    for (const Point2& f : found) dup = dup || (f - x).norm() < 1e-12;
    if (!dup) found.push_back(x);
  }
  return found;
}

void insert_critical_points(const PolynomialPotential& v, double energy, double tol, double reach,
                            std::vector<Point2>& loop) {
  std::vector<Point2> found;
  for (const Point2& c : critical_points_near(v, reach, loop))
    if (std::abs(v.value(c[0], c[1]) - energy) <= tol) found.push_back(c);
  for (const Point2& c : found) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < loop.size(); ++i)
      if ((loop[i] - c).norm() < (loop[k] - c).norm()) k = i;
    if ((loop[k] - c).norm() < 1e-14) continue;
    const std::size_t n = loop.size();
    const std::size_t prev = (k + n - 1) % n, next = (k + 1) % n;
    const std::size_t at = (loop[prev] - c).norm() < (loop[next] - c).norm() ? k : k + 1;
    loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(at), c);
  }
}

}  // namespace

double g_e(const PotentialJet& jet, double energy, const Point2& x) {
  const double a = x[0], b = x[1];
  const double v = jet.v.value(a, b);
  const double v1 = jet.v1.value(a, b), v2 = jet.v2.value(a, b);
  const double v11 = jet.v11.value(a, b), v12 = jet.v12.value(a, b), v22 = jet.v22.value(a, b);
  return 2.0 * (energy - v) * (v11 * v22 - v12 * v12) + v11 * v2 * v2 + v22 * v1 * v1 - 2.0 * v1 * v2 * v12;
}

double g_e(const PolynomialPotential& potential, double energy, const Point2& x) {
  return g_e(PotentialJet(potential), energy, x);
}

Interval g_e_enclosure(const PotentialJet& jet, double energy, Interval x1, Interval x2) {
  const Interval v = jet.v.enclose(x1, x2);
  const Interval v1 = jet.v1.enclose(x1, x2), v2 = jet.v2.enclose(x1, x2);
  const Interval v11 = jet.v11.enclose(x1, x2), v12 = jet.v12.enclose(x1, x2), v22 = jet.v22.enclose(x1, x2);
  const Interval two(2.0);
  return two * (Interval(energy) - v) * (v11 * v22 - pow(v12, 2)) + v11 * pow(v2, 2) + v22 * pow(v1, 2) -
         two * v1 * v2 * v12;
}

HillRegion::HillRegion(double energy, std::vector<std::vector<Point2>> loops, Box2 bbox, PolynomialPotential potential)
    : energy_(energy), loops_(std::move(loops)), bbox_(bbox), potential_(std::move(potential)) {}

bool HillRegion::inside_boundary(const Point2& x) const {
  bool inside = false;
  for (const auto& loop : loops_) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2& a = loop[i];
      const Point2& b = loop[j];
      if ((a[1] > x[1]) != (b[1] > x[1])) {
        const double xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        if (x[0] < xc) inside = !inside;
      }
    }
  }
  return inside;
}

bool HillRegion::contains(const Point2& x) const {
  return potential_.value(x[0], x[1]) <= energy_ && inside_boundary(x);
}

HillRegion hill_region(const PolynomialPotential& potential, double energy, const HillOptions& options) {
  const int n = options.resolution;
  if (n < 32) throw std::invalid_argument("hill_region: resolution must be >= 32");
  if (!(energy > potential.value(0.0, 0.0))) throw std::invalid_argument("hill_region: requires E > V(0, 0)");
  const double r = options.half_width;
  const double h = 2.0 * r / n;
  auto coord = [&](int i) { return -r + (i + 0.5) * h; };
  auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };

  std::vector<char> below(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) below[idx(i, j)] = potential.value(coord(i), coord(j)) < energy;

  // Flood fill (4-connected) from the grid point nearest the origin.
  const int c0 = std::clamp(static_cast<int>(std::floor(r / h)), 0, n - 1);
  int si = c0, sj = c0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = std::max(0, c0 - 1); i <= std::min(n - 1, c0 + 1); ++i)
    for (int j = std::max(0, c0 - 1); j <= std::min(n - 1, c0 + 1); ++j) {
      const double d = std::hypot(coord(i), coord(j));
      if (below[idx(i, j)] && d < best) {
        best = d;
        si = i;
        sj = j;
      }
    }
  if (!below[idx(si, sj)]) throw std::invalid_argument("hill_region: grid too coarse to resolve the region");

  std::vector<char> comp(below.size(), 0);
  std::vector<std::pair<int, int>> stack{{si, sj}};
  comp[idx(si, sj)] = 1;
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
      throw UnboundedRegionError("hill_region: the component of {V < E} containing the origin reaches the search box |x| = " +
                                 std::to_string(r) + " (unbounded or too large)");
    }
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k], b = j + dj[k];
      if (below[idx(a, b)] && !comp[idx(a, b)]) {
        comp[idx(a, b)] = 1;
        stack.push_back({a, b});
      }
    }
  }

  // Marching squares on the component mask.  Grid edges are keyed as
  // horizontal (i,j)-(i+1,j) or vertical (i,j)-(i,j+1).
  auto hkey = [n](int i, int j) { return (static_cast<std::int64_t>(i) * n + j) * 2; };
  auto vkey = [n](int i, int j) { return (static_cast<std::int64_t>(i) * n + j) * 2 + 1; };
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> adj;
  std::unordered_map<std::int64_t, Point2> crossing;
  auto point_of = [&](std::int64_t key) {
    auto it = crossing.find(key);
    if (it != crossing.end()) return it->second;
    const std::int64_t cell = key / 2;
    const int i = static_cast<int>(cell / n), j = static_cast<int>(cell % n);
    const int i2 = (key % 2 == 0) ? i + 1 : i;
    const int j2 = (key % 2 == 0) ? j : j + 1;
    Point2 a(coord(i), coord(j)), b(coord(i2), coord(j2));
    if (!comp[idx(i, j)]) std::swap(a, b);
    const Point2 p = newton_project(potential, energy, edge_crossing(potential, energy, a, b));
    crossing.emplace(key, p);
    return p;
  };
  auto link = [&](std::int64_t a, std::int64_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };

  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const bool c[4] = {comp[idx(i, j)] != 0, comp[idx(i + 1, j)] != 0, comp[idx(i + 1, j + 1)] != 0,
                         comp[idx(i, j + 1)] != 0};
      // Edges in cyclic order: bottom, right, top, left; corner k sits between
      // edge k-1 and edge k (mod 4).
      const std::int64_t e[4] = {hkey(i, j), vkey(i + 1, j), hkey(i, j + 1), vkey(i, j)};
      std::vector<int> cut;
      for (int k = 0; k < 4; ++k)
        if (c[k] != c[(k + 1) % 4]) cut.push_back(k);
      if (cut.size() == 2) {
        link(e[cut[0]], e[cut[1]]);
      } else if (cut.size() == 4) {
        const bool centre_in = potential.value(coord(i) + 0.5 * h, coord(j) + 0.5 * h) < energy;
        // Separate the corners of the minority type: each segment cuts off one corner.
        for (int k = 0; k < 4; ++k) {
          if (c[k] != centre_in) link(e[(k + 3) % 4], e[k]);
        }
      }
    }
  }

  std::vector<std::vector<Point2>> loops;
  std::unordered_map<std::int64_t, char> used;
  std::vector<std::int64_t> keys;
  keys.reserve(adj.size());
  for (const auto& [k, _] : adj) keys.push_back(k);
  std::sort(keys.begin(), keys.end());  // deterministic traversal
  for (std::int64_t start : keys) {
    if (used[start]) continue;
    std::vector<std::int64_t> chain{start};
    used[start] = 1;
    std::int64_t prev = -1, cur = start;
    while (true) {
      const auto& nb = adj[cur];
      std::int64_t next = -1;
      for (std::int64_t cand : nb) {
        if (cand != prev && !used[cand]) {
          next = cand;
          break;
        }
      }
      if (next < 0) break;
      used[next] = 1;
      chain.push_back(next);
      prev = cur;
      cur = next;
    }
    if (chain.size() < 3) continue;
    std::vector<Point2> coarse;
    coarse.reserve(chain.size());
    for (std::int64_t k : chain) coarse.push_back(point_of(k));
    std::vector<Point2> loop;
    loop.reserve(coarse.size() * 2);
    for (std::size_t q = 0; q < coarse.size(); ++q) {
      const Point2& a = coarse[q];
      const Point2& b = coarse[(q + 1) % coarse.size()];
      loop.push_back(a);
      refine_chord(potential, energy, options.chord_tol, a, b, 0, loop);
    }
    // A saddle strictly below E next to the boundary opens a channel narrower
    // than the grid: the traced loop would wrongly close it off.
    for (const Point2& c : critical_points_near(potential, 2.0 * h, loop)) {
      const double vc = potential.value(c[0], c[1]);
      if (potential.hessian(c[0], c[1]).determinant() < 0 && vc < energy - options.boundary_tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "hill_region: {V < E} continues through the saddle (" << c[0] << ", " << c[1] << ") with V = " << vc
            << " < E = " << energy << "; the component containing the origin is not confined";
        throw UnboundedRegionError(msg.str());
      }
    }
    insert_critical_points(potential, energy, options.boundary_tol, 2.0 * h, loop);
    loops.push_back(std::move(loop));
  }
  if (loops.empty()) throw std::runtime_error("hill_region: no boundary found");

  Box2 box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& loop : loops) {
    for (const Point2& p : loop) {
      const double dv = std::abs(potential.value(p[0], p[1]) - energy);
      if (dv > options.boundary_tol) {
        throw std::runtime_error("hill_region: boundary vertex off the level set by " + std::to_string(dv));
      }
      box.x1_lo = std::min(box.x1_lo, p[0]);
      box.x1_hi = std::max(box.x1_hi, p[0]);
      box.x2_lo = std::min(box.x2_lo, p[1]);
      box.x2_hi = std::max(box.x2_hi, p[1]);
    }
  }
  // The region may bulge past the vertex hull by the chord deviation.
  const double pad = 1e-6 + 10.0 * options.chord_tol;
  box.x1_lo -= pad;
  box.x1_hi += pad;
  box.x2_lo -= pad;
  box.x2_hi += pad;
  return HillRegion(energy, std::move(loops), box, potential);
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::ProvenPositive: return "proven-positive";
    case CertificateStatus::Counterexample: return "counterexample";
    case CertificateStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Certificate certify_positive(const PolynomialPotential& potential, double energy, const CertifyOptions& options) {
  const HillRegion region = hill_region(potential, energy, options.hill);
  const PotentialJet jet(potential);
  Certificate cert;
  cert.energy = energy;
  cert.lower_bound = std::numeric_limits<double>::infinity();

  struct Item {
    Box2 box;
    int depth;
  };
  std::vector<Item> stack{{region.bounding_box(), 0}};
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    cert.max_depth_reached = std::max(cert.max_depth_reached, item.depth);
    const Box2& b = item.box;
    const Interval x1(b.x1_lo, b.x1_hi), x2(b.x2_lo, b.x2_hi);
    if (jet.v.enclose(x1, x2).lo > energy) {
      ++cert.discarded_cells;
      continue;
    }
    const Interval g = g_e_enclosure(jet, energy, x1, x2);
    if (g.lo > 0.0) {
      ++cert.accepted_cells;
      cert.lower_bound = std::min(cert.lower_bound, g.lo);
      if (options.keep_cells) cert.cells.push_back({b, g});
      continue;
    }
    const Point2 centre(x1.mid(), x2.mid());
    if (potential.value(centre[0], centre[1]) <= energy && g_e(jet, energy, centre) <= 0.0 &&
        region.inside_boundary(centre)) {
      cert.status = CertificateStatus::Counterexample;
      cert.witness = centre;
      return cert;
    }
    if (item.depth >= options.max_depth) {
      ++cert.unresolved_cells;
      continue;
    }
    const double m1 = x1.mid(), m2 = x2.mid();
    // Push in reverse so that the traversal order is lower-left first.
    stack.push_back({{m1, b.x1_hi, m2, b.x2_hi}, item.depth + 1});
    stack.push_back({{b.x1_lo, m1, m2, b.x2_hi}, item.depth + 1});
    stack.push_back({{m1, b.x1_hi, b.x2_lo, m2}, item.depth + 1});
    stack.push_back({{b.x1_lo, m1, b.x2_lo, m2}, item.depth + 1});
  }
  if (cert.unresolved_cells == 0 && cert.accepted_cells > 0) {
    cert.status = CertificateStatus::ProvenPositive;
  } else {
    cert.status = CertificateStatus::Inconclusive;
  }
  if (cert.accepted_cells == 0) cert.lower_bound = 0.0;
  return cert;
}

GridScan scan_g_e(const PolynomialPotential& potential, const HillRegion& region, int n) {
  const PotentialJet jet(potential);
  const Box2& b = region.bounding_box();
  GridScan scan;
  scan.min_g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 x(b.x1_lo + (i + 0.5) * (b.x1_hi - b.x1_lo) / n, b.x2_lo + (j + 0.5) * (b.x2_hi - b.x2_lo) / n);
      if (!region.contains(x)) continue;
      ++scan.points;
      const double g = g_e(jet, region.energy(), x);
      if (g < scan.min_g) {
        scan.min_g = g;
        scan.argmin = x;
      }
    }
  }
  return scan;
}

}  // namespace lensreeb
