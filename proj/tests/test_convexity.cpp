#include "doctest.h"

#include "lensreeb/convexity.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lensreeb;

namespace {

double hh_v(double x1, double x2) { return 0.5 * (x1 * x1 + x2 * x2) + x1 * x1 * x2 - x2 * x2 * x2 / 3.0; }

// The closed form obtained in the proof of convexity for Henon-Heiles.
double hh_identity(double e, double x1, double x2) {
  const double v = hh_v(x1, x2), r2 = x1 * x1 + x2 * x2;
  return 2 * (e - v) * (1 - 4 * r2) + (1 - 6 * v) * r2;
}

// V - 1/6 = -(1/3)(x2 + 1/2)(x2 - 1 + sqrt3 x1)(x2 - 1 - sqrt3 x1); the closed
// E = 1/6 triangle is where all three factors have the interior sign.
bool in_closed_triangle(const Point2& x, double slack = 0.0) {
  const double s3 = std::sqrt(3.0);
  return x[1] + 0.5 >= -slack && x[1] - 1 + s3 * x[0] <= slack && x[1] - 1 - s3 * x[0] <= slack;
}

}  // namespace

TEST_CASE("G_E closed form at sample points") {
  const PolynomialPotential v = henon_heiles_potential();
  CHECK(g_e(v, 0.1, {0, 0}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::abs(g_e(v, 1.0 / 6.0, {0, 1})) < 1e-15);
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-1, 1), ue(0, 1.0 / 6.0);
  const PotentialJet jet(v);
  for (int k = 0; k < 100000; ++k) {
    const double x1 = u(gen), x2 = u(gen), e = ue(gen);
    const double g = g_e(jet, e, {x1, x2});
    CHECK(std::abs(g - hh_identity(e, x1, x2)) < 1e-9 * (1 + std::abs(g)));
  }
}

TEST_CASE("harmonic G_E is 2E") {
  const PolynomialPotential v = harmonic_potential();
  CHECK(g_e(v, 0.3, {0.2, -0.4}) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("Hill region near the origin is a circle of radius sqrt(2E)") {
  const PolynomialPotential v = henon_heiles_potential();
  const HillRegion r = hill_region(v, 0.01, 256);
  REQUIRE(r.loops().size() == 1);
  // Solving r^2/2 + (r^3/3) sin(3 theta) = E perturbatively in r0 = sqrt(2E).
  const double r0 = std::sqrt(0.02);
  for (const Point2& p : r.loops()[0]) {
    const double s = std::sin(3 * std::atan2(p[1], p[0]));
    const double second_order = r0 - r0 * r0 * s / 3 + 5 * r0 * r0 * r0 * s * s / 18;
    CHECK(std::abs(p.norm() - second_order) < 3e-4);
    CHECK(std::abs(p.norm() - r0) < 8e-3);
    CHECK(std::abs(v.value(p[0], p[1]) - 0.01) < 1e-8);
  }
  CHECK(r.contains({0, 0}));
  CHECK_FALSE(r.contains({0.2, 0}));
}

TEST_CASE("Hill region at E = 1/6 reaches the triangle vertices") {
  const PolynomialPotential v = henon_heiles_potential();
  const HillRegion r = hill_region(v, 1.0 / 6.0, 512);
  const Point2 vertices[3] = {{0, 1}, {std::sqrt(3.0) / 2, -0.5}, {-std::sqrt(3.0) / 2, -0.5}};
  for (const Point2& vert : vertices) {
    double best = 1e9;
    for (const auto& loop : r.loops())
      for (const Point2& p : loop) best = std::min(best, (p - vert).norm());
    CHECK(best < 1e-6);
  }
}

TEST_CASE("Hill region boundaries below 1/6 stay inside the triangle") {
  const PolynomialPotential v = henon_heiles_potential();
  for (double e : {0.02, 0.08, 0.12, 0.16}) {
    const HillRegion r = hill_region(v, e, 256);
    for (const auto& loop : r.loops())
      for (const Point2& p : loop) CHECK(in_closed_triangle(p));
  }
}

TEST_CASE("Hill region errors") {
  const PolynomialPotential v = henon_heiles_potential();
  CHECK_THROWS_AS(hill_region(v, 0.25, 256), UnboundedRegionError);
  CHECK_THROWS_AS(hill_region(v, -0.1, 256), std::invalid_argument);
  CHECK_THROWS_AS(hill_region(v, 0.1, 16), std::invalid_argument);
  // Channels through the saddles narrower than the grid are still detected.
  CHECK_THROWS_AS(hill_region(v, 0.16667, 512), UnboundedRegionError);
  CHECK_THROWS_AS(hill_region(v, 1.0 / 6 + 1e-7, 256), UnboundedRegionError);
  CHECK_NOTHROW(hill_region(v, 1.0 / 6 - 1e-7, 256));
}

TEST_CASE("certification") {
  const PolynomialPotential v = henon_heiles_potential();
  const Certificate c = certify_positive(v, 0.10, 16);
  CHECK(c.status == CertificateStatus::ProvenPositive);
  CHECK(c.lower_bound > 0);
  CHECK(c.lower_bound <= 0.2);  // G_E(0) = 2E

  const Certificate h = certify_positive(harmonic_potential(), 0.3, 12);
  CHECK(h.status == CertificateStatus::ProvenPositive);
  CHECK(h.lower_bound > 0);
  CHECK(h.lower_bound <= 0.6 + 1e-12);

  const Certificate edge = certify_positive(v, 1.0 / 6.0, 9);
  CHECK(edge.status == CertificateStatus::Inconclusive);
  CHECK(edge.unresolved_cells > 0);
}

TEST_CASE("counterexample for a non-convex level") {
  // V = |x|^2/2 + x1^4 - 6 x1^2 x2^2 + x2^4: four saddles at energy 1/16; just
  // below that the Hill region is pinched along the diagonals and G_E < 0.
  const PolynomialPotential v({{2, 0, Coefficient::rational(1, 2)},
                               {0, 2, Coefficient::rational(1, 2)},
                               {4, 0, Coefficient::rational(1, 1)},
                               {2, 2, Coefficient::rational(-6, 1)},
                               {0, 4, Coefficient::rational(1, 1)}});
  const double e = 0.059375;
  const Certificate c = certify_positive(v, e, 14);
  REQUIRE(c.status == CertificateStatus::Counterexample);
  const Point2 w = *c.witness;
  CHECK(v.value(w[0], w[1]) <= e);
  CHECK(g_e(v, e, w) <= 0);
}

TEST_CASE("accepted cells are sound and G_E >= 2(E - V)(1 - r^2) on B_E") {
  const PolynomialPotential v = henon_heiles_potential();
  CertifyOptions o;
  o.max_depth = 16;
  o.keep_cells = true;
  const Certificate c = certify_positive(v, 0.15, o);
  REQUIRE(c.status == CertificateStatus::ProvenPositive);
  const PotentialJet jet(v);
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, c.cells.size() - 1);
  for (int k = 0; k < 1000; ++k) {
    const CertifiedCell& cell = c.cells[pick(gen)];
    const Point2 x(cell.box.x1_lo + u(gen) * (cell.box.x1_hi - cell.box.x1_lo),
                   cell.box.x2_lo + u(gen) * (cell.box.x2_hi - cell.box.x2_lo));
    CHECK(cell.g.contains(g_e(jet, 0.15, x)));
  }
  const HillRegion r = hill_region(v, 0.15);
  int inside = 0;
  std::uniform_real_distribution<double> ux(-1, 1);
  while (inside < 10000) {
    const Point2 x(ux(gen), ux(gen));
    if (!r.contains(x)) continue;
    ++inside;
    const double bound = 2 * (0.15 - hh_v(x[0], x[1])) * (1 - x.squaredNorm());
    CHECK(g_e(jet, 0.15, x) >= bound - 1e-9);
  }
}
