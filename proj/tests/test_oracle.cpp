#include "doctest.h"

#include "lensreeb/cz_index.hpp"
#include "lensreeb/ellipsoid_oracle.hpp"
#include "lensreeb/hamiltonian.hpp"

#include <cmath>
#include <numbers>

using namespace lensreeb;

namespace {
const double kPi = std::numbers::pi;
const double kR2 = std::pow(2.0, 0.25);
}  // namespace

TEST_CASE("oracle: quoted values at (1, 2^(1/4), 3)") {
  const EllipsoidData d = ellipsoid_oracle(1.0, kR2, 3);
  CHECK(d.p1.period_upstairs == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(d.p2.period_upstairs == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.p1.period_downstairs == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(d.k == 2);
  CHECK(d.p1.mu_disk == 3);
  CHECK(d.p2.mu_disk == 5);
  CHECK(d.mu_p1_p_equivariant == 5);
  CHECK(d.sl_downstairs == doctest::Approx(-1.0 / 3));
  CHECK(d.warnings.empty());
  const auto j = to_json(d);
  CHECK(j["mu_p1_p"] == 3);
  CHECK(j["mu_p2_p"] == 5);
  CHECK(to_json(ellipsoid_oracle(1.0, 1.189207, 3))["mu_p1_p"] == 3);
}

TEST_CASE("oracle: guards") {
  CHECK_FALSE(ellipsoid_oracle(1.0, 1.0, 3).warnings.empty());
  const EllipsoidData r = ellipsoid_oracle(1.0, std::sqrt(2.0), 2);
  REQUIRE(r.rational.has_value());
  CHECK(r.rational->numerator == 2);
  CHECK(r.rational->denominator == 1);
  CHECK_FALSE(ellipsoid_oracle(2.0, 3.0, 2).warnings.empty());  // ratio 9/4
  CHECK_FALSE(rational_witness(std::sqrt(2.0)).has_value());
  CHECK(rational_witness(355.0 / 113.0)->denominator == 113);
  CHECK_THROWS_AS(ellipsoid_oracle(2.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ellipsoid_oracle(1.0, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ellipsoid_oracle(-1.0, 2.0, 3), std::invalid_argument);
}

TEST_CASE("oracle agrees with the numerical pipeline") {
  struct Case {
    double r1, r2;
    int p;
  };
  for (const Case c : {Case{1.0, kR2, 3}, Case{1.0, 1.7, 4}, Case{0.8, 1.9, 2}}) {
    const EllipsoidData d = ellipsoid_oracle(c.r1, c.r2, c.p);
    const HamiltonianModel model = ellipsoid(c.r1, c.r2);
    for (int which : {1, 2}) {
      const OrbitRecord& rec = which == 1 ? d.p1 : d.p2;
      const PeriodicOrbit orbit = refine_periodic_orbit(model, 1.0, d.orbit_point(which, 0.3), 1e-13, 1200);
      CHECK(orbit.reeb_action == doctest::Approx(rec.period_upstairs).epsilon(1e-6));
      CHECK(orbit.period == doctest::Approx(rec.period_upstairs).epsilon(1e-6));
      // The closed form parametrizes the same circle in the same direction.
      const PhasePoint x0 = orbit.states.front();
      double shift = 0;
      for (int i = 0; i < 2000; ++i) {
        const double t = rec.period_upstairs * i / 2000;
        if ((d.orbit_point(which, t).vec() - x0.vec()).norm() < (d.orbit_point(which, shift).vec() - x0.vec()).norm()) {
          shift = t;
        }
      }
      double err = 0;
      for (int i = 0; i < 50; ++i) {
        const double t = orbit.period * i / 50;
        err = std::max(err, (orbit.at(t).vec() - d.orbit_point(which, t + shift).vec()).norm());
      }
      CHECK(err < 1e-2);

      const SpanningDisk disk = which == 1 ? ellipsoid_disk_p1(c.r1, c.r2) : ellipsoid_disk_p2(c.r1, c.r2);
      auto frame = disk_frame(model, disk);
      PathOptions o;
      o.samples_per_period = 1200;
      const SymplecticPath path = variational_path(orbit, *frame, 1, o);
      CHECK(rotation_number(path).rho == doctest::Approx(rec.rho_disk).epsilon(1e-6));
      CHECK(disk_class_index(orbit, disk, 1, o) == rec.mu_disk);

      if (which == 1) {
        auto af = section_frame(model, equivariant_section(c.p), "equivariant");
        const SymplecticPath ap = variational_path(orbit, *af, 1, o);
        CHECK(geometric_index(ap).index == d.mu_p1_p_equivariant);
        CHECK(rotation_number(quotient_path(ap, c.p)).rho ==
              doctest::Approx(d.rho_p1_downstairs_equivariant).epsilon(1e-6));
      }
    }
  }
}
