#include "doctest.h"

#include "lensreeb/interval.hpp"
#include "lensreeb/polynomial.hpp"

#include <cmath>
#include <random>

using namespace lensreeb;

TEST_CASE("coefficient parsing") {
  const Coefficient c = parse_coefficient("-2/6");
  CHECK(c.is_rational());
  CHECK(c.num() == -1);
  CHECK(c.den() == 3);
  CHECK(c.enclosure().contains(-1.0 / 3.0));
  CHECK(c.enclosure().lo < c.enclosure().hi);
  CHECK(parse_coefficient("7").value() == 7.0);
  CHECK(parse_coefficient("0.25").value() == 0.25);
  CHECK_THROWS(parse_coefficient("1/0"));
  CHECK_THROWS(parse_coefficient("abc"));
  CHECK_THROWS(parse_coefficient("1/2x"));
}

TEST_CASE("interval operations enclose point values") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 2000; ++k) {
    double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Interval x(a, b), y(c, d);
    const double s = a + (b - a) * 0.37, t = c + (d - c) * 0.81;
    CHECK((x * y).contains(s * t));
    CHECK((x + y).contains(s + t));
    CHECK((x - y).contains(s - t));
    for (int n = 0; n <= 6; ++n) CHECK(pow(x, n).contains(std::pow(s, n)));
  }
  CHECK(pow(Interval(-1, 2), 2).lo == 0.0);
  CHECK_THROWS(Interval(1, 0));
}

TEST_CASE("Henon-Heiles potential and closed-form derivatives") {
  const PolynomialPotential v = henon_heiles_potential();
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    const double x1 = u(gen), x2 = u(gen);
    const double ref = 0.5 * (x1 * x1 + x2 * x2) + x1 * x1 * x2 - x2 * x2 * x2 / 3.0;
    CHECK(v.value(x1, x2) == doctest::Approx(ref).epsilon(1e-14));
    const Eigen::Vector2d g = v.gradient(x1, x2);
    CHECK(g[0] == doctest::Approx(x1 + 2 * x1 * x2).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(x2 + x1 * x1 - x2 * x2).epsilon(1e-14));
    const Eigen::Matrix2d h = v.hessian(x1, x2);
    CHECK(h(0, 0) == 1 + 2 * x2);
    CHECK(h(1, 1) == 1 - 2 * x2);
    CHECK(h(0, 1) == 2 * x1);
    const PotentialJet jet(v);
    CHECK(jet.v11.value(x1, x2) == doctest::Approx(h(0, 0)).epsilon(1e-15));
    CHECK(jet.v12.value(x1, x2) == doctest::Approx(h(0, 1)).epsilon(1e-15));
    CHECK(jet.v2.value(x1, x2) == doctest::Approx(g[1]).epsilon(1e-14));
  }
  CHECK(std::abs(v.value(0, 1) - 1.0 / 6.0) < 1e-15);
  CHECK(std::abs(v.value(std::sqrt(3.0) / 2, -0.5) - 1.0 / 6.0) < 1e-15);
}

TEST_CASE("polynomial enclosure contains values") {
  const PolynomialPotential v = henon_heiles_potential();
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const Interval e = v.enclose({a, b}, {c, d});
    const double x1 = a + (b - a) * 0.3, x2 = c + (d - c) * 0.6;
    CHECK(e.contains(v.value(x1, x2)));
  }
}

TEST_CASE("Polynomial4 derivatives match finite differences") {
  const Polynomial4 p({{{1, 2, 0, 3}, Coefficient::rational(3, 7)}, {{0, 0, 4, 1}, Coefficient::real(-1.5)}});
  const Eigen::Vector4d x(0.3, -0.7, 0.5, 0.9);
  const double h = 1e-5;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d e = Eigen::Vector4d::Unit(i) * h;
    const double fd = (p.value(x + e) - p.value(x - e)) / (2 * h);
    CHECK(p.gradient(x)[i] == doctest::Approx(fd).epsilon(1e-8));
    const Eigen::Vector4d fdg = (p.gradient(x + e) - p.gradient(x - e)) / (2 * h);
    for (int j = 0; j < 4; ++j) CHECK(p.hessian(x)(j, i) == doctest::Approx(fdg[j]).epsilon(1e-7));
  }
}
