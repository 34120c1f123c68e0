#include "doctest.h"

#include "lensreeb/linking.hpp"

#include <cmath>
#include <numbers>

using namespace lensreeb;

namespace {
const double kPi = std::numbers::pi;

// Independent oracle: signed crossings of `a` over `b` in the xy-diagram of
// the stereographic image (same chart as the computation being checked).
int diagram_link(const ClosedCurve& a, const ClosedCurve& b, const PhasePoint& pole) {
  const Stereographic chart(pole);
  std::vector<Vec3> pa, pb;
  for (const auto& p : a.points) pa.push_back(chart.project(p));
  for (const auto& p : b.points) pb.push_back(chart.project(p));
  int count = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Vec3 a0 = pa[i], a1 = pa[(i + 1) % pa.size()];
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const Vec3 b0 = pb[j], b1 = pb[(j + 1) % pb.size()];
      const Eigen::Vector2d da = (a1 - a0).head<2>(), db = (b1 - b0).head<2>(), w = (b0 - a0).head<2>();
      const double den = da.x() * db.y() - da.y() * db.x();
      if (den == 0.0) continue;
      const double s = (w.x() * db.y() - w.y() * db.x()) / den;
      const double u = (w.x() * da.y() - w.y() * da.x()) / den;
      if (s < 0 || s >= 1 || u < 0 || u >= 1) continue;
      const double za = a0.z() + s * (a1.z() - a0.z()), zb = b0.z() + u * (b1.z() - b0.z());
      if (za > zb) count += den > 0 ? 1 : -1;
    }
  }
  return chart.orientation_sign() * count;
}

ClosedCurve small_circle(const PhasePoint& centre, double radius, int n) {
  const Vec4 q = centre.vec().normalized();
  Vec4 u(q[1], -q[0], q[3], -q[2]), v(q[2], -q[3], -q[0], q[1]);
  return ClosedCurve::sample(
      [&](double t) {
        const Vec4 x = q + radius * (std::cos(2 * kPi * t) * u + std::sin(2 * kPi * t) * v);
        return PhasePoint::from_vec(x.normalized());
      },
      n);
}

ClosedCurve z1_circle(int n) {
  return ClosedCurve::sample([](double t) { return PhasePoint::from_z(std::polar(1.0, -2 * kPi * t), 0.0); }, n);
}

SpanningDisk round_disk() {
  return SpanningDisk([](Complex z) { return PhasePoint::from_z(z, std::sqrt(std::max(0.0, 1 - std::norm(z)))); },
                      "round");
}
}  // namespace

TEST_CASE("Hopf pair: calibrated +1, matching the diagram count, stable under refinement") {
  for (int n : {256, 512, 1024}) {
    const ClosedCurve a = hopf_fibre({1, 0, 0, 0}, n), b = hopf_fibre({0, 1, 0, 0}, n);
    const LinkResult r = gauss_link(a, b);
    CHECK(r.value == 1);
    CHECK(std::abs(r.raw - 1.0) < 1e-9);
    CHECK(diagram_link(a, b, r.pole) == 1);
    CHECK(r.segment_pairs == std::size_t(n) * n);
  }
}

TEST_CASE("gauss_link: symmetry, antisymmetry, independence of the chart") {
  const ClosedCurve a = hopf_fibre({1, 0, 0, 0}, 400), b = hopf_fibre({0.6, 0, 0, 0.8}, 300);
  CHECK(gauss_link(a, b).value == gauss_link(b, a).value);
  CHECK(gauss_link(a.reversed(), b).value == -gauss_link(a, b).value);
  CHECK(gauss_link(a, b.reversed()).value == -gauss_link(a, b).value);
  LinkOptions o;
  for (const PhasePoint pole : {PhasePoint{0.5, 0.5, 0.5, 0.5}, PhasePoint{0, 0, 0.6, -0.8}, PhasePoint{-0.5, 0.5, -0.5, 0.5}}) {
    o.pole = pole;
    const LinkResult r = gauss_link(a, b, o);
    CHECK(r.value == 1);
    CHECK(diagram_link(a, b, pole) == 1);
  }
}

TEST_CASE("gauss_link: unlink and fibres related by a deck rotation") {
  const ClosedCurve c1 = small_circle({1, 0, 0, 0}, 0.05, 64), c2 = small_circle({0, 0, 0, 1}, 0.05, 64);
  CHECK(gauss_link(c1, c2).value == 0);

  const double s = 1 / std::sqrt(2.0);
  const ClosedCurve a = hopf_fibre({s, s, 0, 0}, 512);
  ClosedCurve b;
  for (const PhasePoint& p : a.points) b.points.push_back(deck_action(3, 2, 1, p));
  const LinkResult r = gauss_link(a, b);
  CHECK(r.value == 1);
  CHECK(diagram_link(a, b, r.pole) == 1);
}

TEST_CASE("gauss_link: input validation") {
  const ClosedCurve a = hopf_fibre({1, 0, 0, 0}, 256);
  CHECK_THROWS_AS(gauss_link(a, a), LinkingError);
  CHECK_THROWS_AS(gauss_link(hopf_fibre({1, 0, 0, 0}, 32), hopf_fibre({0, 1, 0, 0}, 256)), LinkingError);
  ClosedCurve off = a;
  off.points[3].x1 *= 1.01;
  CHECK_THROWS_AS(off.validate(), LinkingError);
}

TEST_CASE("xi_pushoff: distance and invariance in eps") {
  const ClosedCurve k = hopf_fibre({1, 0, 0, 0}, 1024);
  std::vector<TangentVector> section;
  for (const PhasePoint& p : k.points) section.push_back(global_xi_frame(p).f1);
  const ClosedCurve probe = hopf_fibre({0, 0.6, 0, 0.8}, 512);
  int first = 0;
  for (double eps : {1e-3, 5e-3}) {
    const ClosedCurve pushed = xi_pushoff(k, section, eps);
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double d = (pushed.points[i].vec() - k.points[i].vec()).norm();
      CHECK(std::abs(d / eps - 1) < 0.1);
      CHECK(std::abs(pushed.points[i].norm() - 1) < 1e-12);
    }
    const int lk = gauss_link(pushed, probe).value;
    if (eps == 1e-3) first = lk;
    CHECK(lk == first);
    CHECK_NOTHROW(gauss_link(pushed, k));
  }
  CHECK_THROWS_AS(xi_pushoff(k, section, 0.5), std::invalid_argument);
  std::vector<TangentVector> zero(k.size(), TangentVector::Zero());
  CHECK_THROWS_AS(xi_pushoff(k, zero, 1e-3), LinkingError);
}

TEST_CASE("self-linking of the round z1-circle is -1") {
  const ClosedCurve k = z1_circle(2048);
  SelfLinkOptions o;
  for (double eps : {1e-3, 5e-3}) {
    o.eps = eps;
    const SelfLinkResult r = self_linking(k, round_disk(), o);
    CHECK(r.value == -1);
    CHECK(r.min_transversality > 0.4);
    const ClosedCurve pushed = xi_pushoff(k, disk_section(k, round_disk()), eps);
    CHECK(diagram_link(pushed, k, r.link.pole) == -1);
  }
  // Another grid and another parametrization of the same disk.
  const SpanningDisk slow([](Complex z) {
    const Complex w = z * (1 + std::norm(z)) / 2.0;
    return PhasePoint::from_z(w, std::sqrt(std::max(0.0, 1 - std::norm(w))));
  });
  o.eps = 1e-3;
  o.disk.radial_steps = 97;
  CHECK(self_linking(z1_circle(1536), slow, o).value == -1);
  CHECK(self_linking(z1_circle(1536), round_disk(), o).value == -1);
}

TEST_CASE("self-linking rejects Legendrian curves") {
  const ClosedCurve leg = ClosedCurve::sample(
      [](double t) { return PhasePoint{std::cos(2 * kPi * t), std::sin(2 * kPi * t), 0, 0}; }, 512);
  CHECK_THROWS_AS(self_linking(leg, round_disk()), LinkingError);
}
