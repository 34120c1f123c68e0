#include "doctest.h"
#include "test_support.hpp"

#include "lensreeb/geometry.hpp"

#include <cmath>
#include <numbers>

using namespace lensreeb;

namespace {

// Independent z-view formulas: omega0(u, v) = -Im sum conj(u_k) v_k and
// lambda0_p(v) = -1/2 Im sum conj(p_k) v_k.
double omega_z(const Vec4& u, const Vec4& v) {
  const Complex s = std::conj(Complex(u[0], u[2])) * Complex(v[0], v[2]) +
                    std::conj(Complex(u[1], u[3])) * Complex(v[1], v[3]);
  return -s.imag();
}
double lambda_z(const Vec4& p, const Vec4& v) { return 0.5 * omega_z(p, v); }

const Vec4 dx1 = Vec4::Unit(0), dx2 = Vec4::Unit(1), dy1 = Vec4::Unit(2), dy2 = Vec4::Unit(3);

}  // namespace

TEST_CASE("symplectic form basics") {
  CHECK(symplectic_form(dy1, dx1) == 1.0);
  CHECK(symplectic_form(dy2, dx2) == 1.0);
  CHECK(symplectic_form(dx1, dx2) == 0.0);
  std::mt19937_64 gen(1);
  for (int k = 0; k < 100; ++k) {
    const Vec4 u = testutil::random_vec(gen), v = testutil::random_vec(gen);
    CHECK(symplectic_form(u, u) == 0.0);
    CHECK(symplectic_form(u, v) == doctest::Approx(-symplectic_form(v, u)).epsilon(1e-14));
    CHECK(symplectic_form(u, v) == doctest::Approx(omega_z(u, v)).epsilon(1e-13));
  }
}

TEST_CASE("liouville form") {
  CHECK(liouville({1, 0, 0, 0}, dy1) == -0.5);
  CHECK(liouville({0, 0, 0, 0}, Vec4(1, 2, 3, 4)) == 0.0);
  CHECK(liouville({0, 1, 0, 0}, dx2) == 0.0);
  // d lambda0 = omega0: for the linear form, (d lambda)(u, v) = lambda_u(v) - lambda_v(u).
  std::mt19937_64 gen(2);
  for (int k = 0; k < 100; ++k) {
    const Vec4 u = testutil::random_vec(gen), v = testutil::random_vec(gen), p = testutil::random_vec(gen);
    const double dl = liouville(PhasePoint::from_vec(u), v) - liouville(PhasePoint::from_vec(v), u);
    CHECK(dl == doctest::Approx(symplectic_form(u, v)).epsilon(1e-13));
    CHECK(liouville(PhasePoint::from_vec(p), v) == doctest::Approx(lambda_z(p, v)).epsilon(1e-13));
  }
}

TEST_CASE("complex views round-trip") {
  const PhasePoint p{0.1, -0.2, 0.3, 0.4};
  const PhasePoint a = PhasePoint::from_z(p.z1(), p.z2());
  const PhasePoint b = PhasePoint::from_w(p.w1(), p.w2());
  CHECK(a.vec() == p.vec());
  CHECK(b.vec() == p.vec());
}

TEST_CASE("deck action") {
  const PhasePoint p{0.3, -0.5, 0.7, 0.1};
  CHECK((deck_action(2, 1, 1, p).vec() + p.vec()).norm() < 1e-15);
  const PhasePoint e = deck_action(4, 1, 1, {1, 0, 0, 0});
  CHECK((e.vec() - Vec4(0, 0, 1, 0)).norm() < 1e-15);  // z1 -> i z1
  CHECK_THROWS_AS(deck_action(4, 2, 1, p), GeometryError);
  CHECK_THROWS_AS(deck_action(0, 1, 1, p), GeometryError);

  std::mt19937_64 gen(3);
  for (int order = 1; order <= 7; ++order) {
    for (int q = 1; q < order + 2; ++q) {
      if (std::gcd(order, q) != 1) continue;
      const PhasePoint x = testutil::random_sphere_point(gen);
      CHECK((deck_action(order, q, order, x).vec() - x.vec()).norm() < 1e-12);
      const Vec4 v = testutil::random_vec(gen);
      for (int n = -2; n <= 3; ++n) {
        const Mat4 g = deck_matrix(order, q, n);
        const PhasePoint gx = deck_action(order, q, n, x);
        CHECK(std::abs(std::abs(gx.z1()) - std::abs(x.z1())) < 1e-14);
        CHECK(std::abs(liouville(gx, g * v) - liouville(x, v)) < 1e-12);
        CHECK(std::abs(symplectic_form(g * v, g * dx1) - symplectic_form(v, dx1)) < 1e-12);
      }
    }
  }
}

TEST_CASE("hat action") {
  const PhasePoint r = hat_action(1, {1, 0, 0, 0});
  CHECK((r.vec() - Vec4(-0.5, std::sqrt(3.0) / 2, 0, 0)).norm() < 1e-15);
  std::mt19937_64 gen(4);
  for (int k = 0; k < 100; ++k) {
    const PhasePoint x = testutil::random_sphere_point(gen);
    CHECK((hat_action(3, x).vec() - x.vec()).norm() < 1e-12);
    const Vec4 v = testutil::random_vec(gen);
    CHECK(std::abs(liouville(hat_action(1, x), hat_matrix(1) * v) - liouville(x, v)) < 1e-12);
  }
}

TEST_CASE("psi conjugates the Henon-Heiles action to g_{3,2}") {
  const Mat4& m = psi_matrix();
  CHECK((m.transpose() * m - Mat4::Identity()).norm() < 1e-14);
  // Printed formula, written out independently.
  const double s = 1.0 / std::sqrt(2.0);
  std::mt19937_64 gen(5);
  for (int k = 0; k < 1000; ++k) {
    const PhasePoint x = PhasePoint::from_vec(testutil::random_vec(gen));
    const Vec4 expected = s * Vec4(x.x1 - x.y2, -x.x1 - x.y2, x.x2 + x.y1, x.x2 - x.y1);
    CHECK((psi(x).vec() - expected).norm() < 1e-15);
    CHECK(std::abs(psi(x).norm() - x.norm()) < 1e-14);
    CHECK((psi(hat_action(1, x)).vec() - deck_action(3, 2, 1, psi(x)).vec()).norm() < 1e-12);
    const Vec4 v = testutil::random_vec(gen);
    CHECK(std::abs(liouville(psi(x), m * v) - liouville(x, v)) < 1e-12);
  }
}

TEST_CASE("global xi frame") {
  const FramePair f = global_xi_frame({1, 0, 0, 0});
  CHECK((f.f1 - dx2).norm() < 1e-15);  // f1 = (0, 1) in the z-view
  CHECK_THROWS_AS(global_xi_frame({2, 0, 0, 0}), GeometryError);
  std::mt19937_64 gen(6);
  for (int k = 0; k < 1000; ++k) {
    const PhasePoint p = testutil::random_sphere_point(gen);
    const FramePair fr = global_xi_frame(p);
    CHECK(std::abs(liouville(p, fr.f1)) < 1e-12);
    CHECK(std::abs(liouville(p, fr.f2)) < 1e-12);
    CHECK(std::abs(p.vec().dot(fr.f1)) < 1e-12);
    CHECK(std::abs(fr.f1.norm() - 1.0) < 1e-14);
    CHECK(symplectic_form(fr.f1, fr.f2) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stereographic projection") {
  std::mt19937_64 gen(7);
  for (int k = 0; k < 200; ++k) {
    const PhasePoint pole = testutil::random_sphere_point(gen);
    const PhasePoint p = testutil::random_sphere_point(gen);
    const Stereographic st(pole);
    CHECK((st.unproject(st.project(p)).vec() - p.vec()).norm() < 1e-10);
    CHECK(st.project(PhasePoint::from_vec(-pole.vec())).norm() < 1e-12);
    // Equator point.
    Vec4 e = testutil::random_vec(gen);
    e -= e.dot(pole.vec()) * pole.vec();
    CHECK(std::abs(st.project(PhasePoint::from_vec(e.normalized())).norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(stereographic({1, 0, 0, 0}, {1, 0, 0, 0}), GeometryError);
}

TEST_CASE("choose_pole keeps away from samples") {
  std::vector<PhasePoint> circle;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * std::numbers::pi * k / 64;
    circle.push_back({std::cos(t), 0, std::sin(t), 0});
  }
  const PhasePoint pole = choose_pole(circle);
  double dmin = 10;
  for (const auto& c : circle) dmin = std::min(dmin, (c.vec() - pole.vec()).norm());
  CHECK(dmin > 1.0);
  CHECK(std::abs(pole.norm() - 1.0) < 1e-14);
}
