#include "doctest.h"

#include "lensreeb/cz_index.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lensreeb;

namespace {
const double kPi = std::numbers::pi;
const double kR2 = std::pow(2.0, 0.25);

Mat2 constant_rotation_potential(double theta) { return 2 * kPi * theta * Mat2::Identity(); }

std::vector<Mat2> sample(const std::function<Mat2(double)>& S, int n) {
  std::vector<Mat2> out;
  for (int j = 0; j < n; ++j) out.push_back(S(double(j) / n));
  return out;
}

// Smooth random loop of symmetric matrices: a rotation part 2 pi c I plus a
// few Fourier modes.
struct RandomPotential {
  double c;
  Mat2 a0, a[3], b[3];
  Mat2 operator()(double t) const {
    Mat2 s = 2 * kPi * c * Mat2::Identity() + a0;
    for (int m = 0; m < 3; ++m) s += a[m] * std::cos(2 * kPi * (m + 1) * t) + b[m] * std::sin(2 * kPi * (m + 1) * t);
    return s;
  }
};

Mat2 random_symmetric(std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> n(0, scale);
  Mat2 m;
  m(0, 0) = n(gen), m(1, 1) = n(gen), m(0, 1) = m(1, 0) = n(gen);
  return m;
}

RandomPotential random_potential(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.5, 2.5);
  RandomPotential p;
  p.c = u(gen);
  p.a0 = random_symmetric(gen, 2.0);
  for (int m = 0; m < 3; ++m) p.a[m] = random_symmetric(gen, 2.0), p.b[m] = random_symmetric(gen, 2.0);
  return p;
}

bool comfortably_nondegenerate(const GeometricIndex& g) {
  auto far = [](double x) { return std::abs(x - std::round(x)) > 1e-3; };
  return !g.degenerate && far(g.delta_min) && far(g.delta_max);
}

PeriodicOrbit ellipsoid_orbit(double r1, double r2, bool first) {
  const PhasePoint seed = first ? PhasePoint{r1, 0, 0, 0} : PhasePoint{0, r2, 0, 0};
  return refine_periodic_orbit(ellipsoid(r1, r2), 1.0, seed, 1e-13, 1024);
}
}  // namespace

TEST_CASE("geometric index of rotations") {
  CHECK(geometric_index(rotation_path(0.7)).index == 1);
  CHECK(geometric_index(rotation_path(1.3)).index == 3);
  CHECK(geometric_index(rotation_path(2.5)).index == 5);
  CHECK(geometric_index(rotation_path(-0.3)).index == -1);
  CHECK(geometric_index(rotation_path(0.2)).index == 1);
  CHECK_FALSE(geometric_index(rotation_path(0.7)).degenerate);

  // A full turn is degenerate; the shifted-interval rule gives 1.
  const GeometricIndex full = geometric_index(rotation_path(1.0));
  CHECK(full.degenerate);
  CHECK(full.near_boundary);
  CHECK(full.index == 1);
}

TEST_CASE("geometric index: hyperbolic paths and coarse sampling") {
  Mat2 s;
  s << 1.0, 0.0, 0.0, -1.0;
  const SymplecticPath h = path_from_potential([&](double) { return s; });
  const GeometricIndex g = geometric_index(h);
  CHECK(g.index == 0);
  CHECK(g.delta_min < 0.0);
  CHECK(g.delta_max > 0.0);
  CHECK_THROWS_AS(geometric_index(rotation_path(5.0, 12)), ResolutionError);
}

TEST_CASE("spectral index of constant rotations, with winding bookkeeping") {
  for (double theta : {0.7, 1.3, -0.3, 2.2}) {
    const SpectralIndex s = spectral_index(sample([&](double) { return constant_rotation_potential(theta); }, 128), 128);
    CHECK(s.index == 2 * int(std::floor(theta)) + 1);
    CHECK(s.windings_consistent);
    CHECK(s.eta_negative == doctest::Approx(2 * kPi * (std::floor(theta) - theta)).epsilon(1e-10));
    for (const auto& [eta, w] : s.spectrum) CHECK(eta == doctest::Approx(2 * kPi * (w - theta)).epsilon(1e-9));
  }
  const SpectralIndex d = spectral_index(sample([&](double) { return constant_rotation_potential(1.0); }, 128), 128);
  CHECK(d.degenerate);
  CHECK(d.index == 1);
}

TEST_CASE("symmetric potential recovered from a path") {
  std::mt19937_64 gen(7);
  const RandomPotential p = random_potential(gen);
  const SymplecticPath path = path_from_potential(std::cref(p), 1024);
  CHECK(path.max_det_error < 1e-10);
  double defect = 1;
  const auto s = path_to_symmetric_potential(path, &defect);
  CHECK(defect < 1e-6);
  double err = 0;
  for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, (s[i] - p(path.t[i])).norm());
  CHECK(err < 1e-5);
}

TEST_CASE("geometric and spectral engines agree on random nondegenerate paths") {
  std::mt19937_64 gen(20240611);
  int compared = 0;
  std::vector<int> seen;
  while (compared < 24) {
    const RandomPotential p = random_potential(gen);
    const SymplecticPath path = path_from_potential(std::cref(p), 1024);
    const GeometricIndex g = geometric_index(path);
    if (!comfortably_nondegenerate(g)) continue;
    const SpectralIndex s = spectral_index(sample(std::cref(p), 256), 128);
    CHECK(s.windings_consistent);
    CHECK_MESSAGE(s.index == g.index, "c = " << p.c);
    seen.push_back(g.index);
    ++compared;
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::unique(seen.begin(), seen.end()) - seen.begin() >= 4);

  // From the path itself (finite-difference potential), at full resolution.
  const RandomPotential p = random_potential(gen);
  const SymplecticPath path = path_from_potential(std::cref(p), 1024);
  const GeometricIndex g = geometric_index(path);
  if (comfortably_nondegenerate(g)) CHECK(spectral_index(path, 512).index == g.index);
}

TEST_CASE("rotation numbers and iteration laws") {
  CHECK(rotation_number(rotation_path(0.3)).rho == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(rotation_number(rotation_path(0.3)).kind == MonodromyKind::Elliptic);

  std::mt19937_64 gen(99);
  int elliptic = 0, hyperbolic = 0;
  while (elliptic < 4 || hyperbolic < 2) {
    const RandomPotential p = random_potential(gen);
    const SymplecticPath path = path_from_potential(std::cref(p), 512);
    const RotationNumber r = rotation_number(path);
    if (r.kind == MonodromyKind::Parabolic) continue;
    if (r.kind == MonodromyKind::Hyperbolic) {
      if (hyperbolic >= 2) continue;
      ++hyperbolic;
      CHECK(std::abs(2 * r.rho - std::round(2 * r.rho)) < 1e-9);
    } else {
      if (elliptic >= 4) continue;
      ++elliptic;
    }
    for (int n = 1; n <= 6; ++n) {
      const SymplecticPath it = iterate_path(path, n);
      CHECK(rotation_number(path, n).rho == doctest::Approx(n * r.rho).epsilon(1e-8));
      const GeometricIndex g = geometric_index(it);
      if (g.degenerate || std::abs(n * r.rho - std::round(n * r.rho)) < 1e-6) continue;
      CHECK(g.index == iterate_index(r.rho, r.kind, n));
    }
  }
  CHECK(iterate_index(0.4, MonodromyKind::Elliptic, 3) == 3);
  CHECK(iterate_index(1.5, MonodromyKind::Hyperbolic, 3) == 9);
  CHECK_THROWS_AS(iterate_index(0.5, MonodromyKind::Elliptic, 2), IndexError);
  CHECK_THROWS_AS(iterate_index(0.3, MonodromyKind::Hyperbolic, 1), IndexError);
  CHECK(shift_class(3, -1) == 1);
}

TEST_CASE("rotation number of a strongly sheared elliptic path") {
  // C R(2 pi theta t) C^-1: same rotation number as R, very eccentric orbits.
  Mat2 c;
  c << 12.0, 3.0, 0.0, 1.0 / 12.0;
  for (double theta : {0.3, 1.45, -0.7}) {
    SymplecticPath path = rotation_path(theta, 8192);
    for (auto& m : path.phi) m = c * m * c.inverse();
    const RotationNumber r = rotation_number(path);
    CHECK(r.kind == MonodromyKind::Elliptic);
    CHECK(std::abs(r.rho - theta) < 1e-12);
    CHECK(std::abs(rotation_number(path, 3).rho - 3 * theta) < 1e-12);
  }
}

TEST_CASE("winding of complex sections and the equivariant frame") {
  for (int p = 2; p <= 6; ++p) {
    const EquivariantFrame a = equivariant_frame(p);
    CHECK(winding(a.z, a.z1) == 2 - p);
    CHECK(a.equivariance_residual() < 1e-12);
  }
  std::vector<Complex> zero(16, 0.0), one(16, 1.0);
  CHECK_THROWS_AS(winding(zero, one), ResolutionError);
  CHECK_THROWS_AS(equivariant_frame(1), std::invalid_argument);
}

TEST_CASE("ellipsoid: disk class rotation numbers and indices") {
  const PeriodicOrbit p1 = ellipsoid_orbit(1.0, kR2, true);
  const PeriodicOrbit p2 = ellipsoid_orbit(1.0, kR2, false);
  auto f1 = disk_frame(p1.model, ellipsoid_disk_p1(1.0, kR2));
  const SymplecticPath path1 = variational_path(p1, *f1);
  CHECK(path1.max_det_error < 1e-9);
  const RotationNumber r1 = rotation_number(path1);
  CHECK(r1.kind == MonodromyKind::Elliptic);
  CHECK(r1.rho == doctest::Approx(1 + 1 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(geometric_index(path1).index == 3);

  auto f2 = disk_frame(p2.model, ellipsoid_disk_p2(1.0, kR2));
  const SymplecticPath path2 = variational_path(p2, *f2);
  const RotationNumber r2 = rotation_number(path2);
  CHECK(r2.rho == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-8));
  CHECK(geometric_index(path2).index == 5);
  CHECK(spectral_index(path2, 512).index == 5);

  for (int n = 1; n <= 4; ++n) {
    CHECK(disk_class_index(p1, ellipsoid_disk_p1(1.0, kR2), n) == iterate_index(r1.rho, r1.kind, n));
  }

  // The global frame lies in the disk class along P1.
  auto g = global_frame(p1.model);
  CHECK(geometric_index(variational_path(p1, *g)).index == 3);
}

TEST_CASE("ellipsoid: equivariant class along the p-fold cover of P1") {
  const PeriodicOrbit p1 = ellipsoid_orbit(1.0, kR2, true);
  for (int p = 2; p <= 5; ++p) {
    const auto section = equivariant_section(p);
    // Z_p-equivariance of the transported section under g_{p,1}.
    const Mat4 g = deck_matrix(p, 1, 1);
    double eq = 0;
    for (const PhasePoint& x : p1.states) eq = std::max(eq, (g * section(x) - section(deck_action(p, 1, 1, x))).norm());
    CHECK(eq < 1e-12);

    // Winding against the disk frame.
    auto disk = disk_frame(p1.model, ellipsoid_disk_p1(1.0, kR2));
    std::vector<TangentVector> vals;
    std::vector<FramePair> frames;
    for (std::size_t i = 0; i < p1.states.size(); i += 4) {
      vals.push_back(section(p1.states[i]));
      frames.push_back(disk->frame(p1.states[i]));
    }
    CHECK(winding(vals, frames) == 2 - p);

    auto frame = section_frame(p1.model, section, "equivariant");
    PathOptions o;
    o.samples_per_period = 1200;  // divisible by p
    const SymplecticPath path = variational_path(p1, *frame, 1, o);
    CHECK(geometric_index(path).index == 2 * p - 1);
    CHECK(shift_class(3, -(2 - p)) == 2 * p - 1);
    auto twisted = disk_frame(p1.model, ellipsoid_disk_p1(1.0, kR2), {}, 2 - p);
    CHECK(geometric_index(variational_path(p1, *twisted)).index == 2 * p - 1);

    // Quotient orbit: rotation number in ((p - 1)/p, 1).
    const double rho = rotation_number(quotient_path(path, p)).rho;
    CHECK(rho > double(p - 1) / p);
    CHECK(rho < 1.0);
    CHECK(p * rho == doctest::Approx(rotation_number(path).rho).epsilon(1e-8));
  }
}
