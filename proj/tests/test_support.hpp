#pragma once

#include "lensreeb/geometry.hpp"

#include <random>

namespace testutil {

inline lensreeb::Vec4 random_vec(std::mt19937_64& gen, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(gen), u(gen), u(gen), u(gen)};
}

inline lensreeb::PhasePoint random_sphere_point(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  lensreeb::Vec4 v(n(gen), n(gen), n(gen), n(gen));
  return lensreeb::PhasePoint::from_vec(v.normalized());
}

}  // namespace testutil
