#pragma once

#include <random>

#include "crgeo/hermitian.hpp"

namespace crgeo::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline cplx rand_c(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

inline Vec3 rand_vec() { return Vec3(rand_c(), rand_c(), rand_c()); }

// Random point of S^3 as a ball-model null lift.
inline Vec3 rand_null_ball() {
  Eigen::Vector4d g;
  for (int i = 0; i < 4; ++i) g(i) = std::normal_distribution<double>()(rng());
  g.normalize();
  return Vec3(cplx(g(0), g(1)), cplx(g(2), g(3)), 1.0);
}

inline double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace crgeo::test
