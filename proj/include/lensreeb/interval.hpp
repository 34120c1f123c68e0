#pragma once

// Closed real intervals with outward rounding.
//
// Every operation is evaluated in round-to-nearest and then widened by one ulp
// on each side.  Round-to-nearest is off by at most half an ulp, so the
// widened result encloses the exact real result without touching the FPU
// rounding mode.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lensreeb {

inline double round_down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double round_up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  constexpr explicit Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("Interval: lower bound exceeds upper bound");
  }

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval operator+(Interval a, Interval b) { return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)}; }
inline Interval operator-(Interval a, Interval b) { return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {round_down(std::min({p1, p2, p3, p4})), round_up(std::max({p1, p2, p3, p4}))};
}

/// Integer power; even powers of intervals straddling 0 start at 0.
inline Interval pow(Interval a, int n) {
  if (n < 0) throw std::invalid_argument("Interval pow: negative exponent");
  if (n == 0) return Interval(1.0);
  Interval r = a;
  for (int k = 1; k < n; ++k) r = r * a;
  if (n % 2 == 0) {
    // Repeated products overestimate; tighten using monotonicity of |x|^n.
    const double m = std::max(std::abs(a.lo), std::abs(a.hi));
    double top = m;
    for (int k = 1; k < n; ++k) top = round_up(top * m);
    double bottom = 0.0;
    if (a.lo > 0.0 || a.hi < 0.0) {
      const double s = std::min(std::abs(a.lo), std::abs(a.hi));
      bottom = s;
      for (int k = 1; k < n; ++k) bottom = round_down(bottom * s);
      bottom = std::max(bottom, 0.0);
    }
    return {std::max(bottom, r.lo), std::min(top, r.hi)};
  }
  return r;
}

}  // namespace lensreeb
